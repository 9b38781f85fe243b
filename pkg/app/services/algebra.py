"""
Finite fields of order at most 9, subspaces of F_q^d in reduced row echelon
form, and the alternating and quadratic forms that define polar spaces.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cache, cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from app.pydantic_models.utils import FormKind
from app.services.errors import (
    DegenerateForm,
    DimensionMismatch,
    FieldAxiomViolation,
    MalformedInput,
    NonPrimeCharacteristic,
    OrderTooLarge,
)

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]

MAX_FIELD_ORDER = 9

# Conway polynomials, coefficients of x^0 .. x^e
CONWAY_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
}


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Addition and multiplication tables of GF(p^e); elements are 0..q-1."""

    p: int
    e: int
    add: np.ndarray
    mul: np.ndarray
    neg: tuple[int, ...]
    inv: tuple[int, ...]  # inv[0] is unused
    primitive: int

    @property
    def q(self) -> int:
        return self.p**self.e

    @cached_property
    def add_rows(self) -> list[list[int]]:
        return self.add.tolist()

    @cached_property
    def mul_rows(self) -> list[list[int]]:
        return self.mul.tolist()

    def __repr__(self) -> str:
        return f"GF({self.q})"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


def _poly_digits(a: int, p: int, e: int) -> list[int]:
    return [(a // p**i) % p for i in range(e)]


def _poly_value(digits: Sequence[int], p: int) -> int:
    return sum(d * p**i for i, d in enumerate(digits))


def _poly_mul(a: int, b: int, p: int, e: int) -> int:
    da, db = _poly_digits(a, p, e), _poly_digits(b, p, e)
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    if e > 1:
        modulus = CONWAY_POLYNOMIALS[(p, e)]
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                for i, m in enumerate(modulus):
                    prod[k - e + i] = (prod[k - e + i] - c * m) % p
    return _poly_value(prod[:e], p)


def verify_field_axioms(table: FieldTable) -> None:
    """Check the field axioms over every triple with numpy broadcasting."""
    q = table.q
    r = np.arange(q)
    a, b, c = np.ix_(r, r, r)
    add, mul = table.add, table.mul
    checks = {
        "additive associativity": np.array_equal(add[add[a, b], c], add[a, add[b, c]]),
        "multiplicative associativity": np.array_equal(
            mul[mul[a, b], c], mul[a, mul[b, c]]
        ),
        "additive commutativity": np.array_equal(add, add.T),
        "multiplicative commutativity": np.array_equal(mul, mul.T),
        "additive identity": np.array_equal(add[0], r),
        "multiplicative identity": np.array_equal(mul[1], r),
        "zero absorbs": not mul[0].any(),
        "additive inverses": bool((add == 0).any(axis=1).all()),
        "multiplicative inverses": bool((mul[1:] == 1).any(axis=1).all()),
        "distributivity": np.array_equal(
            mul[a, add[b, c]], add[mul[a, b], mul[a, c]]
        ),
    }
    for name, ok in checks.items():
        if not ok:
            raise FieldAxiomViolation(f"{name} fails in GF({q})", axiom=name, q=q)


def _find_primitive(mul: list[list[int]], q: int) -> int:
    for g in range(1, q):
        x, order = g, 1
        while x != 1:
            x = mul[x][g]
            order += 1
        if order == q - 1:
            return g
    raise FieldAxiomViolation(f"GF({q}) has no primitive element", q=q)


@cache
def field_make(p: int, e: int = 1) -> FieldTable:
    """Build and verify GF(p^e) for p^e <= 9."""
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not a prime", p=p)
    if e < 1:
        raise MalformedInput(f"extension degree must be positive, got {e}", e=e)
    q = p**e
    if q > MAX_FIELD_ORDER:
        raise OrderTooLarge(f"field order {q} exceeds {MAX_FIELD_ORDER}", q=q)

    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for x in range(q):
        dx = _poly_digits(x, p, e)
        for y in range(q):
            dy = _poly_digits(y, p, e)
            add[x, y] = _poly_value([(s + t) % p for s, t in zip(dx, dy)], p)
            mul[x, y] = _poly_mul(x, y, p, e)

    mul_rows = mul.tolist()
    neg = tuple(int(np.flatnonzero(add[x] == 0)[0]) for x in range(q))
    inv = (0,) + tuple(mul_rows[x].index(1) if 1 in mul_rows[x] else 0 for x in range(1, q))
    table = FieldTable(
        p=p,
        e=e,
        add=add,
        mul=mul,
        neg=neg,
        inv=inv,
        primitive=_find_primitive(mul_rows, q),
    )
    verify_field_axioms(table)
    logger.debug("Built GF(%d) with primitive element %d", q, table.primitive)
    return table


def field_of_order(q: int) -> FieldTable:
    for p in range(2, q + 1):
        if q % p == 0:
            e, rest = 0, q
            while rest % p == 0:
                rest //= p
                e += 1
            if rest != 1:
                raise NonPrimeCharacteristic(f"{q} is not a prime power", q=q)
            return field_make(p, e)
    raise NonPrimeCharacteristic(f"{q} is not a prime power", q=q)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def projective_size(k: int, q: int) -> int:
    """Number of points of PG(k, q)."""
    return (q ** (k + 1) - 1) // (q - 1)


# Vectors and subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^d given by its reduced row echelon basis."""

    ambient_dim: int
    basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def label(self) -> str:
        return "|".join("".join(str(x) for x in row) for row in self.basis)


def _reduce(vectors: Iterable[Sequence[int]], field: FieldTable) -> list[list[int]]:
    add, mul = field.add_rows, field.mul_rows
    neg, inv = field.neg, field.inv
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    d = len(rows[0])
    top = 0
    for col in range(d):
        sel = next((i for i in range(top, len(rows)) if rows[i][col]), None)
        if sel is None:
            continue
        rows[top], rows[sel] = rows[sel], rows[top]
        pivot = rows[top]
        if pivot[col] != 1:
            s = mul[inv[pivot[col]]]
            pivot = rows[top] = [s[x] for x in pivot]
        for i, row in enumerate(rows):
            if i != top and row[col]:
                f = mul[neg[row[col]]]
                rows[i] = [add[a][f[b]] for a, b in zip(row, pivot)]
        top += 1
        if top == len(rows):
            break
    return rows[:top]


def subspace_rref(
    vectors: Iterable[Sequence[int]], field: FieldTable, ambient_dim: int | None = None
) -> Subspace:
    vectors = list(vectors)
    if ambient_dim is None:
        if not vectors:
            raise MalformedInput("ambient dimension of an empty spanning set is unknown")
        ambient_dim = len(vectors[0])
    if any(len(v) != ambient_dim for v in vectors):
        raise DimensionMismatch("vectors of mixed length", ambient_dim=ambient_dim)
    return Subspace(ambient_dim, tuple(tuple(r) for r in _reduce(vectors, field)))


def rank(vectors: Iterable[Sequence[int]], field: FieldTable) -> int:
    return len(_reduce(vectors, field))


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(
            f"subspaces of F^{a.ambient_dim} and F^{b.ambient_dim}",
        )


def join(a: Subspace, b: Subspace, field: FieldTable) -> Subspace:
    _same_ambient(a, b)
    return subspace_rref(a.basis + b.basis, field, a.ambient_dim)


def meet(a: Subspace, b: Subspace, field: FieldTable) -> Subspace:
    """Intersection by the Zassenhaus sum-intersection reduction."""
    _same_ambient(a, b)
    d = a.ambient_dim
    rows = [v + v for v in a.basis] + [v + (0,) * d for v in b.basis]
    if not rows:
        return Subspace(d, ())
    reduced = _reduce(rows, field)
    inside = [row[d:] for row in reduced if not any(row[:d])]
    return subspace_rref(inside, field, d)


def contains(space: Subspace, v: Sequence[int], field: FieldTable) -> bool:
    return rank(space.basis + (tuple(v),), field) == space.dim


def combine(coeffs: Sequence[int], basis: Sequence[Vector], field: FieldTable) -> Vector:
    add, mul = field.add_rows, field.mul_rows
    out = [0] * len(basis[0])
    for c, row in zip(coeffs, basis):
        if c:
            m = mul[c]
            out = [add[x][m[y]] for x, y in zip(out, row)]
    return tuple(out)


def normalized_vectors(k: int, q: int) -> Iterator[Vector]:
    """Nonzero vectors of F_q^k whose first nonzero entry is 1."""
    for lead in range(k):
        for rest in itertools.product(range(q), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + rest


def projective_points(space: Subspace, field: FieldTable) -> list[Vector]:
    """The normalized representatives of the points of a subspace."""
    return [
        combine(c, space.basis, field) for c in normalized_vectors(space.dim, field.q)
    ]


def _free_positions(pivots: Sequence[int], d: int) -> list[list[int]]:
    taken = set(pivots)
    return [[j for j in range(p + 1, d) if j not in taken] for p in pivots]


def _pivot_rows(p: int, free: list[int], d: int, q: int) -> Iterator[Vector]:
    for values in itertools.product(range(q), repeat=len(free)):
        row = [0] * d
        row[p] = 1
        for j, x in zip(free, values):
            row[j] = x
        yield tuple(row)


def enumerate_subspaces(d: int, k: int, field: FieldTable) -> Iterator[Subspace]:
    """
    Every k-dimensional subspace of F_q^d exactly once, ordered by pivot
    columns and then by the free entries.
    """
    if not 0 <= k <= d:
        raise MalformedInput(f"no {k}-dimensional subspaces of F^{d}", d=d, k=k)
    q = field.q
    for pivots in itertools.combinations(range(d), k):
        frees = _free_positions(pivots, d)
        options = [list(_pivot_rows(p, f, d, q)) for p, f in zip(pivots, frees)]
        for rows in itertools.product(*options):
            yield Subspace(d, rows)


# Forms


@dataclass(frozen=True)
class FormSpec:
    """
    An alternating form (coefficients = Gram matrix) or a quadratic form
    (coefficients = upper triangular c with Q(x) = sum c[i][j] x_i x_j).
    """

    kind: FormKind
    ambient_dim: int
    coefficients: tuple[tuple[int, ...], ...]

    @property
    def is_quadratic(self) -> bool:
        return self.kind != FormKind.alternating


def _irreducible_constant(field: FieldTable) -> int:
    add, mul = field.add_rows, field.mul_rows
    for c in range(1, field.q):
        if all(add[add[mul[t][t]][t]][c] for t in range(field.q)):
            return c
    raise FieldAxiomViolation(f"no irreducible t^2+t+c over GF({field.q})")


def _check_dimension(kind: FormKind, d: int) -> None:
    odd = kind == FormKind.parabolic
    if d < 2 or (d % 2 == 1) != odd:
        raise DegenerateForm(
            f"{kind} forms need {'odd' if odd else 'even'} dimension, got {d}",
            kind=str(kind),
            ambient_dim=d,
        )


def standard_form(kind: FormKind, d: int, field: FieldTable) -> FormSpec:
    """The canonical form of a kind on F_q^d."""
    kind = FormKind(kind)
    _check_dimension(kind, d)
    c = [[0] * d for _ in range(d)]
    if kind == FormKind.alternating:
        for i in range(0, d, 2):
            c[i][i + 1] = 1
            c[i + 1][i] = field.neg[1]
    else:
        start = 0
        if kind == FormKind.parabolic:
            c[0][0] = 1
            start = 1
        elif kind == FormKind.elliptic:
            c[0][0], c[0][1], c[1][1] = 1, 1, _irreducible_constant(field)
            start = 2
        for i in range(start, d, 2):
            c[i][i + 1] = 1
    form = FormSpec(kind, d, tuple(tuple(row) for row in c))
    validate_form(form, field)
    return form


@cache
def gram_matrix(form: FormSpec, field: FieldTable) -> tuple[tuple[int, ...], ...]:
    """Gram matrix of the bilinear form (the polarization for quadratic forms)."""
    if not form.is_quadratic:
        return form.coefficients
    add = field.add_rows
    c = form.coefficients
    d = form.ambient_dim
    return tuple(
        tuple(add[c[i][i]][c[i][i]] if i == j else add[c[i][j]][c[j][i]] for j in range(d))
        for i in range(d)
    )


def _apply(matrix: Sequence[Sequence[int]], v: Sequence[int], field: FieldTable) -> Vector:
    return tuple(dot(row, v, field) for row in matrix)


def dot(u: Sequence[int], v: Sequence[int], field: FieldTable) -> int:
    add, mul = field.add_rows, field.mul_rows
    total = 0
    for x, y in zip(u, v):
        if x and y:
            total = add[total][mul[x][y]]
    return total


def bilinear(form: FormSpec, u: Sequence[int], v: Sequence[int], field: FieldTable) -> int:
    return dot(u, _apply(gram_matrix(form, field), v, field), field)


def quadratic_value(form: FormSpec, v: Sequence[int], field: FieldTable) -> int:
    if not form.is_quadratic:
        return 0
    add, mul = field.add_rows, field.mul_rows
    total = 0
    for i, row in enumerate(form.coefficients):
        if not v[i]:
            continue
        for j in range(i, form.ambient_dim):
            if row[j] and v[j]:
                total = add[total][mul[row[j]][mul[v[i]][v[j]]]]
    return total


def is_isotropic(v: Sequence[int], form: FormSpec, field: FieldTable) -> bool:
    """Always true for alternating forms; Q(v) = 0 for quadratic ones."""
    if len(v) != form.ambient_dim:
        raise DimensionMismatch(
            f"vector of length {len(v)} against a form on F^{form.ambient_dim}"
        )
    if not any(v):
        raise MalformedInput("the zero vector is not a projective point")
    return quadratic_value(form, v, field) == 0


def is_totally_singular(space: Subspace, form: FormSpec, field: FieldTable) -> bool:
    """Q and its polarization (or the alternating form) vanish on the subspace."""
    if space.ambient_dim != form.ambient_dim:
        raise DimensionMismatch("subspace and form live in different dimensions")
    if not all(is_isotropic(v, form, field) for v in space.basis):
        return False
    return all(
        bilinear(form, u, v, field) == 0
        for u, v in itertools.combinations(space.basis, 2)
    )


def nullspace(matrix: Sequence[Sequence[int]], field: FieldTable) -> Subspace:
    d = len(matrix[0])
    reduced = _reduce(matrix, field)
    pivots = [row.index(next(x for x in row if x)) for row in reduced]
    basis = []
    for f in (j for j in range(d) if j not in pivots):
        v = [0] * d
        v[f] = 1
        for row, p in zip(reduced, pivots):
            v[p] = field.neg[row[f]]
        basis.append(v)
    return subspace_rref(basis, field, d)


def validate_form(form: FormSpec, field: FieldTable) -> None:
    """Raise DegenerateForm unless the form is nondegenerate (nonsingular)."""
    d = form.ambient_dim
    _check_dimension(FormKind(form.kind), d)
    c = form.coefficients
    if not form.is_quadratic:
        for i in range(d):
            if c[i][i] or any(c[i][j] != field.neg[c[j][i]] for j in range(d)):
                raise DegenerateForm("Gram matrix is not alternating", row=i)
    radical = nullspace(gram_matrix(form, field), field)
    if not form.is_quadratic and radical.dim:
        raise DegenerateForm("alternating form has a radical", radical=radical.dim)
    if radical.dim > 1 or any(
        is_isotropic(v, form, field) for v in projective_points(radical, field)
    ):
        raise DegenerateForm(
            f"{form.kind} form is singular", radical=radical.dim, q=field.q
        )


def enumerate_totally_singular(
    form: FormSpec, k: int, field: FieldTable
) -> Iterator[Subspace]:
    """
    Totally singular k-subspaces, each exactly once, in the order of
    enumerate_subspaces. Rows are grown one at a time and must be singular
    and orthogonal to the rows already chosen.
    """
    d, q = form.ambient_dim, field.q
    if not 0 <= k <= d:
        raise MalformedInput(f"no {k}-dimensional subspaces of F^{d}", d=d, k=k)
    gram = gram_matrix(form, field)
    for pivots in itertools.combinations(range(d), k):
        options: list[list[tuple[Vector, Vector]]] = []
        for p, free in zip(pivots, _free_positions(pivots, d)):
            rows = [
                (row, _apply(gram, row, field))
                for row in _pivot_rows(p, free, d, q)
                if is_isotropic(row, form, field)
            ]
            if not rows:
                break
            options.append(rows)
        else:
            yield from _orthogonal_rows(options, (), (), d, field)


def _orthogonal_rows(
    options: list[list[tuple[Vector, Vector]]],
    chosen: tuple[Vector, ...],
    duals: tuple[Vector, ...],
    d: int,
    field: FieldTable,
) -> Iterator[Subspace]:
    if len(chosen) == len(options):
        yield Subspace(d, chosen)
        return
    for row, image in options[len(chosen)]:
        if all(dot(row, w, field) == 0 for w in duals):
            yield from _orthogonal_rows(
                options, chosen + (row,), duals + (image,), d, field
            )


def witt_index(form: FormSpec, field: FieldTable) -> int:
    """Dimension of the maximal totally singular subspaces."""
    d = form.ambient_dim
    points = [s.basis[0] for s in enumerate_totally_singular(form, 1, field)]
    bound = d // 2
    best = 0
    seen: set[Subspace] = set()
    stack = [Subspace(d, ())]
    while stack and best < bound:
        space = stack.pop()
        best = max(best, space.dim)
        for v in points:
            if space.dim and contains(space, v, field):
                continue
            if all(bilinear(form, v, b, field) == 0 for b in space.basis):
                bigger = subspace_rref(space.basis + (v,), field, d)
                if bigger not in seen:
                    seen.add(bigger)
                    stack.append(bigger)
    return best
