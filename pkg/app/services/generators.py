"""
Generators for the geometries the recogniser knows: polar spaces from forms,
line Grassmannians, half-spin geometries, projective spaces and the
PG(1,q) x PG(n,q) product that appears as a Grassmannian residue.
"""

import logging
from collections import defaultdict
from typing import Optional

from app.pydantic_models.family import Family, FamilyLabel
from app.pydantic_models.utils import FormKind
from app.services.algebra import (
    FieldTable,
    Subspace,
    combine,
    enumerate_subspaces,
    enumerate_totally_singular,
    field_of_order,
    projective_points,
    rank,
    standard_form,
    subspace_rref,
)
from app.services.errors import InstanceTooLarge, InvalidGeometry, RankTooSmall
from app.services.families import point_count
from app.services.geometry import Geometry

logger = logging.getLogger(__name__)

DEFAULT_MAX_POINTS = 5000

# CLI family names
POLAR_KINDS: dict[str, FormKind] = {
    "w": FormKind.alternating,
    "q": FormKind.parabolic,
    "qplus": FormKind.hyperbolic,
    "qminus": FormKind.elliptic,
}

KIND_FAMILY: dict[FormKind, Family] = {
    FormKind.alternating: Family.polar_w,
    FormKind.parabolic: Family.polar_q,
    FormKind.hyperbolic: Family.polar_qplus,
    FormKind.elliptic: Family.polar_qminus,
}


def polar_rank_of(kind: FormKind, vector_dim: int) -> int:
    match kind:
        case FormKind.parabolic:
            return (vector_dim - 1) // 2
        case FormKind.elliptic:
            return vector_dim // 2 - 1
        case _:
            return vector_dim // 2


def _guard(points: int, max_points: int, name: str) -> None:
    if points > max_points:
        raise InstanceTooLarge(
            f"{name} has {points} points, above the limit of {max_points}",
            points=points,
            limit=max_points,
        )


def _vector_label(v: tuple[int, ...]) -> str:
    return "".join(str(x) for x in v)


def _subspace_points(
    spaces: list[Subspace], field: FieldTable, index: dict[tuple[int, ...], int]
) -> list[list[int]]:
    return [[index[v] for v in projective_points(s, field)] for s in spaces]


def polar_space(
    kind: FormKind | str,
    projective_dim: int,
    q: int,
    max_points: int = DEFAULT_MAX_POINTS,
) -> Geometry:
    """Singular points and totally singular lines of the standard form of a kind."""
    kind = POLAR_KINDS[kind] if kind in POLAR_KINDS else FormKind(kind)
    field = field_of_order(q)
    d = projective_dim + 1
    form = standard_form(kind, d, field)
    r = polar_rank_of(kind, d)
    if r < 2:
        raise RankTooSmall(f"{kind} form on F^{d} has rank {r}", rank=r)
    if r >= 4 and q > 4:
        raise InstanceTooLarge(f"rank {r} polar spaces need q <= 4, got {q}", rank=r, q=q)
    _guard(point_count(KIND_FAMILY[kind], r, q), max_points, f"{kind} rank {r}")

    points = [s.basis[0] for s in enumerate_totally_singular(form, 1, field)]
    index = {v: i for i, v in enumerate(points)}
    lines = _subspace_points(list(enumerate_totally_singular(form, 2, field)), field, index)
    logger.info(f"Generated {kind} polar space of rank {r} over GF({q}): {len(points)} points, {len(lines)} lines")
    return Geometry.create(len(points), lines, [_vector_label(v) for v in points])


def projective_space(n: int, q: int, max_points: int = DEFAULT_MAX_POINTS) -> Geometry:
    """Points and lines of PG(n, q)."""
    if n < 1:
        raise RankTooSmall(f"PG({n},q) has no lines", n=n)
    field = field_of_order(q)
    _guard((q ** (n + 1) - 1) // (q - 1), max_points, f"PG({n},{q})")
    points = [s.basis[0] for s in enumerate_subspaces(n + 1, 1, field)]
    index = {v: i for i, v in enumerate(points)}
    lines = _subspace_points(list(enumerate_subspaces(n + 1, 2, field)), field, index)
    return Geometry.create(len(points), lines, [_vector_label(v) for v in points])


def segre_product(n: int, q: int, max_points: int = DEFAULT_MAX_POINTS) -> Geometry:
    """PG(1,q) x PG(n,q): point (a, b) has index a * |PG(n,q)| + b."""
    if n < 1:
        raise RankTooSmall(f"PG({n},q) has no lines", n=n)
    _guard(point_count(Family.segre, n, q), max_points, f"A_1,1xA_{n},1({q})")
    base = projective_space(n, q, max_points)
    width = base.n_points
    lines: list[list[int]] = []
    for a in range(q + 1):
        lines += [[a * width + b for b in line] for line in base.lines]
    for b in range(width):
        lines.append([a * width + b for a in range(q + 1)])
    labels = [f"{a}:{base.point_labels[b] if base.point_labels else b}" for a in range(q + 1) for b in range(width)]
    return Geometry.create((q + 1) * width, lines, labels)


def grassmann_lines(n: int, q: int, max_points: int = DEFAULT_MAX_POINTS) -> Geometry:
    """
    Lines of PG(n,q) as points; for each incident point-plane pair, the
    pencil of lines through the point inside the plane.
    """
    if n < 2:
        raise RankTooSmall(f"A_{n},2 needs n >= 2", n=n)
    if n > 6 or q > 3:
        raise InstanceTooLarge(f"A_{n},2({q}) is outside n <= 6, q <= 3", n=n, q=q)
    field = field_of_order(q)
    _guard(point_count(Family.grassmann, n, q), max_points, f"A_{n},2({q})")

    lines_of_space = list(enumerate_subspaces(n + 1, 2, field))
    index = {s: i for i, s in enumerate(lines_of_space)}

    # incidences of PG(2,q) in plane coordinates, reused for every plane
    plane_points = list(enumerate_subspaces(3, 1, field))
    plane_lines = list(enumerate_subspaces(3, 2, field))
    pencils_in_plane = [
        [j for j, m in enumerate(plane_lines) if rank(m.basis + p.basis, field) == 2]
        for p in plane_points
    ]

    pencils: list[list[int]] = []
    for plane in enumerate_subspaces(n + 1, 3, field):
        members = [
            index[subspace_rref([combine(c, plane.basis, field) for c in m.basis], field, n + 1)]
            for m in plane_lines
        ]
        pencils += [[members[j] for j in pencil] for pencil in pencils_in_plane]
    logger.info(f"Generated A_{n},2({q}): {len(lines_of_space)} points, {len(pencils)} lines")
    return Geometry.create(len(lines_of_space), pencils, [s.label() for s in lines_of_space])


def half_spin(n: int, q: int, max_points: int = DEFAULT_MAX_POINTS) -> Geometry:
    """
    One class of generators of the hyperbolic quadric on F^{2n}, the class
    of the first generator in enumeration order (generators W with
    n - dim(W meet base) even). A line is the set of class members through
    a totally singular (n-2)-space.
    """
    if n < 4:
        raise RankTooSmall(f"D_{n},{n} needs n >= 4", n=n)
    if n > 5 or q > 3:
        raise InstanceTooLarge(f"D_{n},{n}({q}) is outside n <= 5, q <= 3", n=n, q=q)
    field = field_of_order(q)
    _guard(point_count(Family.half_spin, n, q), max_points, f"D_{n},{n}({q})")

    form = standard_form(FormKind.hyperbolic, 2 * n, field)
    generators = list(enumerate_totally_singular(form, n, field))
    base = generators[0]
    members = [
        w for w in generators if (n - (2 * n - rank(w.basis + base.basis, field))) % 2 == 0
    ]
    coordinates = list(enumerate_subspaces(n, n - 2, field))
    through: dict[Subspace, list[int]] = defaultdict(list)
    for i, w in enumerate(members):
        for c in coordinates:
            u = subspace_rref([combine(row, w.basis, field) for row in c.basis], field, 2 * n)
            through[u].append(i)
    lines = list(through.values())
    if any(len(line) != q + 1 for line in lines):
        raise InvalidGeometry(f"half-spin lines of D_{n},{n}({q}) do not have {q + 1} points")
    logger.info(f"Generated D_{n},{n}({q}): {len(members)} points, {len(lines)} lines")
    return Geometry.create(len(members), lines, [w.label() for w in members])


def generate(label: FamilyLabel, max_points: int = DEFAULT_MAX_POINTS) -> Geometry:
    """Geometry named by a family label; E_6,1 and E_7,7 have no generator."""
    n, q = label.n, label.q
    match label.family:
        case Family.polar_w:
            return polar_space(FormKind.alternating, 2 * n - 1, q, max_points)
        case Family.polar_q:
            return polar_space(FormKind.parabolic, 2 * n, q, max_points)
        case Family.polar_qplus:
            return polar_space(FormKind.hyperbolic, 2 * n - 1, q, max_points)
        case Family.polar_qminus:
            return polar_space(FormKind.elliptic, 2 * n + 1, q, max_points)
        case Family.grassmann:
            return grassmann_lines(n, q, max_points)
        case Family.half_spin:
            return half_spin(n, q, max_points)
        case Family.segre:
            return segre_product(n, q, max_points)
    raise InstanceTooLarge(f"no generator for {label.display}", family=str(label.family))


def has_generator(label: FamilyLabel) -> bool:
    return label.family not in (Family.e6, Family.e7)


def reference_geometry(label: FamilyLabel, max_points: int = DEFAULT_MAX_POINTS) -> Optional[Geometry]:
    """generate() or None when the label has no generator or is too large."""
    if not has_generator(label):
        return None
    try:
        return generate(label, max_points)
    except InstanceTooLarge as exc:
        logger.info(f"No reference for {label.display}: {exc.message}")
        return None


def generate_named(
    family: str,
    q: int,
    n: Optional[int] = None,
    dim: Optional[int] = None,
    max_points: int = DEFAULT_MAX_POINTS,
) -> Geometry:
    """
    Command line names: w, q, qplus, qminus take a projective dimension or a
    rank; grassmann, halfspin, segre and pg take n.
    """
    if family in POLAR_KINDS:
        kind = POLAR_KINDS[family]
        if dim is None:
            if n is None:
                raise RankTooSmall(f"{family} needs a rank or a dimension")
            dim = {"w": 2 * n - 1, "q": 2 * n, "qplus": 2 * n - 1, "qminus": 2 * n + 1}[family]
        return polar_space(kind, dim, q, max_points)
    size = n if n is not None else dim
    if size is None:
        raise RankTooSmall(f"{family} needs n")
    match family:
        case "grassmann":
            return grassmann_lines(size, q, max_points)
        case "halfspin":
            return half_spin(size, q, max_points)
        case "segre":
            return segre_product(size, q, max_points)
        case "pg":
            return projective_space(size, q, max_points)
    raise InvalidGeometry(f"unknown family {family}", family=family)
