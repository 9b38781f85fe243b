import numpy as np
import pytest

from app.pydantic_models.utils import FormKind
from app.services.algebra import (
    contains,
    enumerate_subspaces,
    enumerate_totally_singular,
    field_make,
    field_of_order,
    gaussian_binomial,
    is_isotropic,
    join,
    meet,
    normalized_vectors,
    projective_points,
    projective_size,
    rank,
    standard_form,
    subspace_rref,
    witt_index,
)
from app.services.errors import (
    DegenerateForm,
    DimensionMismatch,
    MalformedInput,
    NonPrimeCharacteristic,
    OrderTooLarge,
)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_field_inverses(q):
    field = field_of_order(q)
    assert field.q == q
    for a in range(1, q):
        assert field.mul_rows[a][field.inv[a]] == 1
        assert field.add_rows[a][field.neg[a]] == 0


def test_field_distributive_gf4():
    field = field_make(2, 2)
    add, mul = field.add_rows, field.mul_rows
    for a in range(4):
        for b in range(4):
            for c in range(4):
                assert mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]


def test_primitive_element_generates():
    field = field_make(3, 2)
    seen, x = set(), 1
    for _ in range(8):
        x = field.mul_rows[x][field.primitive]
        seen.add(x)
    assert seen == set(range(1, 9))


def test_field_guards():
    with pytest.raises(NonPrimeCharacteristic):
        field_make(4)
    with pytest.raises(NonPrimeCharacteristic):
        field_of_order(6)
    with pytest.raises(OrderTooLarge):
        field_of_order(11)
    with pytest.raises(MalformedInput):
        field_make(2, 0)


def test_gaussian_binomial():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 2, 2) == 155
    assert gaussian_binomial(3, 0, 5) == 1
    assert gaussian_binomial(2, 3, 2) == 0
    assert projective_size(2, 3) == 13


def test_rank_and_rref():
    field = field_make(2)
    vectors = [(1, 0, 1), (0, 1, 1), (1, 1, 0)]
    assert rank(vectors, field) == 2
    space = subspace_rref(vectors, field)
    assert space.basis == ((1, 0, 1), (0, 1, 1))
    assert contains(space, (1, 1, 0), field)
    assert not contains(space, (0, 0, 1), field)


def test_rref_errors():
    field = field_make(3)
    with pytest.raises(DimensionMismatch):
        subspace_rref([(1, 0), (1, 0, 0)], field)
    with pytest.raises(MalformedInput):
        subspace_rref([], field)
    assert subspace_rref([], field, 3).dim == 0


def test_join_and_meet():
    field = field_make(2)
    a = subspace_rref([(1, 0, 0), (0, 1, 0)], field)
    b = subspace_rref([(0, 1, 0), (0, 0, 1)], field)
    assert join(a, b, field).dim == 3
    assert meet(a, b, field).basis == ((0, 1, 0),)
    with pytest.raises(DimensionMismatch):
        meet(a, subspace_rref([(1, 0)], field), field)


def test_enumerate_subspaces_counts():
    field = field_make(2)
    lines = list(enumerate_subspaces(4, 2, field))
    assert len(lines) == gaussian_binomial(4, 2, 2)
    assert len(set(lines)) == len(lines)
    assert all(len(projective_points(s, field)) == 3 for s in lines)
    with pytest.raises(MalformedInput):
        list(enumerate_subspaces(3, 4, field))


def test_standard_form_dimension_parity():
    field = field_make(2)
    with pytest.raises(DegenerateForm):
        standard_form(FormKind.parabolic, 4, field)
    with pytest.raises(DegenerateForm):
        standard_form(FormKind.alternating, 3, field)


def test_symplectic_singular_subspaces():
    field = field_make(2)
    form = standard_form(FormKind.alternating, 4, field)
    assert len(list(enumerate_totally_singular(form, 1, field))) == 15
    assert len(list(enumerate_totally_singular(form, 2, field))) == 15


def test_parabolic_points():
    field = field_make(3)
    form = standard_form(FormKind.parabolic, 5, field)
    points = list(enumerate_totally_singular(form, 1, field))
    assert len(points) == 40
    assert all(is_isotropic(p.basis[0], form, field) for p in points)


@pytest.mark.parametrize(
    "kind, d, expected",
    [
        (FormKind.hyperbolic, 4, 2),
        (FormKind.elliptic, 4, 1),
        (FormKind.parabolic, 5, 2),
        (FormKind.alternating, 6, 3),
    ],
)
def test_witt_index(kind, d, expected):
    field = field_make(2)
    assert witt_index(standard_form(kind, d, field), field) == expected


def test_modular_dimension_identity():
    field = field_make(3)
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = subspace_rref(rng.integers(0, 3, (int(rng.integers(1, 4)), 5)).tolist(), field, 5)
        b = subspace_rref(rng.integers(0, 3, (int(rng.integers(1, 4)), 5)).tolist(), field, 5)
        assert a.dim + b.dim == meet(a, b, field).dim + join(a, b, field).dim


@pytest.mark.parametrize("q", [2, 3, 4])
def test_subspace_counts_match_the_gaussian_binomial(q):
    field = field_of_order(q)
    for d in range(1, 5):
        for k in range(d + 1):
            assert sum(1 for _ in enumerate_subspaces(d, k, field)) == gaussian_binomial(d, k, q)


def test_hyperbolic_quadric_points():
    field = field_make(2)
    form = standard_form(FormKind.hyperbolic, 6, field)
    points = [v for v in normalized_vectors(6, 2) if is_isotropic(v, form, field)]
    assert len(points) == 35


@pytest.mark.parametrize(
    "kind, d, q, expected",
    [
        (FormKind.hyperbolic, 8, 2, 4),
        (FormKind.elliptic, 6, 2, 2),
        (FormKind.alternating, 8, 2, 4),
        (FormKind.alternating, 6, 3, 3),
    ],
)
def test_witt_index_of_larger_forms(kind, d, q, expected):
    field = field_of_order(q)
    assert witt_index(standard_form(kind, d, field), field) == expected
