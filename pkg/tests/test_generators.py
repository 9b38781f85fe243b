import pytest

from app.pydantic_models.family import Family, FamilyLabel
from app.services.errors import (
    InstanceTooLarge,
    InvalidGeometry,
    NonPrimeCharacteristic,
    OrderTooLarge,
    RankTooSmall,
)
from app.services.families import point_count
from app.services.generators import (
    generate,
    generate_named,
    grassmann_lines,
    half_spin,
    polar_space,
    projective_space,
    reference_geometry,
    segre_product,
)
from app.services.geometry import check_grid, check_partial_linear, check_shult, polar_rank


@pytest.mark.parametrize(
    "kind, dim, q, points, lines",
    [
        ("w", 3, 2, 15, 15),
        ("w", 3, 3, 40, 40),
        ("q", 4, 3, 40, 40),
        ("qminus", 5, 2, 27, 45),
        ("qplus", 5, 2, 35, 105),
        ("w", 5, 2, 63, 315),
    ],
)
def test_polar_space_sizes(kind, dim, q, points, lines):
    geometry = polar_space(kind, dim, q)
    assert geometry.n_points == points
    assert len(geometry.lines) == lines
    assert check_partial_linear(geometry).holds
    assert check_shult(geometry).holds


def test_polar_space_points_match_the_table():
    assert polar_space("q", 6, 2).n_points == point_count(Family.polar_q, 3, 2)
    assert polar_space("qminus", 7, 2).n_points == point_count(Family.polar_qminus, 3, 2)


def test_polar_space_guards():
    with pytest.raises(RankTooSmall):
        polar_space("w", 1, 2)
    with pytest.raises(RankTooSmall):
        polar_space("qminus", 3, 2)
    with pytest.raises(NonPrimeCharacteristic):
        polar_space("w", 3, 6)
    with pytest.raises(OrderTooLarge):
        polar_space("w", 3, 11)
    with pytest.raises(InstanceTooLarge):
        polar_space("w", 3, 2, max_points=10)


def test_projective_space():
    fano = projective_space(2, 2)
    assert fano.n_points == 7
    assert len(fano.lines) == 7
    with pytest.raises(RankTooSmall):
        projective_space(0, 2)


def test_segre_product_of_two_lines_is_a_grid():
    grid = segre_product(1, 2)
    assert grid.n_points == 9
    assert check_grid(grid, 2)
    assert segre_product(2, 2).n_points == point_count(Family.segre, 2, 2)


def test_line_grassmannian_of_pg3_is_the_klein_quadric():
    geometry = grassmann_lines(3, 2)
    assert geometry.n_points == 35
    assert polar_rank(geometry).rank == 3
    with pytest.raises(RankTooSmall):
        grassmann_lines(1, 2)
    with pytest.raises(InstanceTooLarge):
        grassmann_lines(4, 4)


@pytest.mark.slow
def test_half_spin_d44_is_a_rank_four_polar_space():
    geometry = half_spin(4, 2)
    assert geometry.n_points == point_count(Family.half_spin, 4, 2) == 135
    assert polar_rank(geometry).rank == 4


def test_half_spin_guards():
    with pytest.raises(RankTooSmall):
        half_spin(3, 2)
    with pytest.raises(InstanceTooLarge):
        half_spin(6, 2)


def test_generate_by_label():
    label = FamilyLabel(family=Family.polar_w, n=3, q=2)
    assert generate(label) == polar_space("w", 5, 2)
    e6 = FamilyLabel(family=Family.e6, n=6, q=2)
    assert reference_geometry(e6) is None
    with pytest.raises(InstanceTooLarge):
        generate(e6)


def test_reference_geometry_respects_the_size_guard():
    label = FamilyLabel(family=Family.polar_w, n=3, q=2)
    assert reference_geometry(label, max_points=20) is None


def test_generate_named():
    assert generate_named("w", 2, n=3) == polar_space("w", 5, 2)
    assert generate_named("qminus", 2, n=2).n_points == 27
    assert generate_named("q", 3, dim=4).n_points == 40
    assert generate_named("pg", 2, n=3).n_points == 15
    assert generate_named("segre", 2, n=1).n_points == 9
    with pytest.raises(RankTooSmall):
        generate_named("grassmann", 2)
    with pytest.raises(InvalidGeometry):
        generate_named("e8", 2, n=8)
