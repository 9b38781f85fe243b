import pytest

from app.pydantic_models.utils import PerpKind
from app.services.errors import (
    CollinearPair,
    DegenerateGeometry,
    InvalidGeometry,
    NotAClique,
    ShultViolated,
)
from app.services.geometry import (
    Geometry,
    PerpClass,
    check_degenerate,
    check_gamma,
    check_grid,
    check_parapolar,
    check_partial_linear,
    check_projective_space,
    check_shult,
    classify_perp,
    distance_two_perps,
    induced_geometry,
    line_order,
    maximal_singular_subspaces,
    perp_geometry,
    polar_rank,
    revalidate_witness,
    singular_closure,
)
from app.services.generators import polar_space, projective_space, segre_product
from app.utils.utils import bits

# three lines; point 3 sees 0 and 1 on the first line but not 2
NOT_GAMMA = Geometry.create(6, [[0, 1, 2], [0, 3, 4], [1, 3, 5]])
# two disjoint lines
TWO_LINES = Geometry.create(6, [[0, 1, 2], [3, 4, 5]])


def test_create_sorts_lines():
    geometry = Geometry.create(4, [[3, 1, 2], [2, 0, 1]])
    assert geometry.lines == ((0, 1, 2), (1, 2, 3))


def test_invalid_geometries():
    with pytest.raises(InvalidGeometry):
        Geometry.create(3, [[0, 1, 2], [0, 1, 2]])
    with pytest.raises(InvalidGeometry):
        Geometry.create(3, [[0, 3]])
    with pytest.raises(InvalidGeometry):
        Geometry.create(3, [[0]])


def test_generalized_quadrangle_axioms(w32):
    assert check_partial_linear(w32).holds
    assert check_gamma(w32).holds
    assert check_shult(w32).holds
    assert not check_degenerate(w32).holds
    report = polar_rank(w32)
    assert report.rank == 2
    assert report.details == {"maximal_singular_subspaces": 15, "q": 2}


def test_partial_linear_witnesses():
    thin = Geometry.create(3, [[0, 1]])
    report = check_partial_linear(thin)
    assert not report.holds
    assert report.witness == {"lines": [0], "points": [0, 1]}
    assert revalidate_witness(thin, report)

    doubled = Geometry.create(5, [[0, 1, 2], [0, 1, 3, 4]])
    report = check_partial_linear(doubled)
    assert not report.holds
    assert report.witness == {"lines": [0, 1], "points": [0, 1]}
    assert revalidate_witness(doubled, report)


def test_gamma_witness():
    report = check_gamma(NOT_GAMMA)
    assert not report.holds
    assert report.witness == {"point": [3], "line": [0], "seen": [0, 1]}
    assert revalidate_witness(NOT_GAMMA, report)


def test_shult_witness_for_a_blind_point():
    assert check_gamma(TWO_LINES).holds
    report = check_shult(TWO_LINES)
    assert not report.holds
    assert report.witness == {"point": [3], "line": [0], "seen": []}
    assert revalidate_witness(TWO_LINES, report)


def test_projective_plane_is_degenerate(fano):
    assert check_shult(fano).holds
    report = check_degenerate(fano)
    assert report.holds
    assert revalidate_witness(fano, report)
    with pytest.raises(DegenerateGeometry):
        polar_rank(fano)


def test_polar_rank_needs_shult():
    with pytest.raises(ShultViolated):
        polar_rank(TWO_LINES)


def test_check_projective_space():
    pg3 = projective_space(3, 2)
    report = check_projective_space(pg3, pg3.universe, 2)
    assert report.holds
    assert report.dimension == 3
    wrong = check_projective_space(pg3, pg3.universe, 3)
    assert not wrong.holds
    assert "not the size" in wrong.details["reason"]


def test_grid_is_not_a_projective_plane():
    grid = segre_product(1, 2)
    report = check_projective_space(grid, (1 << 7) - 1, 2)
    assert not report.holds


def test_maximal_singular_subspaces_methods_agree(w52):
    by_closure = maximal_singular_subspaces(w52, method="closure")
    by_cliques = maximal_singular_subspaces(w52, method="cliques")
    assert by_closure == by_cliques
    assert len(by_closure) == 135
    assert {s.bit_count() for s in by_closure} == {7}


def test_maximal_singular_subspaces_without_gamma():
    # 0, 1, 2 and 3 are pairwise collinear but their span is not a clique
    geometry = Geometry.create(7, [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 3, 6]])
    assert not check_gamma(geometry).holds
    found = maximal_singular_subspaces(geometry)
    assert [sorted(bits(s)) for s in found] == [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 3, 6]]
    assert maximal_singular_subspaces(geometry, method="closure") == found
    assert maximal_singular_subspaces(NOT_GAMMA) == [0b111, 0b11001, 0b101010]


def test_singular_closure(w52):
    line = w52.lines[0]
    assert singular_closure(w52, line[:2]) == set(line)
    far = next(p for p in range(w52.n_points) if not w52.closed_rows[0] >> p & 1)
    with pytest.raises(NotAClique):
        singular_closure(w52, [0, far])


def test_line_order(w52):
    assert line_order(w52) == 2


def test_grids():
    assert check_grid(polar_space("qplus", 3, 2), 2)
    assert check_grid(segre_product(1, 3), 3)
    assert not check_grid(polar_space("w", 3, 2), 2)


def test_perps_in_a_rank_three_polar_space(w52):
    far = next(p for p in range(w52.n_points) if not w52.closed_rows[0] >> p & 1)
    perp = perp_geometry(w52, 0, far)
    assert perp.n_points == 15
    assert classify_perp(w52, 0, far) == PerpClass(PerpKind.polar, 15, rank=2)
    with pytest.raises(CollinearPair):
        perp_geometry(w52, 0, next(bits(w52.collinear_rows[0])))


def test_perps_in_a_quadrangle(w32):
    far = next(p for p in range(w32.n_points) if not w32.closed_rows[0] >> p & 1)
    perp = classify_perp(w32, 0, far)
    assert perp.kind == PerpKind.other
    assert perp.points == 3


def test_distance_two_perps_with_anchors(w52):
    perps = distance_two_perps(w52, anchors=[0])
    assert len(perps) == 32
    assert all(x == 0 for x, _, _ in perps)


def test_induced_geometry_keeps_labels(w32):
    line = w32.lines[0]
    sub = induced_geometry(w32, sum(1 << p for p in line))
    assert sub.lines == ((0, 1, 2),)
    assert sub.point_labels == tuple(w32.point_labels[p] for p in line)


def test_quadrangle_is_not_parapolar(w32):
    report = check_parapolar(w32, 3)
    assert not report.holds
    assert report.details["perp_points"] == 3


def test_disconnected_geometry_is_not_parapolar():
    report = check_parapolar(TWO_LINES, 2)
    assert not report.holds
    assert report.details["reason"] == "point graph is disconnected"


def test_line_grassmannian_is_strong_parapolar(a42):
    report = check_parapolar(a42, 3)
    assert report.holds
    assert report.strong
    assert report.uniform
    assert report.rank == 2
    assert report.details["perp_ranks"] == [2]
