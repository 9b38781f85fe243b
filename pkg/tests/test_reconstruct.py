from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from app.services.errors import (
    DegenerateTriangle,
    DisconnectedGraph,
    HeightTooSmall,
    InconsistentCrossEdges,
    InvalidGeometry,
    NotAdjacent,
    RaysNotPartition,
    RaysUnequalSize,
    SingleRay,
    WrongRaySize,
)
from app.services.generators import polar_space
from app.services.geometry import Geometry, check_projective_space, maximal_singular_subspaces, point_graph
from app.services.graphs import (
    Graph,
    are_isomorphic,
    clique_extension,
    double_perp_mask,
    local_graph,
    random_graph,
)
from app.services.reconstruct import (
    RayPartition,
    build_geometry,
    extended_ray,
    height,
    local_quotient,
    local_rays,
    plane_span,
    ray_quotient,
    recover_rays,
)
from app.services.recognize import srg_parameters
from app.utils.utils import bits
from tests.conftest import from_networkx


def test_rays_of_a_quadrangle_vertex(w32):
    graph = point_graph(w32)
    partition = local_rays(graph, 0)
    assert partition.height == 2
    assert len(partition.rays) == 3
    assert recover_rays(local_graph(graph, 0)) == partition


def test_ray_errors(k7):
    with pytest.raises(SingleRay):
        recover_rays(k7)
    with pytest.raises(HeightTooSmall):
        recover_rays(Graph.from_edges(3, []))
    with pytest.raises(RaysNotPartition):
        recover_rays(Graph.from_edges(3, [(0, 1), (1, 2)]))
    with pytest.raises(RaysUnequalSize):
        recover_rays(Graph.from_edges(5, [(0, 1), (2, 3), (3, 4), (2, 4)]))
    with pytest.raises(RaysNotPartition):
        recover_rays(Graph.from_edges(0, []))


def test_clique_extension_is_undone_by_the_quotient(petersen):
    extended = clique_extension(petersen, 3)
    partition = recover_rays(extended)
    assert partition.height == 3
    assert len(partition.rays) == 10
    assert are_isomorphic(ray_quotient(extended, partition), petersen).isomorphic


@pytest.mark.parametrize(
    "kind, dim, q",
    [("w", 3, 2), ("w", 3, 3), ("q", 4, 3), ("qminus", 5, 2), ("qplus", 5, 2), ("w", 5, 2)],
)
def test_build_geometry_recovers_the_lines(kind, dim, q):
    geometry = polar_space(kind, dim, q)
    graph = point_graph(geometry)
    assert height(graph) == q
    rebuilt = build_geometry(graph)
    assert rebuilt.line_set == geometry.line_set


def test_height_needs_a_connected_graph():
    with pytest.raises(DisconnectedGraph):
        height(Graph.from_edges(4, [(0, 1), (2, 3)]))
    with pytest.raises(DisconnectedGraph):
        build_geometry(Graph.from_edges(0, []))


def test_build_geometry_rejects_rays_sharing_two_points(monkeypatch):
    rays = {(0, 1): 0b0111, (0, 3): 0b1011, (2, 3): 0b1110}
    monkeypatch.setattr("app.services.reconstruct.extended_ray_mask", lambda graph, p, x: rays[p, x])
    k4 = Graph.from_edges(4, combinations(range(4), 2))
    with pytest.raises(InvalidGeometry) as info:
        build_geometry(k4, q=2)
    assert info.value.details["lines"] == [0, 1]


def test_build_geometry_adds_each_line_once(w52_graph):
    rebuilt = build_geometry(w52_graph, q=2)
    assert len(rebuilt.lines) == len(rebuilt.line_set) == 315


def test_height_names_the_failing_vertex():
    # a triangle and a K4 sharing vertex 2; the local graph at 0 is one ray
    graph = point_graph(Geometry.create(6, [[0, 1, 2], [2, 3, 4, 5]]))
    with pytest.raises(SingleRay) as info:
        height(graph)
    assert info.value.details["at_vertex"] == 0


def test_petersen_has_no_rays(petersen):
    with pytest.raises(HeightTooSmall) as info:
        height(petersen)
    assert info.value.details["at_vertex"] == 0


def test_extended_ray(w32):
    graph = point_graph(w32)
    line = w32.lines[0]
    ray = extended_ray(graph, line[0], line[1], q=2)
    assert ray.vertices == line
    assert ray.generators == (line[0], line[1])
    with pytest.raises(WrongRaySize):
        extended_ray(graph, line[0], line[1], q=3)
    far = next(p for p in range(graph.n) if not graph.closed_rows[line[0]] >> p & 1)
    with pytest.raises(NotAdjacent):
        extended_ray(graph, line[0], far)


def test_extended_ray_of_a_complete_graph(k7):
    with pytest.raises(WrongRaySize):
        extended_ray(k7, 0, 1)


def test_plane_span(w52, w52_graph):
    p = 0
    x = next(bits(w52_graph.rows[p]))
    ray = extended_ray(w52_graph, p, x).vertices
    y = next(v for v in bits(w52_graph.rows[p] & w52_graph.rows[x]) if v not in ray)
    plane = plane_span(w52_graph, p, x, y)
    assert len(plane) == 7
    assert {p, x, y} <= set(plane)
    with pytest.raises(DegenerateTriangle):
        plane_span(w52_graph, p, x, next(v for v in ray if v not in (p, x)))


def test_plane_span_needs_a_triangle(w52_graph):
    far = next(v for v in range(w52_graph.n) if not w52_graph.closed_rows[0] >> v & 1)
    x = next(bits(w52_graph.rows[0]))
    with pytest.raises(NotAdjacent):
        plane_span(w52_graph, 0, x, far)


def test_quadrangle_has_no_planes(w32):
    graph = point_graph(w32)
    a, b, c = w32.lines[0]
    with pytest.raises(DegenerateTriangle):
        plane_span(graph, a, b, c)


def test_local_quotient_of_a_rank_three_polar_space(w52_graph):
    quotient, partition = local_quotient(w52_graph, 0)
    assert partition.height == 2
    assert quotient.n == 15
    srg = srg_parameters(quotient)
    assert (srg.v, srg.k, srg.lam, srg.mu) == (15, 6, 1, 3)
    # quotient vertices are named after a member of their ray
    assert quotient.labels[0] == str(w52_graph.adjacency[0][partition.rays[0][0]])


def test_ray_quotient_rejects_partial_cross_edges():
    local = Graph.from_edges(4, [(0, 1), (2, 3), (0, 2)])
    partition = RayPartition(ray_of=(0, 0, 1, 1), rays=((0, 1), (2, 3)), height=2)
    with pytest.raises(InconsistentCrossEdges):
        ray_quotient(local, partition)


def test_reconstruction_of_a_relabelled_graph(w32):
    graph = point_graph(w32)
    relabelled = from_networkx(nx.relabel_nodes(nx.Graph(list(graph.edges())), lambda v: (v * 7) % 15))
    assert len(build_geometry(relabelled).lines) == 15


def reduced_graphs(count: int, seed: int):
    """Random graphs in which every vertex is its own double perp."""
    rng = np.random.default_rng(seed)
    while count:
        graph = random_graph(int(rng.integers(2, 41)), float(rng.uniform(0.1, 0.6)), rng)
        if all(double_perp_mask(graph, 1 << x) == 1 << x for x in range(graph.n)):
            count -= 1
            yield graph


@pytest.mark.parametrize("q", [2, 3])
def test_rays_of_random_clique_extensions(q):
    for graph in reduced_graphs(100, seed=q):
        extended = clique_extension(graph, q)
        partition = recover_rays(extended)
        assert partition.rays == tuple(tuple(range(x * q, (x + 1) * q)) for x in range(graph.n))
        assert are_isomorphic(ray_quotient(extended, partition), graph).isomorphic


def lines_fixed_by_any_two_points(geometry: Geometry) -> None:
    graph = point_graph(geometry)
    for line in geometry.lines:
        for u, v in combinations(line, 2):
            assert extended_ray(graph, u, v).vertices == line
            assert extended_ray(graph, v, u).vertices == line


@pytest.mark.parametrize("fixture", ["w32", "w52", "klein", "a42"])
def test_extended_rays_are_fixed_by_any_two_points(fixture, request):
    lines_fixed_by_any_two_points(request.getfixturevalue(fixture))


@pytest.mark.slow
def test_half_spin_extended_rays_are_fixed_by_any_two_points(d55):
    lines_fixed_by_any_two_points(d55)


def test_planes_of_the_line_grassmannian(a42):
    graph = point_graph(a42)
    x = 0
    for y, z in combinations(bits(graph.rows[x]), 2):
        if not graph.closed_rows[y] >> z & 1 or z in extended_ray(graph, x, y).vertices:
            continue
        report = check_projective_space(a42, plane_span(graph, x, y, z), 2)
        assert report.holds
        assert report.dimension == 2
    subspaces = maximal_singular_subspaces(a42)
    assert {s.bit_count() for s in subspaces} == {7, 15}
    assert {check_projective_space(a42, s, 2).dimension for s in subspaces} == {2, 3}
