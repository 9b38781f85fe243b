"""
Recovering a point-line geometry from its point graph. All perps are closed
(a vertex is perpendicular to itself).

A local graph that is a q-clique extension splits into rays, the double
perps of its vertices. Seen from the whole graph, the ray of x at p together
with p is the extended ray (x^perp meet p^perp)^perp; extended rays are the
lines of the recovered geometry.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from app.services.errors import (
    CollapsedSpan,
    DegenerateTriangle,
    DisconnectedGraph,
    HeightMismatch,
    HeightTooSmall,
    InconsistentCrossEdges,
    InvalidGeometry,
    NotAdjacent,
    PointGraphMismatch,
    RayError,
    RayNotClique,
    RaysNotPartition,
    RaysUnequalSize,
    SingleRay,
    WrongRaySize,
)
from app.services.geometry import Geometry, check_partial_linear, check_projective_space
from app.services.graphs import (
    Graph,
    check_vertex,
    double_perp_mask,
    is_connected,
    local_graph,
    perp_mask,
)
from app.utils.utils import bits, lowest, mask_of, to_sorted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RayPartition:
    ray_of: tuple[int, ...]
    rays: tuple[tuple[int, ...], ...]
    height: int

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(ray) for ray in self.rays)


@dataclass(frozen=True)
class ExtendedRay:
    vertices: tuple[int, ...]
    generators: tuple[int, int]


def _split_rays(
    vertices: Sequence[int], masks: Sequence[int], closed: Sequence[int]
) -> list[int]:
    """Check that masks[i] (the ray of vertices[i]) form a partition into equal cliques."""
    owner: dict[int, int] = {}
    rays: list[int] = []
    for v, m in zip(vertices, masks):
        if v in owner:
            if rays[owner[v]] != m:
                raise RaysNotPartition(
                    f"ray of {v} differs from the ray it lies in",
                    vertex=v,
                    ray=to_sorted(m),
                    other=to_sorted(rays[owner[v]]),
                )
            continue
        clash = [u for u in bits(m) if u in owner]
        if clash:
            raise RaysNotPartition(
                f"ray of {v} overlaps another ray", vertex=v, ray=to_sorted(m), shared=clash
            )
        for u in bits(m):
            if m & ~closed[u]:
                raise RayNotClique(f"ray of {v} is not a clique", vertex=v, ray=to_sorted(m))
        owner.update((u, len(rays)) for u in bits(m))
        rays.append(m)
    sizes = sorted({m.bit_count() for m in rays})
    if len(sizes) > 1:
        raise RaysUnequalSize(f"rays have sizes {sizes}", sizes=sizes)
    if sizes[0] < 2:
        raise HeightTooSmall("rays are single vertices", height=sizes[0])
    if len(rays) == 1:
        raise SingleRay("the local graph is a single ray", height=sizes[0])
    return rays


def _partition(positions: dict[int, int], rays: list[int]) -> RayPartition:
    ordered = sorted(
        (tuple(sorted(positions[u] for u in bits(m))) for m in rays), key=lambda r: r[0]
    )
    ray_of = [0] * len(positions)
    for rid, ray in enumerate(ordered):
        for u in ray:
            ray_of[u] = rid
    return RayPartition(tuple(ray_of), tuple(ordered), len(ordered[0]))


def recover_rays(local: Graph) -> RayPartition:
    """Rays of a graph as the double perps of its vertices."""
    if local.n == 0:
        raise RaysNotPartition("the local graph is empty")
    masks = [double_perp_mask(local, 1 << v) for v in range(local.n)]
    rays = _split_rays(range(local.n), masks, local.closed_rows)
    return _partition({v: v for v in range(local.n)}, rays)


def extended_ray_mask(graph: Graph, p: int, x: int) -> int:
    closed = graph.closed_rows
    return perp_mask(graph, closed[p] & closed[x])


def local_rays(graph: Graph, p: int) -> RayPartition:
    """
    Rays of the local graph at p, numbered like local_graph(graph, p), but
    computed as extended rays minus p without building the local graph.
    """
    check_vertex(graph, p)
    neighbours = graph.adjacency[p]
    if not neighbours:
        raise RaysNotPartition(f"vertex {p} has no neighbours", vertex=p)
    outside = ~(1 << p)
    masks = [extended_ray_mask(graph, p, x) & outside for x in neighbours]
    rays = _split_rays(neighbours, masks, graph.closed_rows)
    return _partition({v: i for i, v in enumerate(neighbours)}, rays)


def height(graph: Graph) -> int:
    """The common ray size of all local graphs."""
    if graph.n == 0 or not is_connected(graph):
        raise DisconnectedGraph("height needs a connected graph", vertices=graph.n)
    q: Optional[int] = None
    first = 0
    for p in range(graph.n):
        try:
            part = local_rays(graph, p)
        except RayError as exc:
            raise exc.with_details(at_vertex=p)
        if q is None:
            q, first = part.height, p
        elif part.height != q:
            raise HeightMismatch(
                f"vertices {first} and {p} have heights {q} and {part.height}",
                v=first,
                w=p,
                q_v=q,
                q_w=part.height,
            )
    assert q is not None
    logger.debug(f"Height {q} at all {graph.n} vertices")
    return q


def extended_ray(graph: Graph, p: int, x: int, q: Optional[int] = None) -> ExtendedRay:
    check_vertex(graph, p)
    check_vertex(graph, x)
    if not graph.has_edge(p, x):
        raise NotAdjacent(f"{p} and {x} are not adjacent", vertices=[p, x])
    m = extended_ray_mask(graph, p, x)
    size = m.bit_count()
    closed = graph.closed_rows
    if m in (closed[p], closed[x]):
        raise WrongRaySize(
            f"extended ray of ({p}, {x}) is a whole neighbourhood", vertices=[p, x], size=size
        )
    if size < 3 or (q is not None and size != q + 1):
        raise WrongRaySize(
            f"extended ray of ({p}, {x}) has {size} vertices",
            vertices=[p, x],
            size=size,
            expected=None if q is None else q + 1,
        )
    return ExtendedRay(to_sorted(m), (p, x))


def _rays_inside(graph: Graph, mask: int) -> list[int]:
    """Distinct extended rays through pairs of adjacent vertices of mask."""
    covered = {u: 1 << u for u in bits(mask)}
    found: list[int] = []
    for u in bits(mask):
        for w in bits(mask & graph.rows[u] & ~covered[u]):
            if covered[u] >> w & 1:
                continue
            m = extended_ray_mask(graph, u, w)
            found.append(m)
            for v in bits(m & mask):
                covered[v] |= m
    return found


def plane_span(graph: Graph, x: int, y: int, z: int, q: Optional[int] = None) -> tuple[int, ...]:
    """(x^perp meet y^perp meet z^perp)^perp, checked to be a projective plane of order q."""
    for a, b in ((x, y), (x, z), (y, z)):
        check_vertex(graph, a)
        if not graph.has_edge(a, b):
            raise NotAdjacent(f"{a} and {b} are not adjacent", vertices=[a, b])
    ray = extended_ray_mask(graph, x, y)
    if ray >> z & 1:
        raise DegenerateTriangle(f"{z} lies on the extended ray of ({x}, {y})", vertices=[x, y, z])
    if q is None:
        q = ray.bit_count() - 1
    closed = graph.closed_rows
    span = perp_mask(graph, closed[x] & closed[y] & closed[z])
    expected = q * q + q + 1
    if span.bit_count() != expected:
        raise CollapsedSpan(
            f"span of ({x}, {y}, {z}) has {span.bit_count()} vertices, not {expected}",
            vertices=[x, y, z],
            size=span.bit_count(),
        )
    rays = _rays_inside(graph, span)
    if any(m & ~span for m in rays):
        raise CollapsedSpan("an extended ray leaves the span", vertices=[x, y, z])
    points = to_sorted(span)
    position = {p: i for i, p in enumerate(points)}
    plane = Geometry.create(len(points), [[position[p] for p in bits(m)] for m in rays])
    report = check_projective_space(plane, plane.universe, q)
    if not report.holds or report.dimension != 2:
        raise CollapsedSpan(
            "span is not a projective plane",
            vertices=[x, y, z],
            reason=report.details.get("reason"),
        )
    return points


def build_geometry(graph: Graph, q: Optional[int] = None) -> Geometry:
    """Points are the vertices; lines are the distinct extended rays."""
    if graph.n == 0 or not is_connected(graph):
        raise DisconnectedGraph("reconstruction needs a connected graph", vertices=graph.n)
    if q is None:
        q = height(graph)
    covered = [1 << v for v in range(graph.n)]
    lines: list[int] = []
    for p in range(graph.n):
        for x in bits(graph.rows[p] & ~covered[p]):
            if covered[p] >> x & 1:
                continue
            m = extended_ray_mask(graph, p, x)
            if m.bit_count() != q + 1:
                raise WrongRaySize(
                    f"extended ray of ({p}, {x}) has {m.bit_count()} vertices, not {q + 1}",
                    vertices=[p, x],
                    size=m.bit_count(),
                    expected=q + 1,
                )
            for u in bits(m):
                covered[u] |= m
            lines.append(m)
    geometry = Geometry.create(graph.n, [to_sorted(m) for m in lines], graph.labels)
    partial_linear = check_partial_linear(geometry)
    if not partial_linear.holds:
        raise InvalidGeometry(
            "extended rays share two points", **(partial_linear.witness or {})
        )
    if geometry.collinear_rows != graph.rows:
        v = next(i for i, (a, b) in enumerate(zip(geometry.collinear_rows, graph.rows)) if a != b)
        diff = geometry.collinear_rows[v] ^ graph.rows[v]
        raise PointGraphMismatch(
            f"vertex {v} is collinear with the wrong set of vertices",
            vertex=v,
            other=lowest(diff),
        )
    logger.info(f"Reconstructed {len(lines)} lines of size {q + 1} on {graph.n} points")
    return geometry


def ray_quotient(local: Graph, partition: RayPartition) -> Graph:
    """One vertex per ray; two rays are adjacent when all cross pairs are."""
    masks = partition.masks
    ray_of = partition.ray_of
    rows: list[int] = []
    for rid, m in enumerate(masks):
        row: Optional[int] = None
        for u in bits(m):
            rest = local.rows[u] & ~m
            touched = 0
            while rest:
                block = masks[ray_of[lowest(rest)]]
                if rest & block != block:
                    raise InconsistentCrossEdges(
                        f"vertex {u} sees part of a ray", vertex=u, ray=to_sorted(block)
                    )
                touched |= 1 << ray_of[lowest(rest)]
                rest &= ~block
            if row is None:
                row = touched
            elif row != touched:
                raise InconsistentCrossEdges(
                    f"members of ray {rid} see different rays", ray=partition.rays[rid]
                )
        rows.append(row or 0)
    labels = tuple(local.label(ray[0]) for ray in partition.rays)
    return Graph(tuple(rows), labels)


def local_quotient(graph: Graph, p: int) -> tuple[Graph, RayPartition]:
    """Ray quotient of the local graph at p."""
    partition = local_rays(graph, p)
    return ray_quotient(local_graph(graph, p), partition), partition

