"""
Simple graphs on vertices 0..n-1 stored as bitset adjacency rows, and the
graph-side operations the reconstruction relies on.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from app.services.errors import (
    DisconnectedGraph,
    MalformedInput,
    SizeLimitExceeded,
    VertexOutOfRange,
)
from app.utils.utils import bits, mask_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    rows: tuple[int, ...]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        n = len(self.rows)
        if self.labels is not None and len(self.labels) != n:
            raise MalformedInput("labels must name every vertex", n=n)
        for v, row in enumerate(self.rows):
            if row >> n:
                raise MalformedInput(f"vertex {v} has a neighbour out of range", vertex=v)
            if row >> v & 1:
                raise MalformedInput(f"loop at vertex {v}", vertex=v)
            for u in bits(row):
                if not self.rows[u] >> v & 1:
                    raise MalformedInput(f"edge ({v}, {u}) is not symmetric", vertex=v)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Optional[Sequence[str]] = None,
    ) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise MalformedInput(f"loop at vertex {u}", vertex=u)
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedInput(f"edge ({u}, {v}) leaves 0..{n - 1}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(tuple(rows), tuple(labels) if labels is not None else None)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def universe(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def closed_rows(self) -> tuple[int, ...]:
        return tuple(row | 1 << v for v, row in enumerate(self.rows))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(bits(row)) for row in self.rows)

    @cached_property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.rows):
            for v in bits(row >> (u + 1)):
                yield u, u + 1 + v

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)


def perp_mask(graph: Graph, mask: int) -> int:
    """Vertices equal or adjacent to every vertex of the set mask."""
    closed = graph.closed_rows
    out = graph.universe
    for v in bits(mask):
        out &= closed[v]
        if not out:
            break
    return out


def check_vertex(graph: Graph, v: int) -> None:
    if not 0 <= v < graph.n:
        raise VertexOutOfRange(f"vertex {v} outside 0..{graph.n - 1}", vertex=v)


def closed_perp(graph: Graph, vertices: Iterable[int]) -> frozenset[int]:
    vertices = list(vertices)
    for v in vertices:
        check_vertex(graph, v)
    return frozenset(bits(perp_mask(graph, mask_of(vertices))))


def double_perp_mask(graph: Graph, mask: int) -> int:
    return perp_mask(graph, perp_mask(graph, mask))


def induced_subgraph(graph: Graph, vertices: Sequence[int]) -> Graph:
    """Subgraph on the given vertices, renumbered in order; labels keep the old index."""
    position = {v: i for i, v in enumerate(vertices)}
    rows = []
    for v in vertices:
        rows.append(mask_of(position[u] for u in graph.adjacency[v] if u in position))
    return Graph(tuple(rows), tuple(str(v) for v in vertices))


def local_graph(graph: Graph, v: int) -> Graph:
    """Subgraph induced on the neighbours of v."""
    check_vertex(graph, v)
    return induced_subgraph(graph, graph.adjacency[v])


def clique_extension(graph: Graph, q: int) -> Graph:
    """Replace every vertex by a q-clique; blocks of adjacent vertices join completely."""
    if q < 1:
        raise MalformedInput(f"clique size must be positive, got {q}", q=q)
    block = (1 << q) - 1
    blocks = [block << (x * q) for x in range(graph.n)]
    rows = []
    labels = []
    for x in range(graph.n):
        outer = 0
        for y in graph.adjacency[x]:
            outer |= blocks[y]
        for i in range(q):
            rows.append(outer | blocks[x] & ~(1 << (x * q + i)))
            labels.append(f"{graph.label(x)}.{i + 1}")
    return Graph(tuple(rows), tuple(labels))


def bfs_layers(graph: Graph, source: int) -> list[int]:
    """Distance layers from source as bitsets."""
    rows = graph.rows
    seen = frontier = 1 << source
    layers = [frontier]
    while True:
        reach = 0
        for v in bits(frontier):
            reach |= rows[v]
        frontier = reach & ~seen
        if not frontier:
            return layers
        seen |= frontier
        layers.append(frontier)


def is_connected(graph: Graph) -> bool:
    if graph.n == 0:
        return True
    reached = 0
    for layer in bfs_layers(graph, 0):
        reached |= layer
    return reached == graph.universe


def eccentricity(graph: Graph, v: int) -> int:
    layers = bfs_layers(graph, v)
    if sum(layer.bit_count() for layer in layers) != graph.n:
        raise DisconnectedGraph("graph is not connected", vertex=v)
    return len(layers) - 1


def diameter(graph: Graph, sources: Optional[Iterable[int]] = None) -> int:
    """
    Largest eccentricity over sources (every vertex by default).
    Vertex-transitive inputs only need one source.
    """
    if graph.n == 0:
        raise MalformedInput("empty graph has no diameter")
    vertices = range(graph.n) if sources is None else sources
    return max(eccentricity(graph, v) for v in vertices)


def degree_sequence(graph: Graph) -> list[int]:
    return sorted((row.bit_count() for row in graph.rows), reverse=True)


def maximal_cliques(graph: Graph, limit: Optional[int] = None) -> list[int]:
    """Bron-Kerbosch with pivoting over bitsets; cliques sorted by their vertices."""
    if limit is not None and graph.n > limit:
        raise SizeLimitExceeded(
            f"{graph.n} vertices exceeds the clique enumeration limit {limit}",
            vertices=graph.n,
            limit=limit,
        )
    rows = graph.rows
    found: list[int] = []

    def expand(clique: int, candidates: int, excluded: int) -> None:
        if not candidates and not excluded:
            found.append(clique)
            return
        pivot = max(bits(candidates | excluded), key=lambda u: (candidates & rows[u]).bit_count())
        for v in bits(candidates & ~rows[pivot]):
            bit = 1 << v
            expand(clique | bit, candidates & rows[v], excluded & rows[v])
            candidates &= ~bit
            excluded |= bit

    if graph.n:
        expand(0, graph.universe, 0)
    return sorted(found, key=lambda m: tuple(bits(m)))


def is_clique(graph: Graph, mask: int) -> bool:
    closed = graph.closed_rows
    return all(mask & ~closed[v] == 0 for v in bits(mask))


# Colour refinement


def _refine(adjacency: Sequence[Sequence[int]], colors: Sequence[int]) -> tuple[int, ...]:
    """
    Coarsest equitable refinement. Colours are renumbered by the sorted
    order of their signatures so the numbering only depends on structure.
    """
    current = tuple(colors)
    classes = len(set(current))
    while True:
        signatures = [
            (current[v], tuple(sorted(Counter(current[u] for u in adjacency[v]).items())))
            for v in range(len(adjacency))
        ]
        palette = {s: i for i, s in enumerate(sorted(set(signatures)))}
        refined = tuple(palette[s] for s in signatures)
        if len(palette) == classes:
            return refined
        current, classes = refined, len(palette)


def color_refine(graph: Graph, initial: Optional[Sequence[int]] = None) -> tuple[int, ...]:
    """Coarsest equitable partition refining the degree partition (or initial)."""
    if initial is None:
        initial = [row.bit_count() for row in graph.rows]
    ranks = {c: i for i, c in enumerate(sorted(set(initial)))}
    return _refine(graph.adjacency, [ranks[c] for c in initial])


@dataclass(frozen=True)
class IsomorphismResult:
    isomorphic: bool
    mapping: Optional[tuple[int, ...]] = None
    reason: Optional[str] = None


def verify_isomorphism(g: Graph, h: Graph, mapping: Sequence[int]) -> bool:
    if g.n != h.n or g.edge_count != h.edge_count or sorted(mapping) != list(range(h.n)):
        return False
    return all(h.has_edge(mapping[u], mapping[v]) for u, v in g.edges())


def _balanced(colors: Sequence[int], n: int) -> bool:
    return Counter(colors[:n]) == Counter(colors[n:])


def are_isomorphic(g: Graph, h: Graph, limit: int = 2500) -> IsomorphismResult:
    """
    Individualization-refinement on the disjoint union of g and h so that
    both sides share one colour numbering. A found mapping is always
    checked edge by edge before it is returned.
    """
    if g.n != h.n:
        return IsomorphismResult(False, reason="vertex counts differ")
    if g.edge_count != h.edge_count:
        return IsomorphismResult(False, reason="edge counts differ")
    if degree_sequence(g) != degree_sequence(h):
        return IsomorphismResult(False, reason="degree sequences differ")
    if g.n > limit:
        raise SizeLimitExceeded(
            f"{g.n} vertices exceeds the isomorphism limit {limit}",
            vertices=g.n,
            limit=limit,
        )
    n = g.n
    adjacency = g.adjacency + tuple(tuple(u + n for u in nb) for nb in h.adjacency)
    degrees = [len(nb) for nb in adjacency]
    colors = _refine(adjacency, degrees)
    if not _balanced(colors, n):
        return IsomorphismResult(False, reason="colour refinement separates the graphs")

    def search(colors: tuple[int, ...]) -> Optional[tuple[int, ...]]:
        cells: dict[int, tuple[list[int], list[int]]] = {}
        for v, c in enumerate(colors):
            left, right = cells.setdefault(c, ([], []))
            (left if v < n else right).append(v)
        open_cells = [(len(left), c) for c, (left, _) in cells.items() if len(left) > 1]
        if not open_cells:
            mapping = [0] * n
            for left, right in cells.values():
                mapping[left[0]] = right[0] - n
            return tuple(mapping) if verify_isomorphism(g, h, mapping) else None
        _, target = min(open_cells)
        left, right = cells[target]
        v = left[0]
        fresh = max(colors) + 1
        for w in right:
            trial = list(colors)
            trial[v] = trial[w] = fresh
            refined = _refine(adjacency, trial)
            if _balanced(refined, n):
                found = search(refined)
                if found is not None:
                    return found
        return None

    mapping = search(colors)
    if mapping is None:
        return IsomorphismResult(False, reason="no colour-preserving bijection")
    return IsomorphismResult(True, mapping=mapping)


def _suitable(stubs: list[int], i: int, j: int, edges: set[tuple[int, int]]) -> bool:
    a, b = stubs[i], stubs[j]
    return a != b and (min(a, b), max(a, b)) not in edges


def random_regular_graph(n: int, d: int, rng: np.random.Generator, attempts: int = 100) -> Graph:
    """Random d-regular simple graph, pairing free stubs one suitable pair at a time."""
    if (n * d) % 2 or d >= n:
        raise MalformedInput(f"no {d}-regular graph on {n} vertices", n=n, d=d)
    for _ in range(attempts):
        stubs = [int(v) for v in np.repeat(np.arange(n), d)]
        edges: set[tuple[int, int]] = set()
        while stubs:
            i, j = sorted(int(v) for v in rng.choice(len(stubs), size=2, replace=False))
            if not _suitable(stubs, i, j, edges):
                # near the end random picks rarely succeed
                pairs = [
                    (a, b)
                    for a in range(len(stubs))
                    for b in range(a + 1, len(stubs))
                    if _suitable(stubs, a, b, edges)
                ]
                if not pairs:
                    break
                i, j = pairs[int(rng.integers(len(pairs)))]
            edges.add((min(stubs[i], stubs[j]), max(stubs[i], stubs[j])))
            del stubs[j], stubs[i]
        if not stubs:
            return Graph.from_edges(n, sorted(edges))
    raise MalformedInput(f"could not sample a {d}-regular graph on {n} vertices")


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, k=1)
    us, vs = np.nonzero(upper)
    return Graph.from_edges(n, zip(us.tolist(), vs.tolist()))
