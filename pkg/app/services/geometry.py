"""
Point-line geometries and executable versions of the axioms used to
recognise them: partial linear, gamma, Shult, degenerate, polar rank,
projective space, parapolar and grid.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from app.pydantic_models.axioms import AxiomReport
from app.pydantic_models.utils import PerpKind
from app.services.algebra import projective_size
from app.services.errors import (
    CollinearPair,
    DegenerateGeometry,
    InvalidGeometry,
    LieProbeError,
    MixedSingularDimensions,
    NotAClique,
    ShultViolated,
    VertexOutOfRange,
)
from app.services.graphs import Graph, is_connected, maximal_cliques, perp_mask
from app.utils.utils import bits, lowest, mask_of, to_sorted

logger = logging.getLogger(__name__)

CLIQUE_FALLBACK_LIMIT = 5000


@dataclass(frozen=True)
class Geometry:
    n_points: int
    lines: tuple[tuple[int, ...], ...]
    point_labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.point_labels is not None and len(self.point_labels) != self.n_points:
            raise InvalidGeometry("labels must name every point", n_points=self.n_points)
        for i, line in enumerate(self.lines):
            if len(line) < 2:
                raise InvalidGeometry(f"line {i} has fewer than 2 points", line=i)
            if any(a >= b for a, b in zip(line, line[1:])):
                raise InvalidGeometry(f"line {i} is not strictly sorted", line=i)
            if line[0] < 0 or line[-1] >= self.n_points:
                raise InvalidGeometry(f"line {i} leaves the point range", line=i)
        owners: dict[tuple[int, int], list[int]] = {}
        masks = self.line_masks
        for i, line in enumerate(self.lines):
            for pair in itertools.combinations(line, 2):
                for j in owners.get(pair, ()):
                    if masks[i] | masks[j] in (masks[i], masks[j]):
                        raise InvalidGeometry(
                            f"lines {j} and {i} are nested or repeated", lines=[j, i]
                        )
                owners.setdefault(pair, []).append(i)

    @classmethod
    def create(
        cls,
        n_points: int,
        lines: Iterable[Iterable[int]],
        point_labels: Optional[Sequence[str]] = None,
    ) -> "Geometry":
        """Sort points within lines and lines lexicographically."""
        canonical = tuple(sorted(tuple(sorted(line)) for line in lines))
        labels = tuple(point_labels) if point_labels is not None else None
        return cls(n_points, canonical, labels)

    @property
    def universe(self) -> int:
        return (1 << self.n_points) - 1

    @cached_property
    def line_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(line) for line in self.lines)

    @cached_property
    def lines_through(self) -> tuple[tuple[int, ...], ...]:
        through: list[list[int]] = [[] for _ in range(self.n_points)]
        for i, line in enumerate(self.lines):
            for p in line:
                through[p].append(i)
        return tuple(tuple(t) for t in through)

    @cached_property
    def collinear_rows(self) -> tuple[int, ...]:
        rows = [0] * self.n_points
        for line, m in zip(self.lines, self.line_masks):
            for p in line:
                rows[p] |= m
        return tuple(row & ~(1 << p) for p, row in enumerate(rows))

    @cached_property
    def closed_rows(self) -> tuple[int, ...]:
        return tuple(row | 1 << p for p, row in enumerate(self.collinear_rows))

    @cached_property
    def line_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.lines)

    def check_point(self, p: int) -> None:
        if not 0 <= p < self.n_points:
            raise VertexOutOfRange(f"point {p} outside 0..{self.n_points - 1}", point=p)


def point_graph(geometry: Geometry) -> Graph:
    return Graph(geometry.collinear_rows, geometry.point_labels)


def check_partial_linear(geometry: Geometry) -> AxiomReport:
    """Lines are thick and two points share at most one line."""
    for i, line in enumerate(geometry.lines):
        if len(line) < 3:
            return AxiomReport(
                axiom="partial_linear", holds=False, witness={"lines": [i], "points": list(line)}
            )
    masks = geometry.line_masks
    for p, through in enumerate(geometry.lines_through):
        seen = 0
        bit = 1 << p
        for i in through:
            rest = masks[i] & ~bit
            if seen & rest:
                other = next(j for j in through if j != i and masks[j] & rest)
                q = lowest(masks[other] & rest)
                return AxiomReport(
                    axiom="partial_linear",
                    holds=False,
                    witness={"lines": sorted([other, i]), "points": sorted([p, q])},
                )
            seen |= rest
    return AxiomReport(axiom="partial_linear", holds=True)


def _line_counts(geometry: Geometry, i: int) -> tuple[int, int, int]:
    """Bitsets of points seeing exactly one, at least two, and all points of line i."""
    closed = geometry.closed_rows
    once = more = 0
    every = geometry.universe
    for p in geometry.lines[i]:
        row = closed[p]
        more |= once & row
        once = (once | row) & ~more
        every &= row
    return once, more, every


def _seen_witness(geometry: Geometry, p: int, i: int) -> dict[str, list[int]]:
    row = geometry.closed_rows[p]
    seen = [x for x in geometry.lines[i] if row >> x & 1]
    return {"point": [p], "line": [i], "seen": seen}


def check_gamma(geometry: Geometry) -> AxiomReport:
    """A point off a line sees none, one or all of its points."""
    for i in range(len(geometry.lines)):
        _, more, every = _line_counts(geometry, i)
        partial = more & ~every
        if partial:
            return AxiomReport(
                axiom="gamma", holds=False, witness=_seen_witness(geometry, lowest(partial), i)
            )
    return AxiomReport(axiom="gamma", holds=True)


def check_shult(geometry: Geometry) -> AxiomReport:
    """A point off a line sees exactly one or all of its points."""
    universe = geometry.universe
    for i in range(len(geometry.lines)):
        once, more, every = _line_counts(geometry, i)
        blind = universe & ~(once | more)
        partial = more & ~every
        if blind or partial:
            p = lowest(blind) if blind else lowest(partial)
            return AxiomReport(
                axiom="shult", holds=False, witness=_seen_witness(geometry, p, i)
            )
    return AxiomReport(axiom="shult", holds=True)


def check_degenerate(geometry: Geometry) -> AxiomReport:
    """holds means degenerate: some point is collinear with every point."""
    universe = geometry.universe
    for p, row in enumerate(geometry.closed_rows):
        if row == universe:
            return AxiomReport(axiom="degenerate", holds=True, witness={"point": [p]})
    return AxiomReport(axiom="degenerate", holds=False)


def revalidate_witness(geometry: Geometry, report: AxiomReport) -> bool:
    """Re-check a failure witness from the raw line lists."""
    w = report.witness or {}
    match report.axiom:
        case "partial_linear":
            lines = [set(geometry.lines[i]) for i in w["lines"]]
            if len(lines) == 1:
                return len(lines[0]) < 3
            return set(w["points"]) <= lines[0] & lines[1] and lines[0] != lines[1]
        case "gamma" | "shult":
            (p,), (i,) = w["point"], w["line"]
            line = geometry.lines[i]
            seen = [
                x for x in line if x == p or any(p in l and x in l for l in geometry.lines)
            ]
            if seen != w["seen"] or p in line:
                return False
            if report.axiom == "gamma":
                return 1 < len(seen) < len(line)
            return len(seen) != 1 and len(seen) != len(line)
        case "degenerate":
            (p,) = w["point"]
            covered = {p}
            for line in geometry.lines:
                if p in line:
                    covered.update(line)
            return len(covered) == geometry.n_points
    return False


# Singular subspaces


def closure_mask(geometry: Geometry, mask: int) -> int:
    """Smallest subspace containing mask; it must stay a clique."""
    closed = geometry.closed_rows
    masks = geometry.line_masks
    if any(mask & ~closed[p] for p in bits(mask)):
        raise NotAClique("points are not pairwise collinear", points=to_sorted(mask))
    queue = list(bits(mask))
    while queue:
        p = queue.pop()
        bit = 1 << p
        for i in geometry.lines_through[p]:
            m = masks[i]
            if m & ~mask and m & mask & ~bit:
                new = m & ~mask
                mask |= m
                queue.extend(bits(new))
    if any(mask & ~closed[p] for p in bits(mask)):
        raise NotAClique("closure is not a clique", points=to_sorted(mask))
    return mask


def singular_closure(geometry: Geometry, points: Iterable[int]) -> frozenset[int]:
    points = list(points)
    for p in points:
        geometry.check_point(p)
    return frozenset(bits(closure_mask(geometry, mask_of(points))))


def _closure_or_none(geometry: Geometry, mask: int) -> Optional[int]:
    try:
        return closure_mask(geometry, mask)
    except NotAClique:
        return None


def is_subspace(geometry: Geometry, mask: int) -> bool:
    masks = geometry.line_masks
    for p in bits(mask):
        for i in geometry.lines_through[p]:
            m = masks[i]
            if m & ~mask and (m & mask).bit_count() >= 2:
                return False
    return True


def maximal_singular_subspaces(
    geometry: Geometry, method: str = "auto", limit: int = CLIQUE_FALLBACK_LIMIT
) -> list[int]:
    """
    Maximal singular subspaces as bitsets, sorted by their points.
    "closure" grows closures from every line and drops extensions whose
    closure is not a clique; "cliques" filters the maximal cliques of the
    point graph. "auto" uses cliques on gamma spaces, where every maximal
    clique is already a subspace.
    """
    if method == "auto":
        method = "cliques" if check_gamma(geometry).holds else "closure"
    if method == "cliques":
        found = [
            c for c in maximal_cliques(point_graph(geometry), limit) if is_subspace(geometry, c)
        ]
        return sorted(found, key=to_sorted)

    closed = geometry.closed_rows
    seen: set[int] = set()
    stack: list[int] = []
    for m in geometry.line_masks:
        s = _closure_or_none(geometry, m)
        if s is not None and s not in seen:
            seen.add(s)
            stack.append(s)
    maximal = [1 << p for p, t in enumerate(geometry.lines_through) if not t]
    while stack:
        s = stack.pop()
        grow = geometry.universe
        for p in bits(s):
            grow &= closed[p]
        grow &= ~s
        extended = False
        for x in bits(grow):
            t = _closure_or_none(geometry, s | 1 << x)
            if t is None:
                continue
            extended = True
            if t not in seen:
                seen.add(t)
                stack.append(t)
        if not extended:
            maximal.append(s)
    return sorted(maximal, key=to_sorted)


def projective_dimension(size: int, q: int) -> Optional[int]:
    k = 0
    while projective_size(k, q) < size:
        k += 1
    return k if projective_size(k, q) == size else None


def check_projective_space(
    geometry: Geometry, points: Iterable[int] | int, q: int
) -> AxiomReport:
    """
    Is the subspace a projective space of order q? Counting, unique lines
    through point pairs, and q^2+q+1 point planes spanned by meeting lines.
    """
    mask = points if isinstance(points, int) else mask_of(points)
    size = mask.bit_count()
    k = projective_dimension(size, q)
    if k is None:
        return AxiomReport(
            axiom="projective_space",
            holds=False,
            witness={"points": to_sorted(mask)},
            details={"reason": f"{size} points is not the size of a projective space of order {q}"},
        )
    masks = geometry.line_masks
    induced = sorted({i for p in bits(mask) for i in geometry.lines_through[p] if masks[i] & ~mask == 0})

    def failure(reason: str, **witness: list[int]) -> AxiomReport:
        return AxiomReport(
            axiom="projective_space",
            holds=False,
            witness=witness,
            dimension=k,
            details={"reason": reason},
        )

    for i in induced:
        if masks[i].bit_count() != q + 1:
            return failure(f"line {i} does not have {q + 1} points", line=[i])

    through: dict[int, list[int]] = {p: [] for p in bits(mask)}
    for i in induced:
        for p in geometry.lines[i]:
            through[p].append(i)
    for p, lines in through.items():
        bit = 1 << p
        cover = 0
        for i in lines:
            rest = masks[i] & ~bit
            if cover & rest:
                return failure("two lines share two points", point=[p], line=[i])
            cover |= rest
        if cover != mask & ~bit:
            missing = lowest(mask & ~bit & ~cover)
            return failure("two points on no common line", points=[p, missing])

    plane_size = projective_size(2, q)
    planes: list[int] = []
    for p, lines in through.items():
        for a, b in itertools.combinations(lines, 2):
            pair = masks[a] | masks[b]
            if any(pair & ~plane == 0 for plane in planes):
                continue
            plane = pair
            changed = True
            while changed:
                changed = False
                for i in induced:
                    m = masks[i]
                    if m & ~plane and (m & plane).bit_count() >= 2:
                        plane |= m
                        changed = True
            if plane.bit_count() != plane_size:
                return failure(
                    f"lines {a} and {b} span {plane.bit_count()} points, not {plane_size}",
                    line=[a, b],
                )
            planes.append(plane)
    return AxiomReport(axiom="projective_space", holds=True, dimension=k)


def line_order(geometry: Geometry) -> int:
    """q for a geometry whose lines all have q+1 points."""
    sizes = {len(line) for line in geometry.lines}
    if len(sizes) != 1:
        raise MixedSingularDimensions("lines of different sizes", sizes=sorted(sizes))
    return sizes.pop() - 1


def polar_rank(geometry: Geometry) -> AxiomReport:
    """Rank r of a polar space: every maximal singular subspace is a PG(r-1, q)."""
    shult = check_shult(geometry)
    if not shult.holds:
        raise ShultViolated("Shult axiom fails", **(shult.witness or {}))
    degenerate = check_degenerate(geometry)
    if degenerate.holds:
        raise DegenerateGeometry("geometry is degenerate", **(degenerate.witness or {}))
    q = line_order(geometry)
    subspaces = maximal_singular_subspaces(geometry)
    dims: set[int] = set()
    for s in subspaces:
        report = check_projective_space(geometry, s, q)
        if not report.holds:
            raise MixedSingularDimensions(
                "a maximal singular subspace is not a projective space",
                points=to_sorted(s),
                reason=report.details.get("reason"),
            )
        dims.add(report.dimension or 0)
    if len(dims) != 1:
        raise MixedSingularDimensions(
            "maximal singular subspaces of different dimensions", dimensions=sorted(dims)
        )
    dim = dims.pop()
    return AxiomReport(
        axiom="polar_rank",
        holds=True,
        rank=dim + 1,
        dimension=dim,
        details={"maximal_singular_subspaces": len(subspaces), "q": q},
    )


def perp_geometry(geometry: Geometry, x: int, y: int) -> Geometry:
    """The subgeometry on the common perp of two non-collinear points."""
    geometry.check_point(x)
    geometry.check_point(y)
    if x == y or geometry.collinear_rows[x] >> y & 1:
        raise CollinearPair(f"points {x} and {y} are collinear", points=[x, y])
    common = geometry.closed_rows[x] & geometry.closed_rows[y]
    return induced_geometry(geometry, common)


def induced_geometry(geometry: Geometry, mask: int) -> Geometry:
    """Points of mask with the lines fully inside it, renumbered in order."""
    points = to_sorted(mask)
    position = {p: i for i, p in enumerate(points)}
    masks = geometry.line_masks
    inside = sorted(
        {i for p in points for i in geometry.lines_through[p] if masks[i] & ~mask == 0}
    )
    lines = [tuple(position[p] for p in geometry.lines[i]) for i in inside]
    labels = [geometry.point_labels[p] if geometry.point_labels else str(p) for p in points]
    return Geometry.create(len(points), lines, labels)


def check_grid(geometry: Geometry, q: int) -> bool:
    """(q+1)x(q+1) grid: two parallel classes of q+1 lines, each line meeting every line of the other class once."""
    side = q + 1
    if geometry.n_points != side * side or len(geometry.lines) != 2 * side:
        return False
    if any(len(line) != side for line in geometry.lines):
        return False
    if any(len(t) != 2 for t in geometry.lines_through):
        return False
    masks = geometry.line_masks
    first = [m for m in masks if not m & masks[0] or m == masks[0]]
    second = [m for m in masks if m & masks[0] and m != masks[0]]
    if len(first) != side or len(second) != side:
        return False
    for a, b in itertools.combinations(first, 2):
        if a & b:
            return False
    for a, b in itertools.combinations(second, 2):
        if a & b:
            return False
    if not all((a & b).bit_count() == 1 for a in first for b in second):
        return False
    return all(row.bit_count() == 2 * q for row in geometry.collinear_rows)


@dataclass(frozen=True)
class PerpClass:
    kind: PerpKind
    points: int
    rank: Optional[int] = None
    reason: Optional[str] = None


def classify_perp(geometry: Geometry, x: int, y: int, q: Optional[int] = None) -> PerpClass:
    """What the common perp of two non-collinear points is."""
    common = (geometry.closed_rows[x] & geometry.closed_rows[y]).bit_count()
    if common == 0:
        return PerpClass(PerpKind.empty, 0)
    if common == 1:
        return PerpClass(PerpKind.point, 1)
    perp = perp_geometry(geometry, x, y)
    if not perp.lines:
        return PerpClass(PerpKind.other, common, reason="no lines in the perp")
    order = q if q is not None else len(perp.lines[0]) - 1
    if check_grid(perp, order):
        return PerpClass(PerpKind.grid, common, rank=2)
    try:
        report = polar_rank(perp)
    except LieProbeError as exc:
        return PerpClass(PerpKind.other, common, reason=exc.code)
    return PerpClass(PerpKind.polar, common, rank=report.rank)


def _lines_have_opposite_points(geometry: Geometry) -> Optional[int]:
    """First line whose perp holds no two non-collinear points."""
    closed = geometry.closed_rows
    for i, m in enumerate(geometry.line_masks):
        common = geometry.universe
        for p in bits(m):
            common &= closed[p]
        if not any(common & ~closed[a] for a in bits(common)):
            return i
    return None


def distance_two_perps(
    geometry: Geometry, anchors: Optional[Iterable[int]] = None
) -> list[tuple[int, int, PerpClass]]:
    """
    classify_perp for every non-collinear pair, or with anchors for every
    non-collinear pair containing an anchor point. Pairs come in order.
    """
    closed = geometry.closed_rows
    sources = range(geometry.n_points) if anchors is None else sorted(set(anchors))
    found = []
    for x in sources:
        far = geometry.universe & ~closed[x]
        if anchors is None:
            far &= ~((1 << (x + 1)) - 1)
        found += [(x, y, classify_perp(geometry, x, y)) for y in bits(far)]
    return found


def check_parapolar(
    geometry: Geometry,
    r: int,
    anchors: Optional[Iterable[int]] = None,
    perps: Optional[Sequence[tuple[int, int, PerpClass]]] = None,
) -> AxiomReport:
    """
    Parapolar space of symplectic rank at least r. With anchors, only pairs
    containing an anchor point are checked; perps reuses a classification
    from distance_two_perps.
    """
    graph = point_graph(geometry)
    if not is_connected(graph):
        return AxiomReport(
            axiom="parapolar", holds=False, details={"reason": "point graph is disconnected"}
        )
    gamma = check_gamma(geometry)
    if not gamma.holds:
        return AxiomReport(
            axiom="parapolar",
            holds=False,
            witness=gamma.witness,
            details={"reason": "not a gamma space"},
        )
    if perps is None:
        perps = distance_two_perps(geometry, anchors)
    strong = True
    ranks: set[int] = set()
    for x, y, perp in perps:
        if perp.kind == PerpKind.empty:
            continue
        if perp.kind == PerpKind.point:
            strong = False
            continue
        if perp.rank is None or perp.rank < r - 1:
            return AxiomReport(
                axiom="parapolar",
                holds=False,
                witness={"points": [x, y]},
                details={
                    "reason": f"perp is {perp.kind} of rank {perp.rank}",
                    "perp_points": perp.points,
                },
            )
        ranks.add(perp.rank)
    line = _lines_have_opposite_points(geometry)
    if line is not None:
        return AxiomReport(
            axiom="parapolar",
            holds=False,
            witness={"line": [line]},
            details={"reason": "line perp has no non-collinear pair"},
        )
    return AxiomReport(
        axiom="parapolar",
        holds=True,
        rank=min(ranks) if ranks else None,
        strong=strong,
        uniform=len(ranks) <= 1,
        details={"pairs_checked": len(perps), "perp_ranks": sorted(ranks)},
    )
