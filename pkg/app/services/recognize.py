"""
The recognition pipeline: from a bare graph to a family label with evidence.

height -> build_geometry -> local classification at sampled vertices ->
gamma/Shult -> polar branch (polar rank) or parapolar branch (perp census,
residue dimensions, table match) -> identification against a generator.
Negative outcomes never raise; they come back as an Unknown report whose
diagnostics say what failed.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cache
from typing import Optional, Sequence

import polars as pl
from pydantic import ValidationError

from app.pydantic_models.axioms import AxiomReport
from app.pydantic_models.family import FIELD_ORDERS, POLAR_FAMILIES, Family, FamilyLabel
from app.pydantic_models.report import (
    LocalEvidence,
    PerpCensusRow,
    RecognitionReport,
    SrgParameters,
)
from app.pydantic_models.utils import IdentificationLevel, PerpKind
from app.services.errors import (
    AmbiguousMatch,
    DisconnectedGraph,
    LieProbeError,
    MixedSingularDimensions,
    NonUniformLocal,
    RankTooSmall,
    TableMismatch,
)
from app.services.families import global_rows, local_rows, table_frame
from app.services.generators import DEFAULT_MAX_POINTS, reference_geometry
from app.services.geometry import (
    Geometry,
    PerpClass,
    check_degenerate,
    check_gamma,
    check_parapolar,
    check_partial_linear,
    check_shult,
    distance_two_perps,
    line_order,
    point_graph,
    polar_rank,
    projective_dimension,
)
from app.services.graphs import (
    Graph,
    are_isomorphic,
    check_vertex,
    color_refine,
    diameter,
    double_perp_mask,
    is_connected,
    local_graph,
    maximal_cliques,
)
from app.services.reconstruct import build_geometry, height, local_quotient, plane_span
from app.utils.utils import bits, lowest, mask_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecognitionSettings:
    iso_limit: int = 2500
    exhaustive_limit: int = 500
    samples: int = 5
    local_iso_limit: int = 500
    clique_limit: int = 5000
    max_points: int = DEFAULT_MAX_POINTS
    # classify every distance-2 perp even when the local graphs are sampled
    all_perps: bool = False


@dataclass
class RecognitionState:
    """Everything finish_recognition needs once the local classifications are in."""

    graph: Graph
    report: RecognitionReport
    settings: RecognitionSettings
    geometry: Optional[Geometry] = None
    sample: list[int] = field(default_factory=list)

    @property
    def q(self) -> Optional[int]:
        return self.report.q

    @property
    def exhaustive(self) -> bool:
        return self.report.evidence.sampling == "exhaustive"


@cache
def _reference(family: str, n: int, q: int, role: str, max_points: int) -> Optional[Geometry]:
    label = FamilyLabel(family=family, n=n, q=q, role=role)
    return reference_geometry(label, max_points)


@cache
def _reference_graph(family: str, n: int, q: int, role: str, max_points: int) -> Optional[Graph]:
    reference = _reference(family, n, q, role, max_points)
    return None if reference is None else point_graph(reference)


def srg_parameters(graph: Graph) -> SrgParameters:
    """Exhaustive check of constant degree and constant common-neighbour counts."""

    def fail(reason: str) -> SrgParameters:
        return SrgParameters(strongly_regular=False, v=graph.n, reason=reason)

    if graph.n == 0:
        return fail("empty graph")
    degrees = {row.bit_count() for row in graph.rows}
    if len(degrees) > 1:
        return fail("not regular")
    k = degrees.pop()
    if k == 0:
        return fail("no edges")
    if k == graph.n - 1:
        return fail("complete graph")
    rows = graph.rows
    lam: set[int] = set()
    mu: set[int] = set()
    for u in range(graph.n):
        row = rows[u]
        for v in range(u + 1, graph.n):
            (lam if row >> v & 1 else mu).add((row & rows[v]).bit_count())
        if len(lam) > 1:
            return fail(f"adjacent pairs share {sorted(lam)} neighbours")
        if len(mu) > 1:
            return fail(f"non-adjacent pairs share {sorted(mu)} neighbours")
    return SrgParameters(strongly_regular=True, v=graph.n, k=k, lam=lam.pop(), mu=mu.pop())


def hyperbolic_line_size(graph: Graph) -> Optional[int]:
    """|{x,y}^perp perp| for the first non-adjacent pair, None for a complete graph."""
    if graph.n == 0:
        return None
    far = graph.universe & ~graph.closed_rows[0]
    if not far:
        return None
    return double_perp_mask(graph, 1 | 1 << lowest(far)).bit_count()


def point_residual(geometry: Geometry, p: int, graph: Optional[Graph] = None) -> Geometry:
    """
    Lines through p as points; the lines through p inside one plane span
    form a line of the residual. Points are labelled by the other points of
    their line.
    """
    geometry.check_point(p)
    graph = point_graph(geometry) if graph is None else graph
    q = line_order(geometry)
    through = geometry.lines_through[p]
    masks = [geometry.line_masks[i] for i in through]
    others = [lowest(m & ~(1 << p)) for m in masks]
    covered = [1 << a for a in range(len(through))]
    lines: list[list[int]] = []
    for a in range(len(through)):
        for b in range(a + 1, len(through)):
            if covered[a] >> b & 1 or not graph.has_edge(others[a], others[b]):
                continue
            plane = mask_of(plane_span(graph, p, others[a], others[b], q))
            members = [c for c, m in enumerate(masks) if m & ~plane == 0]
            pencil = mask_of(members)
            for c in members:
                covered[c] |= pencil
            lines.append(members)
    labels = [
        ",".join(str(v) for v in geometry.lines[i] if v != p) for i in through
    ]
    return Geometry.create(len(through), lines, labels)


def local_signature(graph: Graph, v: int) -> tuple[int, tuple[int, ...]]:
    """Degree and sorted local degrees; equal at all vertices of a locally homogeneous graph."""
    row = graph.rows[v]
    return graph.degree(v), tuple(sorted((graph.rows[u] & row).bit_count() for u in graph.adjacency[v]))


def _match_local(q: int, points: int, dims: tuple[int, int], diam: int) -> list[tuple[str, int]]:
    frame = table_frame(q, local_rows())
    matches = frame.filter(
        (pl.col("points") == str(points))
        & (pl.col("dim_low") == dims[0])
        & (pl.col("dim_high") == dims[1])
        & (pl.col("diameter") == diam)
    )
    return [(family, n) for family, n in matches.select("family", "n").rows()]


def _split_symplectic(
    candidates: list[tuple[str, int]], quotient: Graph, q: int
) -> list[tuple[str, int]]:
    """W(2n-1,q) and Q(2n,q) agree in every parameter; hyperbolic lines tell them apart for odd q."""
    families = {family for family, _ in candidates}
    if not {Family.polar_w, Family.polar_q} <= families:
        return candidates
    size = hyperbolic_line_size(quotient)
    drop = Family.polar_q if q % 2 == 0 or size == q + 1 else Family.polar_w
    return [c for c in candidates if c[0] != drop]


def classify_local(
    graph: Graph,
    v: int,
    q: Optional[int] = None,
    iso_limit: int = 500,
    clique_limit: int = 5000,
    max_points: int = DEFAULT_MAX_POINTS,
) -> LocalEvidence:
    """Match the ray quotient of the local graph at v against the local rows of the table."""
    check_vertex(graph, v)
    try:
        quotient, partition = local_quotient(graph, v)
    except LieProbeError as exc:
        return LocalEvidence(vertex=v, points=0, diagnostics=[exc.with_details(at_vertex=v).to_diagnostic()])
    height_at = partition.height
    evidence = LocalEvidence(vertex=v, q=height_at, points=quotient.n)

    def unknown(error: LieProbeError) -> LocalEvidence:
        evidence.diagnostics.append(error.with_details(at_vertex=v).to_diagnostic())
        return evidence

    if q is not None and height_at != q:
        return unknown(TableMismatch(f"local height {height_at} differs from {q}", height=height_at))
    degrees = {row.bit_count() for row in quotient.rows}
    evidence.degree = degrees.pop() if len(degrees) == 1 else None
    if not is_connected(quotient):
        return unknown(DisconnectedGraph("local quotient is disconnected", points=quotient.n))
    evidence.diameter = diameter(quotient)

    try:
        cliques = maximal_cliques(quotient, clique_limit)
    except LieProbeError as exc:
        return unknown(exc)
    sizes = sorted({c.bit_count() for c in cliques})
    dims = [projective_dimension(size, height_at) for size in sizes]
    if None in dims:
        return unknown(
            MixedSingularDimensions("a maximal clique is not a projective space", sizes=sizes)
        )
    low, high = min(d for d in dims if d is not None), max(d for d in dims if d is not None)
    evidence.singular_dims = [low, high]

    if height_at not in FIELD_ORDERS:
        return unknown(TableMismatch(f"height {height_at} is not a supported field order"))
    candidates = _match_local(height_at, quotient.n, (low, high), evidence.diameter)
    candidates = _split_symplectic(candidates, quotient, height_at)
    if not candidates:
        return unknown(
            TableMismatch(
                "local quotient matches no local family",
                points=quotient.n,
                dims=[low, high],
                diameter=evidence.diameter,
            )
        )
    if len(candidates) > 1:
        return unknown(
            AmbiguousMatch(
                "local quotient matches several local families",
                candidates=[f"{f}:{n}" for f, n in candidates],
            )
        )
    family, n = candidates[0]
    label = FamilyLabel(family=family, n=n, q=height_at, role="local")

    if quotient.n <= iso_limit:
        reference = _reference_graph(family, n, height_at, "local", max_points)
        if reference is not None:
            result = are_isomorphic(quotient, reference, iso_limit)
            evidence.confirmed = result.isomorphic
            if not result.isomorphic:
                return unknown(
                    TableMismatch(
                        f"local quotient is not isomorphic to {label.display}",
                        reason=result.reason,
                    )
                )
    evidence.label = label
    evidence.display = label.display
    return evidence


def local_types(graph: Graph, vertices: Optional[Sequence[int]] = None) -> list[tuple[int, tuple]]:
    """(vertex, fingerprint) with the fingerprint a colour-refinement histogram of the local graph."""
    vertices = range(graph.n) if vertices is None else vertices
    found = []
    for v in vertices:
        local = local_graph(graph, v)
        histogram = tuple(sorted(Counter(color_refine(local)).items()))
        found.append((v, (local.n, local.edge_count, histogram)))
    return found


def is_locally_isomorphic(
    g: Graph, h: Graph, exhaustive_limit: int = 500, samples: int = 5, iso_limit: int = 2500
) -> bool:
    """Every local graph of g is isomorphic to some local graph of h."""

    def chosen(graph: Graph) -> list[int]:
        return list(range(graph.n)) if graph.n <= exhaustive_limit else list(range(min(samples, graph.n)))

    buckets: dict[tuple, list[int]] = defaultdict(list)
    for w, fingerprint in local_types(h, chosen(h)):
        buckets[fingerprint].append(w)
    for v, fingerprint in local_types(g, chosen(g)):
        local = local_graph(g, v)
        if not any(
            are_isomorphic(local, local_graph(h, w), iso_limit).isomorphic
            for w in buckets.get(fingerprint, [])
        ):
            logger.debug(f"Local graph at {v} has no counterpart")
            return False
    return True


def perp_census(perps: Sequence[tuple[int, int, PerpClass]]) -> list[PerpCensusRow]:
    if not perps:
        return []
    frame = pl.DataFrame(
        {
            "kind": [str(c.kind) for _, _, c in perps],
            "points": [c.points for _, _, c in perps],
            "rank": [c.rank for _, _, c in perps],
        },
        schema={"kind": pl.Utf8, "points": pl.Int64, "rank": pl.Int64},
    )
    grouped = (
        frame.group_by(["kind", "points", "rank"])
        .agg(pl.len().alias("pairs"))
        .sort(["kind", "points", "rank"], nulls_last=True)
    )
    return [PerpCensusRow(**row) for row in grouped.iter_rows(named=True)]


def _perp_sizes(geometry: Geometry, anchors: Sequence[int]) -> Counter[int]:
    """Common-perp sizes of the non-collinear pairs avoiding anchors."""
    closed = geometry.closed_rows
    skip = mask_of(anchors)
    sizes: Counter[int] = Counter()
    for x in range(geometry.n_points):
        if skip >> x & 1:
            continue
        row = closed[x]
        far = geometry.universe & ~row & ~skip & ~((1 << (x + 1)) - 1)
        sizes.update((row & closed[y]).bit_count() for y in bits(far))
    return sizes


def prepare_recognition(
    graph: Graph,
    source: Optional[str] = None,
    seed: int = 0,
    settings: RecognitionSettings = RecognitionSettings(),
) -> RecognitionState:
    """Height, reconstruction and the choice of vertices to classify."""
    report = RecognitionReport(
        source=source, vertices=graph.n, edges=graph.edge_count, seed=seed
    )
    state = RecognitionState(graph=graph, report=report, settings=settings)
    try:
        if graph.n < 2 or not is_connected(graph):
            raise DisconnectedGraph("recognition needs a connected graph on two or more vertices")
        q = height(graph)
        report.q = report.evidence.height = q
        geometry = build_geometry(graph, q)
    except LieProbeError as exc:
        report.diagnostics.append(exc.to_diagnostic())
        logger.warning(f"Reconstruction failed: {exc.code}: {exc.message}")
        return state
    state.geometry = geometry
    report.evidence.points = geometry.n_points
    report.evidence.lines = len(geometry.lines)

    if graph.n <= settings.exhaustive_limit:
        state.sample = list(range(graph.n))
        return state
    report.evidence.sampling = "sampled"
    signatures = {local_signature(graph, v) for v in range(graph.n)}
    if len(signatures) > 1:
        report.diagnostics.append(
            NonUniformLocal(
                f"local graphs fall into {len(signatures)} parameter classes",
                classes=len(signatures),
            ).to_diagnostic()
        )
        return state
    state.sample = list(range(min(settings.samples, graph.n)))
    return state


def _collect_locals(state: RecognitionState, local: Sequence[LocalEvidence]) -> Optional[LocalEvidence]:
    """The common local classification, or None after recording why there is none."""
    report = state.report
    report.evidence.local = list(local)
    failed = next((e for e in local if e.label is None), None)
    if failed is not None:
        report.diagnostics += failed.diagnostics or [
            TableMismatch("local graph unclassified", vertex=failed.vertex).to_diagnostic()
        ]
        return None
    names = sorted({e.display for e in local})
    if len(names) > 1:
        report.diagnostics.append(
            NonUniformLocal("local geometries differ between vertices", locals=names).to_diagnostic()
        )
        return None
    return local[0] if local else None


def _polar_label(state: RecognitionState, geometry: Geometry, local: LocalEvidence) -> FamilyLabel:
    report = state.report
    rank_report = polar_rank(geometry)
    report.evidence.axioms.append(rank_report)
    r = rank_report.rank or 0
    report.evidence.singular_dims = [r - 1, r - 1]
    assert local.label is not None
    if local.label.family not in POLAR_FAMILIES or local.label.n != r - 1:
        raise MixedSingularDimensions(
            f"polar space of rank {r} has local geometry {local.display}",
            rank=r,
            local=local.display,
        )
    return FamilyLabel(family=local.label.family, n=r, q=local.label.q)


def _parapolar_label(state: RecognitionState, geometry: Geometry, local: LocalEvidence) -> FamilyLabel:
    report = state.report
    evidence = report.evidence
    anchors = None if state.exhaustive or state.settings.all_perps else state.sample
    perps = distance_two_perps(geometry, anchors)
    evidence.perp_census = perp_census(perps)
    evidence.perp_pairs_classified = len(perps)
    parapolar = check_parapolar(geometry, 3, anchors, perps)
    evidence.axioms.append(parapolar)
    if not parapolar.holds:
        raise TableMismatch(
            f"not a parapolar space: {parapolar.details.get('reason')}",
            **(parapolar.witness or {}),
        )
    if anchors is not None:
        sizes = _perp_sizes(geometry, anchors)
        evidence.perp_pairs_size_checked = sum(sizes.values())
        seen = {c.points for _, _, c in perps}
        if set(sizes) - seen:
            raise NonUniformLocal(
                "perp sizes away from the sampled vertices differ",
                sizes=sorted(set(sizes) - seen),
            )
    kinds = {str(c.kind) for _, _, c in perps if c.kind not in (PerpKind.empty, PerpKind.point)}

    assert local.label is not None
    low, high = local.singular_dims
    evidence.singular_dims = [low + 1, high + 1]
    frame = table_frame(local.label.q, [row for row in global_rows() if row.family not in POLAR_FAMILIES])
    matches = frame.filter(
        (pl.col("local_family") == str(local.label.family))
        & (pl.col("local_n") == local.label.n)
        & (pl.col("dim_low") == low + 1)
        & (pl.col("dim_high") == high + 1)
        & (pl.col("diameter") == evidence.diameter)
    )
    if matches.height == 0:
        raise TableMismatch(
            "no table row has this local family, dimension pair and diameter",
            local=local.display,
            dims=evidence.singular_dims,
            diameter=evidence.diameter,
        )
    if matches.height > 1:
        raise AmbiguousMatch(
            "several table rows match", families=matches["family"].to_list()
        )
    row = matches.row(0, named=True)
    if row["points"] != str(geometry.n_points):
        raise TableMismatch(
            f"{row['family']} expects {row['points']} points, found {geometry.n_points}",
            formula=row["formula"],
        )
    expected_kind = PerpKind.grid if row["family"] == Family.grassmann else PerpKind.polar
    if kinds - {str(expected_kind)}:
        raise TableMismatch(
            f"{row['family']} needs {expected_kind} perps, found {sorted(kinds)}", kinds=sorted(kinds)
        )
    return FamilyLabel(family=row["family"], n=row["n"], q=local.label.q)


def _identify(state: RecognitionState, geometry: Geometry, label: FamilyLabel) -> IdentificationLevel:
    settings = state.settings
    reference = _reference(label.family, label.n, label.q, "global", settings.max_points)
    if reference is None:
        return IdentificationLevel.parameter_level
    if reference.n_points == geometry.n_points and reference.line_set == geometry.line_set:
        return IdentificationLevel.line_set_verified
    if state.graph.n > settings.iso_limit:
        return IdentificationLevel.parameter_level
    reference_graph = _reference_graph(label.family, label.n, label.q, "global", settings.max_points)
    assert reference_graph is not None
    result = are_isomorphic(state.graph, reference_graph, settings.iso_limit)
    if not result.isomorphic:
        raise TableMismatch(
            f"point graph is not isomorphic to {label.display}", reason=result.reason
        )
    return IdentificationLevel.line_set_verified


def finish_recognition(state: RecognitionState, local: Sequence[LocalEvidence]) -> RecognitionReport:
    """Axioms, branch, table match and identification."""
    report = state.report
    geometry = state.geometry
    if geometry is None or (report.diagnostics and not local):
        return report
    common = _collect_locals(state, local)
    if common is None:
        return report
    evidence = report.evidence
    try:
        # every source, also when the local graphs were only sampled
        evidence.diameter = diameter(state.graph)
        gamma = check_gamma(geometry)
        evidence.axioms.append(gamma)
        if not gamma.holds:
            raise TableMismatch("not a gamma space", **(gamma.witness or {}))
        shult = check_shult(geometry)
        degenerate = check_degenerate(geometry)
        evidence.axioms += [shult, degenerate]
        if shult.holds and not degenerate.holds:
            label = _polar_label(state, geometry, common)
        else:
            label = _parapolar_label(state, geometry, common)
        if evidence.diameter == 2:
            evidence.srg = srg_parameters(state.graph)
            srg = evidence.srg
            q = label.q
            if label.family == Family.grassmann and srg.strongly_regular and srg.mu != (q + 1) ** 2:
                raise TableMismatch(f"mu is {srg.mu}, grids need {(q + 1) ** 2}", mu=srg.mu)
        level = _identify(state, geometry, label)
    except LieProbeError as exc:
        report.diagnostics.append(exc.to_diagnostic())
        logger.warning(f"Recognition failed: {exc.code}: {exc.message}")
        return report
    except ValidationError as exc:
        report.diagnostics.append(
            RankTooSmall("outcome outside the recognised ranges", errors=exc.error_count()).to_diagnostic()
        )
        return report
    report.outcome = label
    report.outcome_name = label.display
    report.identification_level = level
    logger.info(f"Recognised {label.display} ({level})")
    return report


def recognize(
    graph: Graph,
    source: Optional[str] = None,
    seed: int = 0,
    settings: RecognitionSettings = RecognitionSettings(),
) -> RecognitionReport:
    state = prepare_recognition(graph, source, seed, settings)
    local = [
        classify_local(
            graph,
            v,
            state.q,
            settings.local_iso_limit,
            settings.clique_limit,
            settings.max_points,
        )
        for v in state.sample
    ]
    return finish_recognition(state, local)


def _nondegenerate(geometry: Geometry) -> AxiomReport:
    report = check_degenerate(geometry)
    return report.model_copy(update={"axiom": "nondegenerate", "holds": not report.holds})


def _polar(geometry: Geometry) -> AxiomReport:
    try:
        return polar_rank(geometry)
    except LieProbeError as exc:
        return AxiomReport(axiom="polar_rank", holds=False, details={"reason": exc.code, **exc.details})


def axiom_reports(geometry: Geometry, requested: Sequence[str]) -> list[AxiomReport]:
    """Checks by name: partial_linear, gamma, shult, nondegenerate, polar, parapolar:r."""
    checks = {
        "partial_linear": check_partial_linear,
        "gamma": check_gamma,
        "shult": check_shult,
        "nondegenerate": _nondegenerate,
        "polar": _polar,
    }
    reports = []
    for name in requested:
        key, _, argument = name.partition(":")
        if key == "parapolar":
            reports.append(check_parapolar(geometry, int(argument or 2)))
        elif key in checks:
            reports.append(checks[key](geometry))
        else:
            raise ValueError(f"unknown axiom {name}")
    return reports
