from typing import Optional

from prefect import task
from prefect.cache_policies import NO_CACHE

from app.pydantic_models.report import LocalEvidence, RecognitionReport
from app.services.graphs import Graph
from app.services.recognize import (
    RecognitionSettings,
    RecognitionState,
    classify_local,
    finish_recognition,
    prepare_recognition,
)


@task(cache_policy=NO_CACHE)
def prepare_vertices(
    graph: Graph, source: Optional[str], seed: int, settings: RecognitionSettings
) -> RecognitionState:
    print(f"Preparing recognition of {source or 'graph'} ({graph.n} vertices)...")
    state = prepare_recognition(graph, source, seed, settings)
    if state.geometry is None:
        print("⚠️ Reconstruction failed; no local classification will run.")
    else:
        print(
            f"Height {state.q}, {len(state.geometry.lines)} lines; "
            f"classifying {len(state.sample)} vertices ({state.report.evidence.sampling})."
        )
    return state


@task(cache_policy=NO_CACHE)
def classify_vertex(
    graph: Graph, vertex: int, q: Optional[int], settings: RecognitionSettings
) -> LocalEvidence:
    return classify_local(
        graph,
        vertex,
        q,
        settings.local_iso_limit,
        settings.clique_limit,
        settings.max_points,
    )


@task(cache_policy=NO_CACHE)
def finish_vertices(state: RecognitionState, local: list[LocalEvidence]) -> RecognitionReport:
    report = finish_recognition(state, local)
    if report.recognized:
        print(f"✅ Recognised {report.outcome_name} ({report.identification_level}).")
    else:
        codes = ", ".join(d.code for d in report.diagnostics) or "no diagnostics"
        print(f"⚠️ Unknown: {codes}")
    return report
