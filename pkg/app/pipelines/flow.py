"""
Prefect flows behind the command line. Each flow is a thin composition of
tasks from app.tasks; local classification fans out over a thread pool and
results are gathered in submission order, so reports do not depend on the
worker count.
"""

from pathlib import Path
from typing import Optional

from prefect import flow, unmapped
from prefect.task_runners import ThreadPoolTaskRunner

from app.integrations.documents import SUFFIX_FORMATS
from app.pipelines.config import EngineConfig
from app.pydantic_models.axioms import AxiomReport
from app.pydantic_models.report import RecognitionReport
from app.services.errors import LieProbeError
from app.services.geometry import Geometry, point_graph
from app.services.graphs import Graph
from app.services.recognize import RecognitionSettings
from app.tasks.check_axioms import check_axioms
from app.tasks.classify_vertices import classify_vertex, finish_vertices, prepare_vertices
from app.tasks.generate_geometry import generate_geometry
from app.tasks.load_inputs import load_geometry, load_graph
from app.tasks.reconstruct_geometry import reconstruct_geometry
from app.tasks.write_outputs import (
    write_geometry_output,
    write_graph_output,
    write_report_output,
    write_summary,
)


def thread_runner(threads: int) -> ThreadPoolTaskRunner:
    return ThreadPoolTaskRunner(max_workers=threads)


@flow(log_prints=True, validate_parameters=False)
def generate_flow(
    family: str,
    q: int,
    n: Optional[int] = None,
    dim: Optional[int] = None,
    graph_path: Optional[Path] = None,
    geometry_path: Optional[Path] = None,
    fmt: Optional[str] = None,
    header: bool = False,
    max_points: int = 5000,
) -> Geometry:
    geometry = generate_geometry(family, q, n, dim, max_points)
    if graph_path is not None:
        write_graph_output(point_graph(geometry), graph_path, fmt, header)
    if geometry_path is not None:
        write_geometry_output(geometry, geometry_path)
    return geometry


@flow(log_prints=True, validate_parameters=False)
def reconstruct_flow(
    source: Path, fmt: Optional[str] = None, geometry_path: Optional[Path] = None
) -> Geometry:
    graph = load_graph(source, fmt)
    geometry = reconstruct_geometry(graph)
    if geometry_path is not None:
        write_geometry_output(geometry, geometry_path)
    return geometry


def _recognize_graph(
    graph: Graph, source: Optional[str], seed: int, settings: RecognitionSettings
) -> RecognitionReport:
    state = prepare_vertices(graph, source, seed, settings)
    futures = classify_vertex.map(
        unmapped(graph), state.sample, unmapped(state.q), unmapped(settings)
    )
    local = [future.result() for future in futures]
    return finish_vertices(state, local)


@flow(log_prints=True, validate_parameters=False)
def recognize_flow(
    source: Path,
    config: EngineConfig,
    fmt: Optional[str] = None,
    report_path: Optional[Path] = None,
) -> RecognitionReport:
    print(f"Recognising {source} with {config.threads} worker(s), seed {config.seed}")
    graph = load_graph(source, fmt)
    report = _recognize_graph(graph, source.name, config.seed, config.recognition_settings())
    if report_path is not None:
        write_report_output(report, report_path, config.output.report_indent)
    return report


@flow(log_prints=True, validate_parameters=False)
def verify_flow(source: Path, axioms: list[str], fmt: Optional[str] = None) -> list[AxiomReport]:
    """Geometry JSON is checked as is; any graph file is reconstructed first."""
    if source.suffix.lower() == ".json" and '"n_points"' in source.read_text():
        geometry = load_geometry(source)
    else:
        geometry = reconstruct_geometry(load_graph(source, fmt))
    return check_axioms(geometry, axioms)


@flow(log_prints=True, validate_parameters=False)
def batch_recognize_flow(directory: Path, config: EngineConfig, summary_path: Path) -> list[RecognitionReport]:
    files = sorted(p for p in directory.iterdir() if p.suffix.lower() in SUFFIX_FORMATS and p.is_file())
    print(f"Found {len(files)} graph files in {directory}")
    settings = config.recognition_settings()
    reports = []
    for path in files:
        try:
            graph = load_graph(path)
        except LieProbeError as exc:
            print(f"⚠️ Skipping {path.name}: {exc.code}")
            report = RecognitionReport(source=path.name, vertices=0, edges=0, seed=config.seed)
            report.diagnostics.append(exc.to_diagnostic())
            reports.append(report)
            continue
        reports.append(_recognize_graph(graph, path.name, config.seed, settings))
    write_summary(reports, summary_path)
    return reports

