from pathlib import Path
from typing import Optional

import polars as pl
from prefect import task
from prefect.cache_policies import NO_CACHE

from app.integrations.documents import write_geometry, write_graph, write_report
from app.pydantic_models.report import RecognitionReport
from app.services.geometry import Geometry
from app.services.graphs import Graph

SUMMARY_SCHEMA = {
    "file": pl.Utf8,
    "vertices": pl.Int64,
    "outcome": pl.Utf8,
    "q": pl.Int64,
    "level": pl.Utf8,
    "diagnostics": pl.Int64,
}


@task(cache_policy=NO_CACHE)
def write_graph_output(graph: Graph, path: Path, fmt: Optional[str] = None, header: bool = False) -> Path:
    written = write_graph(graph, path, fmt, header)
    print(f"✅ Graph written to {written}")
    return written


@task(cache_policy=NO_CACHE)
def write_geometry_output(geometry: Geometry, path: Path) -> Path:
    written = write_geometry(geometry, path)
    print(f"✅ Geometry written to {written}")
    return written


@task(cache_policy=NO_CACHE)
def write_report_output(report: RecognitionReport, path: Path, indent: int = 2) -> Path:
    written = write_report(report, path, indent)
    print(f"✅ Report written to {written}")
    return written


def summary_frame(reports: list[RecognitionReport]) -> pl.DataFrame:
    return pl.DataFrame(
        [
            {
                "file": report.source,
                "vertices": report.vertices,
                "outcome": report.outcome_name,
                "q": report.q,
                "level": str(report.identification_level),
                "diagnostics": len(report.diagnostics),
            }
            for report in reports
        ],
        schema=SUMMARY_SCHEMA,
    )


@task(cache_policy=NO_CACHE)
def write_summary(reports: list[RecognitionReport], path: Path) -> pl.DataFrame:
    frame = summary_frame(reports)
    frame.write_csv(path)
    print(f"✅ Summary of {frame.height} files written to {path}")
    return frame
