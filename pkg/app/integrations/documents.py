"""
Files on disk: graphs (graph6, sparse6, JSON), geometry JSON and report JSON.
Writers produce the same bytes for the same input.
"""

import logging
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from app.integrations.graph6 import (
    GRAPH6_HEADER,
    SPARSE6_HEADER,
    decode_graph,
    encode_graph6,
    encode_sparse6,
)
from app.pydantic_models.documents import GeometryDocument, GraphDocument
from app.pydantic_models.report import RecognitionReport
from app.pydantic_models.utils import GraphFormat
from app.services.errors import InvalidGeometry, MalformedInput
from app.services.geometry import Geometry
from app.services.graphs import Graph

logger = logging.getLogger(__name__)

SUFFIX_FORMATS = {
    ".g6": GraphFormat.graph6,
    ".graph6": GraphFormat.graph6,
    ".s6": GraphFormat.sparse6,
    ".sparse6": GraphFormat.sparse6,
    ".json": GraphFormat.json,
}


def detect_format(path: Path, text: Optional[str] = None) -> GraphFormat:
    """By suffix first, then by content."""
    if path.suffix.lower() in SUFFIX_FORMATS:
        return SUFFIX_FORMATS[path.suffix.lower()]
    if text is None:
        raise MalformedInput(f"cannot tell the format of {path}", path=str(path))
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return GraphFormat.json
    if stripped.startswith(SPARSE6_HEADER) or stripped.startswith(":"):
        return GraphFormat.sparse6
    return GraphFormat.graph6


def graph_to_document(graph: Graph) -> GraphDocument:
    return GraphDocument(
        n=graph.n,
        edges=list(graph.edges()),
        labels=list(graph.labels) if graph.labels else None,
    )


def graph_from_document(document: GraphDocument) -> Graph:
    return Graph.from_edges(document.n, document.edges, document.labels)


def geometry_to_document(geometry: Geometry) -> GeometryDocument:
    return GeometryDocument(
        n_points=geometry.n_points,
        lines=[list(line) for line in geometry.lines],
        labels=list(geometry.point_labels) if geometry.point_labels else None,
    )


def geometry_from_document(document: GeometryDocument) -> Geometry:
    return Geometry.create(document.n_points, document.lines, document.labels)


def parse_graph(text: str, fmt: GraphFormat | str) -> Graph:
    if fmt == GraphFormat.json:
        return graph_from_document(GraphDocument.model_validate_json(text))
    return decode_graph(text)


def read_graph(path: Path | str, fmt: Optional[GraphFormat | str] = None) -> Graph:
    path = Path(path)
    text = path.read_text()
    fmt = detect_format(path, text) if fmt is None else GraphFormat(fmt)
    logger.debug(f"Reading {fmt} graph from {path}")
    try:
        return parse_graph(text, fmt)
    except ValidationError as exc:
        raise MalformedInput(f"{path}: {exc.error_count()} validation errors", path=str(path))


def format_graph(graph: Graph, fmt: GraphFormat | str, header: bool = False) -> str:
    match GraphFormat(fmt):
        case GraphFormat.graph6:
            return (GRAPH6_HEADER if header else "") + encode_graph6(graph) + "\n"
        case GraphFormat.sparse6:
            return (SPARSE6_HEADER if header else "") + encode_sparse6(graph) + "\n"
        case _:
            return graph_to_document(graph).model_dump_json(exclude_none=True) + "\n"


def write_graph(graph: Graph, path: Path | str, fmt: Optional[GraphFormat | str] = None, header: bool = False) -> Path:
    path = Path(path)
    fmt = detect_format(path) if fmt is None else GraphFormat(fmt)
    path.write_text(format_graph(graph, fmt, header))
    logger.debug(f"Wrote {fmt} graph with {graph.n} vertices to {path}")
    return path


def read_geometry(path: Path | str) -> Geometry:
    path = Path(path)
    try:
        document = GeometryDocument.model_validate_json(path.read_text())
    except ValidationError as exc:
        raise MalformedInput(f"{path}: {exc.error_count()} validation errors", path=str(path))
    try:
        return geometry_from_document(document)
    except InvalidGeometry as exc:
        raise MalformedInput(f"{path}: {exc.message}", path=str(path), **exc.details)


def format_geometry(geometry: Geometry) -> str:
    return geometry_to_document(geometry).model_dump_json(exclude_none=True) + "\n"


def write_geometry(geometry: Geometry, path: Path | str) -> Path:
    path = Path(path)
    path.write_text(format_geometry(geometry))
    return path


def format_report(report: RecognitionReport, indent: int = 2) -> str:
    return report.model_dump_json(indent=indent) + "\n"


def write_report(report: RecognitionReport, path: Path | str, indent: int = 2) -> Path:
    path = Path(path)
    path.write_text(format_report(report, indent))
    return path


def read_report(path: Path | str) -> RecognitionReport:
    return RecognitionReport.model_validate_json(Path(path).read_text())
