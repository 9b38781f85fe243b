import json

import networkx as nx
import pytest

from app.integrations.documents import (
    detect_format,
    format_graph,
    read_geometry,
    read_graph,
    read_report,
    write_geometry,
    write_graph,
    write_report,
)
from app.integrations.graph6 import (
    decode_graph,
    decode_graph6,
    decode_sparse6,
    encode_graph6,
    encode_sparse6,
)
from app.pydantic_models.report import RecognitionReport
from app.pydantic_models.utils import GraphFormat
from app.services.errors import MalformedInput
from app.services.graphs import Graph
from tests.conftest import from_networkx, to_networkx

SAMPLES = [
    nx.petersen_graph(),
    nx.complete_graph(4),
    nx.path_graph(7),
    nx.empty_graph(3),
    nx.circulant_graph(70, [1, 5]),
    nx.complete_bipartite_graph(3, 5),
]


def test_complete_graph_golden():
    assert encode_graph6(Graph.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])) == "C~"


@pytest.mark.parametrize("g", SAMPLES)
def test_graph6_matches_networkx(g):
    graph = from_networkx(g)
    expected = nx.to_graph6_bytes(g, header=False).decode().strip()
    assert encode_graph6(graph) == expected
    assert decode_graph6(expected) == graph


@pytest.mark.parametrize("g", SAMPLES)
def test_sparse6_is_read_by_networkx(g):
    graph = from_networkx(g)
    theirs = nx.from_sparse6_bytes(encode_sparse6(graph).encode())
    assert nx.utils.graphs_equal(theirs, to_networkx(graph))
    text = nx.to_sparse6_bytes(g, header=False).decode()
    assert decode_sparse6(text) == graph


def test_headers_are_accepted(petersen):
    assert decode_graph(">>graph6<<" + encode_graph6(petersen) + "\n") == petersen
    assert decode_graph(">>sparse6<<" + encode_sparse6(petersen)) == petersen


def test_truncated_graph6_is_malformed(petersen):
    with pytest.raises(MalformedInput):
        decode_graph6(encode_graph6(petersen)[:-2])
    with pytest.raises(MalformedInput):
        decode_graph6("I!!")


def test_detect_format(tmp_path):
    assert detect_format(tmp_path / "a.s6") == GraphFormat.sparse6
    assert detect_format(tmp_path / "a.txt", '{"n": 1}') == GraphFormat.json
    assert detect_format(tmp_path / "a.txt", ":Fa@x^") == GraphFormat.sparse6
    assert detect_format(tmp_path / "a.txt", "C~") == GraphFormat.graph6
    with pytest.raises(MalformedInput):
        detect_format(tmp_path / "a.txt")


@pytest.mark.parametrize("suffix", [".g6", ".s6", ".json"])
def test_graph_files(tmp_path, petersen, suffix):
    path = write_graph(petersen, tmp_path / f"petersen{suffix}")
    assert read_graph(path) == petersen


def test_json_graph_keeps_labels(tmp_path):
    graph = Graph.from_edges(3, [(0, 1)], ["a", "b", "c"])
    path = write_graph(graph, tmp_path / "g.json")
    assert json.loads(path.read_text()) == {"n": 3, "edges": [[0, 1]], "labels": ["a", "b", "c"]}
    assert read_graph(path).labels == ("a", "b", "c")


def test_bad_json_graph_is_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 2, "edges": [[0, 2]]}')
    with pytest.raises(MalformedInput):
        read_graph(path)
    path.write_text("{not json")
    with pytest.raises(MalformedInput):
        read_graph(path)


def test_graph6_output_is_stable(petersen):
    assert format_graph(petersen, "graph6") == format_graph(petersen, GraphFormat.graph6)
    assert format_graph(petersen, "graph6", header=True).startswith(">>graph6<<")


def test_geometry_files(tmp_path, w32):
    path = write_geometry(w32, tmp_path / "w32.json")
    again = read_geometry(path)
    assert again == w32
    assert again.point_labels == w32.point_labels


def test_bad_geometry_is_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n_points": 3, "lines": [[0, 2, 1]]}')
    with pytest.raises(MalformedInput):
        read_geometry(path)
    path.write_text('{"n_points": 3, "lines": [[0, 1, 2], [0, 1]]}')
    with pytest.raises(MalformedInput):
        read_geometry(path)


def test_report_files(tmp_path):
    report = RecognitionReport(source="x.g6", vertices=4, edges=6, seed=3)
    path = write_report(report, tmp_path / "report.json")
    assert read_report(path) == report
    assert json.loads(path.read_text())["outcome_name"] == "Unknown"
