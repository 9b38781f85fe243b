from pathlib import Path
from typing import Optional

from prefect import task
from prefect.cache_policies import NO_CACHE

from app.integrations.documents import read_geometry, read_graph
from app.services.geometry import Geometry
from app.services.graphs import Graph


@task(cache_policy=NO_CACHE)
def load_graph(path: Path, fmt: Optional[str] = None) -> Graph:
    print(f"Reading graph from: {path}...")
    graph = read_graph(path, fmt)
    print(f"✅ Loaded {graph.n} vertices and {graph.edge_count} edges.")
    return graph


@task(cache_policy=NO_CACHE)
def load_geometry(path: Path) -> Geometry:
    print(f"Reading geometry from: {path}...")
    geometry = read_geometry(path)
    print(f"✅ Loaded {geometry.n_points} points and {len(geometry.lines)} lines.")
    return geometry
