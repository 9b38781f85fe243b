from prefect import task
from prefect.cache_policies import NO_CACHE

from app.services.geometry import Geometry
from app.services.graphs import Graph
from app.services.reconstruct import build_geometry, height


@task(cache_policy=NO_CACHE)
def reconstruct_geometry(graph: Graph) -> Geometry:
    """Height first so a failing vertex is named before any line is built."""
    print(f"Reconstructing a geometry from {graph.n} vertices...")
    q = height(graph)
    print(f"Height {q}: lines will have {q + 1} points")
    geometry = build_geometry(graph, q)
    print(f"✅ Recovered {len(geometry.lines)} lines.")
    return geometry
