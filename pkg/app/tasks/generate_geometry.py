from typing import Optional

from prefect import task
from prefect.cache_policies import NO_CACHE

from app.services.generators import DEFAULT_MAX_POINTS, generate_named
from app.services.geometry import Geometry


@task(cache_policy=NO_CACHE)
def generate_geometry(
    family: str,
    q: int,
    n: Optional[int] = None,
    dim: Optional[int] = None,
    max_points: int = DEFAULT_MAX_POINTS,
) -> Geometry:
    print(f"Generating {family} with n={n}, dim={dim}, q={q}...")
    geometry = generate_named(family, q, n, dim, max_points)
    print(f"✅ Generated {geometry.n_points} points and {len(geometry.lines)} lines.")
    return geometry
