from prefect import task
from prefect.cache_policies import NO_CACHE

from app.pydantic_models.axioms import AxiomReport
from app.services.geometry import Geometry
from app.services.recognize import axiom_reports


@task(cache_policy=NO_CACHE)
def check_axioms(geometry: Geometry, names: list[str]) -> list[AxiomReport]:
    print(f"Checking {', '.join(names)} on {geometry.n_points} points...")
    reports = axiom_reports(geometry, names)
    for name, report in zip(names, reports):
        status = "holds" if report.holds else f"fails, witness {report.witness}"
        print(f"{name}: {status}")
    return reports
