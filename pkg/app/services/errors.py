"""
Error hierarchy. Every failure carries a stable code (the class name) and
structured details so it can be turned into a Diagnostic for reports.
"""

from typing import Any

from app.pydantic_models.diagnostic import Diagnostic


class LieProbeError(Exception):
    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def code(self) -> str:
        return type(self).__name__

    def with_details(self, **details: Any) -> "LieProbeError":
        self.details = {**self.details, **details}
        return self

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(code=self.code, message=self.message, details=self.details)


# Input and size guards
class MalformedInput(LieProbeError):
    pass


class SizeLimitExceeded(LieProbeError):
    pass


class InstanceTooLarge(LieProbeError):
    pass


# Algebra
class DimensionMismatch(LieProbeError):
    pass


class NonPrimeCharacteristic(LieProbeError):
    pass


class OrderTooLarge(LieProbeError):
    pass


class FieldAxiomViolation(LieProbeError):
    pass


class DegenerateForm(LieProbeError):
    pass


class RankTooSmall(LieProbeError):
    pass


# Graphs
class VertexOutOfRange(LieProbeError):
    pass


class DisconnectedGraph(LieProbeError):
    pass


class NotAdjacent(LieProbeError):
    pass


class RayError(LieProbeError):
    """Local graph does not split into rays."""


class RaysNotPartition(RayError):
    pass


class RaysUnequalSize(RayError):
    pass


class HeightTooSmall(RayError):
    pass


class RayNotClique(RayError):
    pass


class SingleRay(RayError):
    pass


class HeightMismatch(LieProbeError):
    pass


class WrongRaySize(LieProbeError):
    pass


class CollapsedSpan(LieProbeError):
    pass


class DegenerateTriangle(LieProbeError):
    pass


class InconsistentCrossEdges(LieProbeError):
    pass


class PointGraphMismatch(LieProbeError):
    pass


# Geometry
class InvalidGeometry(LieProbeError):
    pass


class NotAClique(LieProbeError):
    pass


class CollinearPair(LieProbeError):
    pass


class ShultViolated(LieProbeError):
    pass


class DegenerateGeometry(LieProbeError):
    pass


class MixedSingularDimensions(LieProbeError):
    pass


# Recognition
class AmbiguousMatch(LieProbeError):
    pass


class TableSignatureClash(LieProbeError):
    pass


class TableMismatch(LieProbeError):
    pass


class NonUniformLocal(LieProbeError):
    pass
