from .axioms import AxiomReport
from .command import CommandConfig
from .diagnostic import Diagnostic
from .documents import GeometryDocument, GraphDocument
from .family import Family, FamilyLabel
from .report import Evidence, LocalEvidence, PerpCensusRow, RecognitionReport, SrgParameters
from .utils import FormKind, GraphFormat, IdentificationLevel, PerpKind

__all__ = [
    "AxiomReport",
    "CommandConfig",
    "Diagnostic",
    "GeometryDocument",
    "GraphDocument",
    "Family",
    "FamilyLabel",
    "Evidence",
    "LocalEvidence",
    "PerpCensusRow",
    "RecognitionReport",
    "SrgParameters",
    "FormKind",
    "GraphFormat",
    "IdentificationLevel",
    "PerpKind",
]
