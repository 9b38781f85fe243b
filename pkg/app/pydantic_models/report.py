from typing import Optional

from pydantic import Field, model_validator
from typing_extensions import Self

from .axioms import AxiomReport
from .diagnostic import Diagnostic
from .family import FamilyLabel
from .utils import BaseSchema, IdentificationLevel, PerpKind


class SrgParameters(BaseSchema):
    """Strongly regular parameters, or the reason the graph is not one."""

    strongly_regular: bool
    v: int = Field(examples=[63])
    k: Optional[int] = Field(default=None, examples=[30])
    lam: Optional[int] = Field(default=None, examples=[13])
    mu: Optional[int] = Field(default=None, examples=[15])
    reason: Optional[str] = Field(default=None, examples=["not regular"])


class PerpCensusRow(BaseSchema):
    kind: PerpKind
    points: int
    rank: Optional[int] = None
    pairs: int


class LocalEvidence(BaseSchema):
    """What the point residue at one vertex looks like."""

    vertex: int
    label: Optional[FamilyLabel] = None
    display: str = "Unknown"
    q: Optional[int] = None
    points: int
    degree: Optional[int] = None
    diameter: Optional[int] = None
    singular_dims: list[int] = Field(default_factory=list)
    confirmed: Optional[bool] = None
    diagnostics: list[Diagnostic] = Field(default_factory=list)


class Evidence(BaseSchema):
    height: Optional[int] = None
    points: Optional[int] = None
    lines: Optional[int] = None
    diameter: Optional[int] = None
    singular_dims: list[int] = Field(default_factory=list)
    sampling: str = Field(default="exhaustive", examples=["exhaustive", "sampled"])
    local: list[LocalEvidence] = Field(default_factory=list)
    perp_census: list[PerpCensusRow] = Field(default_factory=list)
    perp_pairs_classified: int = 0
    perp_pairs_size_checked: int = 0
    axioms: list[AxiomReport] = Field(default_factory=list)
    srg: Optional[SrgParameters] = None


class RecognitionReport(BaseSchema):
    """Result of running the recognition pipeline on one graph."""

    source: Optional[str] = Field(default=None, examples=["w52.g6"])
    vertices: int
    edges: int
    q: Optional[int] = None
    outcome: Optional[FamilyLabel] = None
    outcome_name: str = Field(default="Unknown", examples=["W(5,2)", "Unknown"])
    identification_level: IdentificationLevel = IdentificationLevel.unknown
    evidence: Evidence = Field(default_factory=Evidence)
    diagnostics: list[Diagnostic] = Field(default_factory=list)
    seed: int = 0

    @model_validator(mode="after")
    def check_outcome(self) -> Self:
        if self.outcome is None:
            if self.identification_level != IdentificationLevel.unknown:
                raise ValueError("an Unknown outcome has no identification level")
        elif self.identification_level == IdentificationLevel.unknown:
            raise ValueError("a recognized outcome needs an identification level")
        return self

    @property
    def recognized(self) -> bool:
        return self.outcome is not None
