from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, field_validator, model_validator
from typing_extensions import Self

from .utils import BaseSchema, GraphFormat

Command = Literal[
    "gen",
    "localgraph",
    "cliqueext",
    "quotient",
    "reconstruct",
    "recognize",
    "verify",
    "iso",
    "params",
    "batch",
]

GEN_FAMILIES = ("w", "q", "qplus", "qminus", "grassmann", "halfspin", "segre", "pg")

# number of positional inputs each command takes
INPUT_COUNTS: dict[str, int] = {
    "gen": 0,
    "localgraph": 1,
    "cliqueext": 1,
    "quotient": 1,
    "reconstruct": 1,
    "recognize": 1,
    "verify": 1,
    "iso": 2,
    "params": 1,
    "batch": 1,
}

AXIOM_NAMES = ("partial_linear", "gamma", "shult", "nondegenerate", "polar", "parapolar")


class CommandConfig(BaseSchema):
    """One validated command line."""

    command: Command
    inputs: list[Path] = Field(default_factory=list)
    out: Optional[Path] = None
    graph: Optional[Path] = None
    geometry: Optional[Path] = None
    report: Optional[Path] = None
    summary: Optional[Path] = None
    family: Optional[str] = Field(default=None, examples=["w", "grassmann"])
    n: Optional[int] = Field(default=None, ge=1)
    dim: Optional[int] = Field(default=None, ge=1)
    q: Optional[int] = Field(default=None, ge=2)
    vertex: Optional[int] = Field(default=None, ge=0)
    axioms: list[str] = Field(default_factory=list, examples=[["gamma", "parapolar:3"]])
    # input format; out_format picks the written graph format
    format: Optional[GraphFormat] = None
    out_format: Optional[GraphFormat] = None
    threads: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    header: bool = False

    @field_validator("axioms")
    @classmethod
    def check_axioms(cls, v: list[str]) -> list[str]:
        for name in v:
            key, _, argument = name.partition(":")
            if key not in AXIOM_NAMES:
                raise ValueError(f"unknown axiom {name!r}")
            if argument and (key != "parapolar" or not argument.isdigit()):
                raise ValueError(f"axiom {name!r} takes no argument of that form")
        return v

    @model_validator(mode="after")
    def check_command_flags(self) -> Self:
        expected = INPUT_COUNTS[self.command]
        if len(self.inputs) != expected:
            raise ValueError(f"{self.command} takes {expected} input(s), got {len(self.inputs)}")
        match self.command:
            case "gen":
                if self.family not in GEN_FAMILIES:
                    raise ValueError(f"--family must be one of {', '.join(GEN_FAMILIES)}")
                if self.q is None:
                    raise ValueError("gen needs --q")
                if (self.n is None) == (self.dim is None):
                    raise ValueError("gen needs exactly one of --n and --dim")
                if self.dim is not None and self.family not in ("w", "q", "qplus", "qminus", "pg"):
                    raise ValueError("--dim only applies to polar families and pg")
            case "localgraph":
                if self.vertex is None:
                    raise ValueError("localgraph needs --vertex")
            case "cliqueext":
                if self.q is None:
                    raise ValueError("cliqueext needs --q")
            case "verify":
                if not self.axioms:
                    raise ValueError("verify needs --axioms")
            case "batch":
                if self.summary is None:
                    raise ValueError("batch needs --summary")
        return self
