from enum import StrEnum
from typing import Literal

from pydantic import Field, field_validator, model_validator
from typing_extensions import Self

from .utils import BaseSchema, MetaEnum

FIELD_ORDERS = (2, 3, 4, 5, 7, 8, 9)


class Family(StrEnum, metaclass=MetaEnum):
    polar_w = "PolarW"
    polar_q = "PolarQ"
    polar_qplus = "PolarQplus"
    polar_qminus = "PolarQminus"
    grassmann = "A_n2"
    half_spin = "D_nn"
    e6 = "E6_1"
    e7 = "E7_7"
    # only ever seen as a local (point-residue) family
    segre = "A11_An1"


POLAR_FAMILIES = (
    Family.polar_w,
    Family.polar_q,
    Family.polar_qplus,
    Family.polar_qminus,
)

# inclusive (low, high) ranges of n; None means unbounded
GLOBAL_RANGES: dict[str, tuple[int, int | None]] = {
    Family.polar_w: (3, None),
    Family.polar_q: (3, None),
    Family.polar_qplus: (3, None),
    Family.polar_qminus: (3, None),
    Family.grassmann: (4, None),
    Family.half_spin: (4, 9),
    Family.e6: (6, 6),
    Family.e7: (7, 7),
}

LOCAL_RANGES: dict[str, tuple[int, int | None]] = {
    Family.polar_w: (2, None),
    Family.polar_q: (2, None),
    Family.polar_qplus: (2, None),
    Family.polar_qminus: (2, None),
    Family.grassmann: (3, None),
    Family.half_spin: (4, 9),
    Family.e6: (6, 6),
    Family.segre: (1, None),
}


class FamilyLabel(BaseSchema):
    """
    Names one Lie incidence geometry.
    For polar families n is the rank; otherwise n is the Dynkin index.
    """

    family: Family = Field(examples=["PolarW", "A_n2"])
    n: int = Field(examples=[3, 4])
    q: int = Field(examples=[2, 3])
    role: Literal["global", "local"] = Field(default="global", examples=["global"])

    @field_validator("q")
    @classmethod
    def check_field_order(cls, v: int) -> int:
        if v not in FIELD_ORDERS:
            raise ValueError(f"q must be a prime power <= 9, got {v}")
        return v

    @model_validator(mode="after")
    def check_parameter_range(self) -> Self:
        ranges = GLOBAL_RANGES if self.role == "global" else LOCAL_RANGES
        if self.family not in ranges:
            raise ValueError(f"{self.family} is not a valid {self.role} family")
        low, high = ranges[self.family]
        if self.n < low or (high is not None and self.n > high):
            raise ValueError(
                f"n={self.n} outside the {self.role} range of {self.family}"
            )
        return self

    @property
    def is_polar(self) -> bool:
        return self.family in POLAR_FAMILIES

    @property
    def display(self) -> str:
        n, q = self.n, self.q
        match self.family:
            case Family.polar_w:
                return f"W({2 * n - 1},{q})"
            case Family.polar_q:
                return f"Q({2 * n},{q})"
            case Family.polar_qplus:
                return f"Q+({2 * n - 1},{q})"
            case Family.polar_qminus:
                return f"Q-({2 * n + 1},{q})"
            case Family.grassmann:
                return f"A_{n},2({q})"
            case Family.half_spin:
                return f"D_{n},{n}({q})"
            case Family.e6:
                return f"E_6,1({q})"
            case Family.e7:
                return f"E_7,7({q})"
            case _:
                return f"A_1,1xA_{n},1({q})"
