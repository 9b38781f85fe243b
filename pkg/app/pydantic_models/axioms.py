from typing import Any, Optional

from pydantic import Field

from .utils import BaseSchema


class AxiomReport(BaseSchema):
    """Outcome of one axiom check on a geometry."""

    axiom: str = Field(examples=["gamma", "shult", "parapolar"])
    holds: bool = Field(examples=[True, False])
    witness: Optional[dict[str, list[int]]] = Field(
        default=None, examples=[{"point": [4], "line": [12]}]
    )
    rank: Optional[int] = Field(default=None, examples=[3, None])
    dimension: Optional[int] = Field(default=None, examples=[2, None])
    strong: Optional[bool] = Field(default=None)
    uniform: Optional[bool] = Field(default=None)
    details: dict[str, Any] = Field(default_factory=dict)
