from typing import Any

from pydantic import Field

from .utils import BaseSchema


class Diagnostic(BaseSchema):
    """A structured reason attached to an error or an Unknown outcome."""

    code: str = Field(examples=["HeightTooSmall", "TableMismatch"])
    message: str = Field(examples=["rays at vertex 0 are single vertices"])
    details: dict[str, Any] = Field(default_factory=dict, examples=[{"vertex": 0}])
