from typing import Optional

from pydantic import Field, field_validator, model_validator
from typing_extensions import Self

from .utils import BaseSchema


class GeometryDocument(BaseSchema):
    """On-disk form of a point-line geometry. Lines are sorted point lists."""

    n_points: int = Field(ge=0, examples=[7])
    lines: list[list[int]] = Field(examples=[[[0, 1, 2], [0, 3, 4]]])
    labels: Optional[list[str]] = Field(default=None, examples=[None])

    @field_validator("lines")
    @classmethod
    def check_lines(cls, v: list[list[int]]) -> list[list[int]]:
        for line in v:
            if len(line) < 2:
                raise ValueError(f"line {line} has fewer than 2 points")
            if any(a >= b for a, b in zip(line, line[1:])):
                raise ValueError(f"line {line} is not strictly increasing")
        return v

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        for line in self.lines:
            if line[0] < 0 or line[-1] >= self.n_points:
                raise ValueError(f"line {line} leaves the point range")
        if self.labels is not None and len(self.labels) != self.n_points:
            raise ValueError("labels must name every point")
        return self


class GraphDocument(BaseSchema):
    """JSON form of a simple graph."""

    n: int = Field(ge=0, examples=[5])
    edges: list[tuple[int, int]] = Field(examples=[[(0, 1), (1, 2)]])
    labels: Optional[list[str]] = Field(default=None)

    @model_validator(mode="after")
    def check_edges(self) -> Self:
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) leaves the vertex range")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must name every vertex")
        return self
