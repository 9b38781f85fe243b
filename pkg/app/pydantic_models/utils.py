from enum import EnumMeta, StrEnum

from pydantic import BaseModel


class BaseSchema(BaseModel):
    model_config = {
        "use_enum_values": True,
        "from_attributes": True,
        # "extra": "forbid",
    }


class MetaEnum(EnumMeta):
    def __contains__(cls, item):
        try:
            cls(item)
        except ValueError:
            return False
        return True


class FormKind(StrEnum, metaclass=MetaEnum):
    alternating = "alternating"
    parabolic = "quadratic_parabolic"
    hyperbolic = "quadratic_hyperbolic"
    elliptic = "quadratic_elliptic"


class GraphFormat(StrEnum, metaclass=MetaEnum):
    graph6 = "graph6"
    sparse6 = "sparse6"
    json = "json"


class IdentificationLevel(StrEnum, metaclass=MetaEnum):
    line_set_verified = "line-set-verified"
    parameter_level = "parameter-level"
    unknown = "unknown"


class PerpKind(StrEnum, metaclass=MetaEnum):
    empty = "empty"  # distance >= 3
    point = "point"  # distance 2, symplecton-free
    grid = "grid"
    polar = "polar"
    other = "other"
