"""
Pydantic models for instance files.

One object per file; non-algebra kinds reference their algebra (and
representations) by path relative to the file.
"""

from enum import Enum
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..utils.common import parse_rational


class InstanceKind(str, Enum):
    """Instance kind enumeration."""
    ALGEBRA = "algebra"
    REPRESENTATION = "representation"
    POISSON = "poisson"
    INTERTWINER = "intertwiner"


class BasisEntry(BaseModel):
    label: str = Field(description="Basis label")
    degree: int = Field(description="Cohomological degree")


class OutputTerm(BaseModel):
    label: Union[str, List[str]] = Field(description="Output basis label, or a label list for tensor outputs")
    coeff: Union[int, str] = Field(description="Integer or reduced 'p/q' coefficient")

    @field_validator("coeff")
    @classmethod
    def _rational(cls, v):
        parse_rational(v)
        return v

    @property
    def key(self) -> tuple:
        return tuple(self.label) if isinstance(self.label, list) else (self.label,)


class MapEntry(BaseModel):
    """Value of a structure map on one input word; module labels come last."""

    inputs: List[str] = Field(default_factory=list, description="Input labels")
    output: List[OutputTerm] = Field(default_factory=list, description="Sparse output")


class InstanceFile(BaseModel):
    kind: InstanceKind = Field(description="Object kind")
    name: str = Field(description="Object name")
    basis: List[BasisEntry] = Field(default_factory=list, description="Basis of the algebra or module space")
    arity_cap: Optional[int] = Field(default=None, description="Arity cap stored with the object", ge=1)

    brackets: Dict[int, List[MapEntry]] = Field(default_factory=dict, description="Algebra brackets by arity")
    actions: Dict[int, List[MapEntry]] = Field(default_factory=dict, description="Representation action by arity")

    algebra: Optional[str] = Field(default=None, description="Path of the algebra file")
    shift: Optional[int] = Field(default=None, description="Poisson shift n")
    weight_cap: Optional[int] = Field(default=None, description="Poisson weight cap", ge=2)
    components: Dict[str, List[MapEntry]] = Field(default_factory=dict,
                                                  description="Poisson 'w,i' cells or intertwiner arities")

    source: Optional[str] = Field(default=None, description="Path of the source representation")
    target: Optional[str] = Field(default=None, description="Path of the target representation")
    degree: Optional[int] = Field(default=None, description="Intertwiner degree")

    @model_validator(mode="after")
    def _required_fields(self) -> "InstanceFile":
        if self.kind != InstanceKind.ALGEBRA and not self.algebra:
            raise ValueError(f"kind '{self.kind.value}' needs an 'algebra' reference")
        if self.kind == InstanceKind.POISSON and self.shift is None:
            raise ValueError("kind 'poisson' needs a 'shift'")
        if self.kind == InstanceKind.INTERTWINER:
            missing = [f for f in ("source", "target", "degree") if getattr(self, f) is None]
            if missing:
                raise ValueError(f"kind 'intertwiner' needs {', '.join(missing)}")
        return self
