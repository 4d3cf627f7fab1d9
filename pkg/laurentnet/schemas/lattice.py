# laurentnet/schemas/lattice.py
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class MatrixModel(BaseModel):
    b: int
    rows: int
    cols: int
    precision: Optional[int] = None  # None when every entry is exact
    entries: List[List[str]]  # canonical text form "b; w; c_w c_w+1 ... [...]"

    model_config = ConfigDict(extra="ignore")

    @field_validator("entries")
    @classmethod
    def check_rectangular(cls, v: List[List[str]]) -> List[List[str]]:
        if v and len({len(row) for row in v}) != 1:
            raise ValueError("matrix rows have different lengths")
        return v


class LatticeModel(BaseModel):
    b: int
    d: int
    label: str = "custom"
    precision: Optional[int] = None
    generator: MatrixModel
    dual: Optional[MatrixModel] = None
    provenance: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(extra="ignore")


class RootSetModel(BaseModel):
    b: int
    n: int
    d: int
    precision: int
    tail: str
    labels: List[List[int]]  # (a_{n-1}, ..., a_0) per root
    roots: List[str]
    residual_precision: List[Optional[int]]
    residual_zero: List[bool]

    model_config = ConfigDict(extra="ignore")


class ConstructionAudit(BaseModel):
    work_precision: int
    generator_precision: Optional[int] = None
    tail_degree: Optional[int] = None
    residual_precision: List[Optional[int]] = Field(default_factory=list)
    deg_det_b: int
    deg_det_b_closed_form: int

    model_config = ConfigDict(extra="ignore")
