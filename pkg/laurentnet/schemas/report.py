# laurentnet/schemas/report.py
import math
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

# degrees and weights may be infinite; JSON carries them as "-inf" / "inf"
Extended = Union[int, str]


def extended(value: Union[int, float]) -> Extended:
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return int(value)


class Metadata(BaseModel):
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    version: str
    precision_policy: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(extra="ignore")


class AdmissibilityReportOut(BaseModel):
    degree_bound: int
    m_hat: Extended
    witness: List[str]
    witness_degrees: List[Extended]
    witness_dual_point: List[str] = Field(default_factory=list)
    certified_lower_bound: Optional[int] = None
    exact: bool
    precision_limited: bool
    enumerated: int

    model_config = ConfigDict(from_attributes=True, extra="ignore")


class NetReportOut(BaseModel):
    b: int
    d: int
    m: int
    depth: int
    exact_t: int
    t_bound_predicted: Optional[int] = None
    delta: Extended
    t_from_dual: int
    strength: int
    dual_dimension: int
    duality_consistent: bool
    nrt_strategy: Optional[str] = None
    dual_witness: Optional[List[List[int]]] = None
    is_net_at_t: Optional[Dict[str, bool]] = None
    nrt_lower_bound: Optional[Extended] = None

    model_config = ConfigDict(extra="ignore")


class DiscrepancyOut(BaseModel):
    numerator: int
    denominator: int
    value: float
    n_points: int
    d: int
    method: str
    bound: Optional[float] = None
    bound_certified: bool = False
    envelope: Optional[str] = None
    envelope_exceeded: Optional[bool] = None

    model_config = ConfigDict(extra="ignore")


class DecayRowOut(BaseModel):
    r: int
    n_points: int
    estimate: float
    error: float


class IntegrationRunOut(BaseModel):
    integrand: str
    b: int
    n: int
    d: int
    exact: float
    rows: List[DecayRowOut]
    slope: Optional[float] = None

    model_config = ConfigDict(from_attributes=True)


class PipelineReport(BaseModel):
    metadata: Metadata
    config: Dict[str, Any]
    predicted: Dict[str, int]
    net: Optional[NetReportOut] = None
    admissibility: Optional[AdmissibilityReportOut] = None
    discrepancy: Optional[DiscrepancyOut] = None
    quadrature_weight: str
    cardinality_ok: bool
    integration: Optional[Dict[str, Any]] = None
    artifacts: Dict[str, str] = Field(default_factory=dict)


class ErrorPayload(BaseModel):
    error: bool = True
    code: str
    message: str
    stage: Optional[str] = None
    timestamp: str
    error_id: Optional[str] = None
    details: Dict[str, Any] = Field(default_factory=dict)
    debug: Optional[Dict[str, Any]] = None

    model_config = ConfigDict(extra="forbid")
