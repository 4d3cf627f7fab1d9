# laurentnet/storage/artifacts.py
"""
Reading and writing JSON artifacts. Every domain object is converted to its pydantic model
first; JSON is written with sorted keys so runs are byte-comparable apart from metadata.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ValidationError

from laurentnet import __version__
from laurentnet.core import config
from laurentnet.core.construction import Construction, deg_det_b_closed_form, measured_det_degree
from laurentnet.core.errors import ParseError
from laurentnet.core.lattice import AdmissibilityReport, LatticeSpec
from laurentnet.core.netanalysis import NetReport
from laurentnet.core.quality import DiscrepancyResult, IntegrationRun
from laurentnet.schemas.lattice import ConstructionAudit, LatticeModel, RootSetModel
from laurentnet.schemas.report import (
    AdmissibilityReportOut,
    DecayRowOut,
    DiscrepancyOut,
    IntegrationRunOut,
    Metadata,
    NetReportOut,
    extended,
)

logger = logging.getLogger(__name__)


def setup_output_dir(path: Optional[str] = None) -> Path:
    """Create the output directory if needed"""
    directory = Path(path or config.OUTPUT_DIR)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def metadata() -> Metadata:
    return Metadata(version=__version__, precision_policy=config.precision_policy())


def dumps(data: Union[BaseModel, Dict[str, Any]]) -> str:
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_json(path: Union[str, Path], data: Union[BaseModel, Dict[str, Any]]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps(data), encoding="utf-8")
    logger.debug(f"wrote {target}")
    return target


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e}")


# -- lattices -----------------------------------------------------------------


def lattice_model(spec: LatticeSpec) -> LatticeModel:
    return LatticeModel(**spec.to_json_dict())


def read_lattice(path: Union[str, Path]) -> LatticeSpec:
    data = read_json(path)
    if "lattice" in data and "generator" not in data:
        data = data["lattice"]
    try:
        model = LatticeModel(**data)
    except ValidationError as e:
        raise ParseError(f"{path} is not a lattice artifact: {e.error_count()} problems")
    return LatticeSpec.from_json_dict(model.model_dump())


def rootset_model(construction: Construction) -> RootSetModel:
    roots = construction.roots
    residuals = roots.residuals(construction.pd)
    return RootSetModel(
        b=roots.b,
        n=roots.n,
        d=roots.d,
        precision=roots.prec,
        tail=roots.tail.to_text(),
        labels=[list(label) for label in roots.labels],
        roots=[root.to_text() for root in roots.roots],
        residual_precision=[r.prec for r in residuals],
        residual_zero=[r.is_zero for r in residuals],
    )


def construction_audit(construction: Construction) -> ConstructionAudit:
    audit = construction.audit
    tail_degree = audit.get("tail_degree")
    return ConstructionAudit(
        work_precision=audit["work_precision"],
        generator_precision=audit.get("generator_precision"),
        tail_degree=None if tail_degree is None or tail_degree == float("-inf") else int(tail_degree),
        residual_precision=list(audit.get("residual_precision", [])),
        deg_det_b=measured_det_degree(construction),
        deg_det_b_closed_form=deg_det_b_closed_form(construction.b, construction.n),
    )


def construction_document(construction: Construction) -> Dict[str, Any]:
    """lattice + roots + audit, as written by ``construct``"""
    return {
        "metadata": metadata().model_dump(mode="json"),
        "lattice": lattice_model(construction.lattice).model_dump(mode="json"),
        "roots": rootset_model(construction).model_dump(mode="json"),
        "audit": construction_audit(construction).model_dump(mode="json"),
    }


# -- reports --------------------------------------------------------------------


def admissibility_model(report: AdmissibilityReport) -> AdmissibilityReportOut:
    return AdmissibilityReportOut(
        degree_bound=report.degree_bound,
        m_hat=extended(report.m_hat),
        witness=[str(h) for h in report.witness],
        witness_degrees=[extended(v) for v in report.witness_degrees],
        witness_dual_point=[p.to_text() for p in report.witness_dual_point],
        certified_lower_bound=report.certified_lower_bound,
        exact=report.exact,
        precision_limited=report.precision_limited,
        enumerated=report.enumerated,
    )


def net_report_model(report: NetReport, **extra: Any) -> NetReportOut:
    return NetReportOut(
        b=report.b,
        d=report.d,
        m=report.m,
        depth=report.depth,
        exact_t=report.exact_t,
        t_bound_predicted=report.t_bound_predicted,
        delta=extended(report.delta),
        t_from_dual=report.t_from_dual,
        strength=report.strength,
        dual_dimension=report.dual_dimension,
        duality_consistent=report.duality_consistent,
        nrt_strategy=report.extra.get("nrt_strategy"),
        dual_witness=report.dual_witness,
        **extra,
    )


def discrepancy_model(result: DiscrepancyResult) -> DiscrepancyOut:
    return DiscrepancyOut(
        numerator=result.numerator,
        denominator=result.denominator,
        value=float(result.value),
        n_points=result.n_points,
        d=result.d,
        method=result.method,
        bound=result.bound,
        envelope=None if result.envelope is None else str(result.envelope),
        envelope_exceeded=result.envelope_exceeded,
    )


def integration_model(run: IntegrationRun) -> IntegrationRunOut:
    return IntegrationRunOut(
        integrand=run.integrand,
        b=run.b,
        n=run.n,
        d=run.d,
        exact=run.exact,
        rows=[DecayRowOut(r=row.r, n_points=row.n_points, estimate=row.estimate, error=row.error) for row in run.rows],
        slope=run.slope,
    )
