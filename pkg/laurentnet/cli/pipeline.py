# laurentnet/cli/pipeline.py
"""
construct -> points -> verify -> discrepancy, writing every intermediate artifact.
"""
import contextlib
import logging
from fractions import Fraction
from typing import Dict, Iterator

from laurentnet.core import config
from laurentnet.core.construction import build_construction, explicit_net, predicted_quality, t_from_admissibility
from laurentnet.core.errors import InconsistentReport
from laurentnet.core.integrands import get_integrand
from laurentnet.core.lattice import m_scan
from laurentnet.core.logging_config import log_stage
from laurentnet.core.netanalysis import duality_check, nrt_lower_bound
from laurentnet.core.pointgen import emit, plan_shrink, point_set
from laurentnet.core.quality import (
    MAX_EXACT_DIMENSION,
    qmc_integrate,
    quadrature_weight,
    star_discrepancy_exact,
)
from laurentnet.schemas.config import PipelineConfig
from laurentnet.schemas.report import PipelineReport, extended
from laurentnet.storage.artifacts import (
    admissibility_model,
    construction_audit,
    discrepancy_model,
    lattice_model,
    metadata,
    net_report_model,
    read_lattice,
    rootset_model,
    setup_output_dir,
    write_json,
)

logger = logging.getLogger(__name__)


@contextlib.contextmanager
def _stage(name: str, **fields) -> Iterator[Dict]:
    """log_stage that tags escaping exceptions with the stage name"""
    try:
        with log_stage(logger, name, **fields) as audit:
            yield audit
    except Exception as exc:
        if getattr(exc, "stage", None) is None:
            exc.stage = name
        raise


def run_pipeline(cfg: PipelineConfig) -> PipelineReport:
    out_dir = setup_output_dir(cfg.output_dir)
    artifacts: Dict[str, str] = {}
    predicted: Dict[str, int] = {}
    construction = None
    certified_m = None

    with _stage("construct", b=cfg.b, n=cfg.n, lattice_file=cfg.lattice_file) as audit:
        if cfg.n is not None:
            d = cfg.b**cfg.n
            factor = cfg.shrink_factor(d)
            quality = predicted_quality(cfg.b, cfg.n, factor)
            predicted = {"m": quality.m, "t_bound": quality.t_bound, "deg_det_b": quality.deg_det_b}
            depth = cfg.depth if cfg.depth is not None else config.default_depth(quality.m)
            prec = cfg.precision or config.working_precision(quality.m, d, depth)
            construction = build_construction(cfg.b, cfg.n, prec)
            lattice = construction.lattice
            # every p_d-root lattice is admissible with M(X) >= 1 - d
            certified_m = 1 - d
            audit.update(construction_audit(construction).model_dump())
        else:
            lattice = read_lattice(cfg.lattice_file)
            factor = cfg.shrink_factor(lattice.d)
            depth = cfg.depth
            prec = lattice.precision
        audit["precision"] = prec

    with _stage("points", shrink=str(factor), depth=depth, method=cfg.method) as audit:
        if construction is not None:
            construction, points = explicit_net(cfg.b, cfg.n, factor, depth, prec, cfg.method)
            lattice = construction.lattice
            plan = plan_shrink(lattice, factor)
        else:
            plan = plan_shrink(lattice, factor)
            points = point_set(lattice, factor, depth, cfg.method, plan=plan)
            predicted = {"m": plan.m}
        deg_det_t = int(sum(plan.factors.diagonal_degrees()))
        if certified_m is not None:
            predicted["t_admissibility"] = t_from_admissibility(deg_det_t, certified_m, lattice.d)
        weight = quadrature_weight(deg_det_t, factor.degrees, cfg.b)
        cardinality_ok = points.size == cfg.b ** predicted["m"] and weight == Fraction(1, points.size)
        if cfg.project_to:
            points = points.project(cfg.project_to)
        if construction is not None:
            artifacts["roots"] = str(write_json(out_dir / "roots.json", rootset_model(construction)))
        artifacts["lattice"] = str(write_json(out_dir / "lattice.json", lattice_model(lattice)))
        artifacts["points"] = str(out_dir / "points.csv")
        emit(points, "digits", path=artifacts["points"])
        audit.update(
            {"m": points.m, "points": points.size, "depth": points.depth, "min_precision_reached": lattice.precision}
        )
    if not cardinality_ok:
        raise InconsistentReport(
            f"{points.size} points, expected b^{predicted['m']}",
            {"points": points.size, "m": predicted["m"], "weight": str(weight)},
        )

    admissibility = None
    if cfg.scan_degree is not None:
        with _stage("scan", degree_bound=cfg.scan_degree) as audit:
            report = m_scan(lattice, cfg.scan_degree, certificate=certified_m)
            admissibility = admissibility_model(report)
            audit["m_hat"] = str(report.m_hat)

    net = None
    if cfg.verify:
        with _stage("verify", m=points.m, d=points.d) as audit:
            result = duality_check(points, t_bound=predicted.get("t_bound"))
            extra = {}
            if certified_m is not None and not cfg.project_to:
                lower = nrt_lower_bound(factor.degrees, certified_m, lattice.d)
                extra["nrt_lower_bound"] = extended(lower)
                if result.delta < lower or result.exact_t > predicted["t_admissibility"]:
                    raise InconsistentReport(
                        f"delta={result.delta} and t={result.exact_t} break the admissibility bounds"
                        f" delta >= {lower}, t <= {predicted['t_admissibility']}",
                        {"delta": result.delta, "nrt_lower_bound": lower, "exact_t": result.exact_t},
                    )
            net = net_report_model(result, **extra)
            audit.update({"t": result.exact_t, "delta": str(result.delta)})

    discrepancy = None
    if cfg.discrepancy:
        if points.d <= MAX_EXACT_DIMENSION and points.size <= config.DISCREPANCY_MAX_POINTS:
            with _stage("discrepancy", points=points.size) as audit:
                value = star_discrepancy_exact(points, t=net.exact_t if net else None)
                discrepancy = discrepancy_model(value)
                artifacts["discrepancy"] = str(write_json(out_dir / "discrepancy.json", discrepancy))
                audit["value"] = str(value.value)
        else:
            logger.info(
                "exact discrepancy skipped",
                extra={"fields": {"d": points.d, "points": points.size}},
            )

    integration = None
    if cfg.integrand:
        integrand = get_integrand(cfg.integrand)
        estimate = qmc_integrate(points, integrand)
        exact = integrand.integral(points.d)
        integration = {
            "integrand": integrand.name,
            "estimate": estimate,
            "exact": exact,
            "abs_error": abs(estimate - exact),
        }

    artifacts["report"] = str(out_dir / "report.json")
    report_doc = PipelineReport(
        metadata=metadata(),
        config=cfg.model_dump(mode="json"),
        predicted=predicted,
        net=net,
        admissibility=admissibility,
        discrepancy=discrepancy,
        quadrature_weight=str(weight),
        cardinality_ok=cardinality_ok,
        integration=integration,
        artifacts=artifacts,
    )
    write_json(artifacts["report"], report_doc)

    if net is not None and not net.duality_consistent:
        exc = InconsistentReport(
            f"interval counting gives t={net.exact_t}, dual net gives t={net.t_from_dual}",
            {"exact_t": net.exact_t, "t_from_dual": net.t_from_dual, "t_bound": net.t_bound_predicted},
        )
        exc.stage = "verify"
        raise exc
    return report_doc

