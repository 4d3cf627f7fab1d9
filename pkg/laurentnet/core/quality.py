"""
Star discrepancy, the equal-weight cubature rule and integration-error decay runs.
"""
import csv
import io
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from laurentnet.core import config
from laurentnet.core.algebra import get_context
from laurentnet.core.construction import explicit_net
from laurentnet.core.errors import BudgetExceeded, DimensionTooLarge, PreconditionViolated
from laurentnet.core.integrands import Integrand
from laurentnet.core.lattice import ShrinkFactor
from laurentnet.core.pointgen import DigitPointSet
from laurentnet.core.workers import parallel_map

logger = logging.getLogger(__name__)

# empirical constant for the (log N)/N envelope of d=2 nets
ENVELOPE_CONSTANT = 4
MAX_EXACT_DIMENSION = 3


@dataclass(frozen=True)
class DiscrepancyResult:
    value: Fraction
    n_points: int
    d: int
    method: str
    bound: Optional[float] = None
    envelope: Optional[Fraction] = None
    envelope_exceeded: Optional[bool] = None

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator


@dataclass(frozen=True)
class DecayRow:
    r: int
    n_points: int
    estimate: float
    error: float


@dataclass
class IntegrationRun:
    integrand: str
    b: int
    n: int
    d: int
    exact: float
    rows: List[DecayRow] = field(default_factory=list)
    slope: Optional[float] = None

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["integrand", "r", "N", "estimate", "exact", "abs_error"])
        for row in self.rows:
            writer.writerow(
                [self.integrand, row.r, row.n_points, repr(row.estimate), repr(self.exact), repr(row.error)]
            )
        return buffer.getvalue()


def _grid(values: np.ndarray, scale: int, include_one: bool) -> np.ndarray:
    grid = np.unique(values)
    if include_one and (grid.size == 0 or grid[-1] != scale):
        grid = np.append(grid, scale)
    return grid


def star_discrepancy_exact(points: DigitPointSet, t: Optional[int] = None) -> DiscrepancyResult:
    """
    sup over anchored boxes [0, y) of |A/N - vol| in exact rational arithmetic.

    Open boxes with corners on the grid of point coordinates (plus 1) give the sup of
    vol - A/N; closed boxes on the same grid give the sup of A/N - vol.
    """
    d, n_points = points.d, points.size
    if d > MAX_EXACT_DIMENSION:
        raise DimensionTooLarge(f"exact star discrepancy supports d <= {MAX_EXACT_DIMENSION}, got {d}")
    if n_points > config.DISCREPANCY_MAX_POINTS:
        raise BudgetExceeded(
            f"exact star discrepancy supports at most {config.DISCREPANCY_MAX_POINTS} points",
            {"required": n_points, "budget": config.DISCREPANCY_MAX_POINTS},
        )
    if n_points == 0:
        raise PreconditionViolated("empty point set")

    scale = points.b**points.depth
    coords = points.numerators()
    grids = [_grid(coords[:, j], scale, include_one=True) for j in range(d)]
    cells = math.prod(g.size for g in grids)
    if cells > config.DISCREPANCY_MAX_GRID:
        raise BudgetExceeded(
            f"discrepancy grid has {cells} cells, cap is {config.DISCREPANCY_MAX_GRID}",
            {"required": cells, "budget": config.DISCREPANCY_MAX_GRID},
        )

    wide = n_points * scale**d >= 2**62
    dtype = object if wide else np.int64
    histogram = np.zeros(tuple(g.size for g in grids), dtype=np.int64)
    index = tuple(np.searchsorted(grids[j], coords[:, j].astype(grids[j].dtype)) for j in range(d))
    np.add.at(histogram, index, 1)

    closed = histogram
    for axis in range(d):
        closed = np.cumsum(closed, axis=axis)
    # open count at k = closed count at k-1 in every axis
    opened = np.pad(closed, [(1, 0)] * d)[tuple(slice(0, -1) for _ in range(d))]

    volume = np.ones(histogram.shape, dtype=dtype)
    for j, g in enumerate(grids):
        shape = [1] * d
        shape[j] = g.size
        volume = volume * np.asarray(g, dtype=dtype).reshape(shape)
    total = scale**d
    closed = closed.astype(dtype)
    opened = opened.astype(dtype)
    # both scaled by N * scale^d
    over = closed * total - volume * n_points
    under = volume * n_points - opened * total
    best = max(int(np.max(over)), int(np.max(under)), 0)
    value = Fraction(best, n_points * total)

    envelope = exceeded = None
    if t is not None and d == 2:
        envelope = ENVELOPE_CONSTANT * Fraction(points.b) ** t * points.m / Fraction(points.b) ** points.m
        exceeded = value > envelope
        if exceeded:
            logger.warning(
                "star discrepancy above the empirical envelope",
                extra={"fields": {"value": str(value), "envelope": str(envelope)}},
            )
    bound = discrepancy_bound(points.m, t, d, points.b) if t is not None else None
    return DiscrepancyResult(
        value=value,
        n_points=n_points,
        d=d,
        method="exact-critical-grid",
        bound=bound,
        envelope=envelope,
        envelope_exceeded=exceeded,
    )


def discrepancy_bound(m: int, t: int, d: int, b: int) -> float:
    """b^t (m - t)^{d-1} / b^m, the bound shape with constant 1 (not certified)"""
    if t > m:
        raise PreconditionViolated(f"t={t} exceeds m={m}")
    return float(Fraction(b) ** t * (m - t) ** (d - 1) / Fraction(b) ** m)


def qmc_integrate(points: DigitPointSet, integrand: Integrand) -> float:
    """Equal-weight rule (1/N) sum psi(x)"""
    values = integrand(points.as_floats())
    return float(np.mean(values))


def quadrature_weight(deg_det_t: int, shrink_degrees: Sequence[int], b: int) -> Fraction:
    """b^{deg det T} / b^{sum deg f_j}"""
    return Fraction(b) ** (deg_det_t - sum(shrink_degrees))


def error_decay_experiment(
    b: int,
    n: int,
    r_values: Sequence[int],
    integrand: Integrand,
    project_to: Optional[int] = None,
    threads: Optional[int] = None,
) -> IntegrationRun:
    """
    |Q_f(psi) - I(psi)| for f = (x^r, ..., x^r) over ``r_values`` and the least-squares slope of
    log error against log N (None when fewer than two errors are nonzero).
    """
    if not r_values:
        raise PreconditionViolated("error decay needs at least one r value")
    ctx = get_context(b)
    d_full = b**n
    d = project_to or d_full
    exact = integrand.integral(d)

    def run(r: int) -> DecayRow:
        factor = ShrinkFactor.monomial(ctx, d_full, r)
        _, points = explicit_net(b, n, factor)
        if project_to:
            points = points.project(project_to)
        estimate = qmc_integrate(points, integrand)
        return DecayRow(r=r, n_points=points.size, estimate=estimate, error=abs(estimate - exact))

    rows = parallel_map(run, sorted(r_values), threads)
    result = IntegrationRun(integrand=integrand.name, b=b, n=n, d=d, exact=exact, rows=list(rows))
    positive = [row for row in rows if row.error > 0]
    if len(positive) >= 2:
        log_n = np.log([row.n_points for row in positive])
        log_err = np.log([row.error for row in positive])
        result.slope = float(np.polyfit(log_n, log_err, 1)[0])
    logger.info(
        "error decay finished",
        extra={"fields": {"integrand": integrand.name, "rows": len(rows), "slope": result.slope}},
    )
    return result
