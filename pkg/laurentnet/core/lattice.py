"""
F_b[x]-lattices X = T(F_b[x]^d): dual generator, coordinate-wise shrinking and the
bounded-degree scan of the admissibility quantity M(X).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from laurentnet.core import config
from laurentnet.core.algebra import (
    NEG_INF,
    DegValue,
    FbPoly,
    FieldContext,
    LaurentSeries,
    inv,
)
from laurentnet.core.errors import (
    BudgetExceeded,
    DimensionMismatch,
    ParseError,
    PrecisionExhausted,
    PreconditionViolated,
)
from laurentnet.core.matrix import LaurentMatrix, mat_inverse, mat_vec
from laurentnet.core.workers import parallel_map

logger = logging.getLogger(__name__)

_SCAN_CHUNK = 4096


@dataclass(frozen=True)
class ShrinkFactor:
    """Coordinate-wise polynomial shrinking factor f = (f_1, ..., f_d)."""

    factors: Tuple[FbPoly, ...]

    def __post_init__(self):
        if not self.factors:
            raise PreconditionViolated("shrinking factor needs at least one coordinate")
        for f in self.factors:
            if f.is_zero:
                raise PreconditionViolated("shrinking factor coordinates must be nonzero")

    @classmethod
    def parse(cls, ctx: FieldContext, text: str, d: Optional[int] = None) -> "ShrinkFactor":
        """Parse ``"x^3,x^3"``; a single polynomial is broadcast to ``d`` coordinates."""
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise ParseError(f"empty shrinking factor {text!r}")
        factors = tuple(FbPoly.parse(ctx, p) for p in parts)
        if d is not None and len(factors) == 1:
            factors = factors * d
        if d is not None and len(factors) != d:
            raise DimensionMismatch(f"shrinking factor has {len(factors)} coordinates, lattice has {d}")
        return cls(factors)

    @classmethod
    def monomial(cls, ctx: FieldContext, d: int, r: int) -> "ShrinkFactor":
        return cls(tuple(FbPoly.monomial(ctx, r) for _ in range(d)))

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(int(f.degree) for f in self.factors)

    @property
    def total_degree(self) -> int:
        return sum(self.degrees)

    def __str__(self) -> str:
        return ",".join(str(f) for f in self.factors)


@dataclass(frozen=True, eq=False)
class LatticeSpec:
    """X = T(F_b[x]^d); ``known_dual`` caches (T^{-1})^T when it is known more precisely."""

    generator: LaurentMatrix
    known_dual: Optional[LaurentMatrix] = None
    label: str = "custom"
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.generator.nrows != self.generator.ncols:
            raise DimensionMismatch(f"lattice generator must be square, got {self.generator.shape}")

    @property
    def ctx(self) -> FieldContext:
        return self.generator.ctx

    @property
    def b(self) -> int:
        return self.ctx.b

    @property
    def d(self) -> int:
        return self.generator.nrows

    @property
    def precision(self) -> Optional[int]:
        return self.generator.min_prec

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "b": self.b,
            "d": self.d,
            "label": self.label,
            "precision": self.precision,
            "generator": self.generator.to_json_dict(),
            "dual": self.known_dual.to_json_dict() if self.known_dual is not None else None,
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "LatticeSpec":
        try:
            generator = LaurentMatrix.from_json_dict(data["generator"])
        except KeyError:
            raise ParseError("lattice JSON has no generator")
        dual = data.get("dual")
        spec = cls(
            generator=generator,
            known_dual=LaurentMatrix.from_json_dict(dual) if dual else None,
            label=data.get("label", "custom"),
            provenance=dict(data.get("provenance") or {}),
        )
        if int(data.get("b", spec.b)) != spec.b or int(data.get("d", spec.d)) != spec.d:
            raise ParseError("lattice JSON header disagrees with its generator")
        return spec


@dataclass(frozen=True)
class AdmissibilityReport:
    degree_bound: int
    m_hat: DegValue
    witness: Tuple[FbPoly, ...]
    witness_dual_point: Tuple[LaurentSeries, ...]
    witness_degrees: Tuple[DegValue, ...]
    certified_lower_bound: Optional[int]
    exact: bool
    precision_limited: bool
    enumerated: int


def identity_lattice(ctx: FieldContext, d: int) -> LatticeSpec:
    return LatticeSpec(LaurentMatrix.identity(ctx, d), LaurentMatrix.identity(ctx, d), label="identity")


def divide_by_poly(s: LaurentSeries, f: FbPoly, prec: Optional[int] = None) -> LaurentSeries:
    """s / f keeping the precision of ``s``; exact ``s`` over non-monomial ``f`` uses ``prec``."""
    den = f.to_series()
    if den.coeffs.size == 1:
        return s * inv(den)
    if s.is_exact:
        target = prec if prec is not None else 2 * config.MIN_PRECISION
        return s * inv(den, prec=target + int(f.degree))
    return s / den


def dual_generator(x: LatticeSpec, use_known: bool = True) -> LaurentMatrix:
    """(T^{-1})^T"""
    if use_known and x.known_dual is not None:
        return x.known_dual
    return mat_inverse(x.generator).transpose()


def shrink(x: LatticeSpec, f: ShrinkFactor) -> LatticeSpec:
    """f^{-1}X: generator D_f^{-1} T and dual generator D_f (T^{-1})^T."""
    if f.d != x.d:
        raise DimensionMismatch(f"shrinking factor has {f.d} coordinates, lattice has {x.d}")
    generator = LaurentMatrix(
        x.ctx,
        [[divide_by_poly(e, f.factors[j], x.precision) for e in x.generator.rows[j]] for j in range(x.d)],
    )
    dual = dual_generator(x)
    shrunk_dual = LaurentMatrix(
        x.ctx, [[e * f.factors[j] for e in dual.rows[j]] for j in range(x.d)]
    )
    return LatticeSpec(
        generator=generator,
        known_dual=shrunk_dual,
        label=f"{x.label}/shrunk",
        provenance={**x.provenance, "shrink": str(f)},
    )


def _coefficient_window(series: Sequence[LaurentSeries]) -> Tuple[int, int, bool]:
    nonzero = [s for s in series if not s.is_zero]
    exact = all(s.is_exact for s in series)
    if not nonzero:
        return 0, -1, exact
    lo = min(s.lead_exp for s in nonzero)
    if exact:
        hi = max(s.lead_exp + s.coeffs.size - 1 for s in nonzero)
    else:
        hi = min(s.prec for s in series if not s.is_exact)
    return lo, hi, exact


def _window(s: LaurentSeries, lo: int, hi: int) -> np.ndarray:
    out = np.zeros(max(hi - lo + 1, 0), dtype=np.int64)
    if s.is_zero or hi < lo:
        return out
    start = s.lead_exp
    for k, c in enumerate(s.coeffs):
        i = start + k
        if i > hi:
            break
        if i >= lo:
            out[i - lo] = c
    return out


def m_scan(
    x: LatticeSpec,
    degree_bound: int,
    certificate: Optional[int] = None,
    budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> AdmissibilityReport:
    """
    Exhaustive scan of sum_j deg((B'h)_j) over nonzero h with deg h_j <= degree_bound.

    The minimum M_hat is an upper bound of M(X). h is enumerated in lexicographic order of
    (N(h_1), ..., N(h_d)) with N(h) = sum c_k b^k; the first minimiser is the witness. A
    coordinate that is zero up to precision contributes its degree upper bound -(prec+1) and
    sets ``precision_limited``.
    """
    if degree_bound < 0:
        raise PreconditionViolated("degree bound must be non-negative")
    ctx, b, d = x.ctx, x.b, x.d
    positions = d * (degree_bound + 1)
    total = b**positions - 1
    budget = budget if budget is not None else config.SCAN_BUDGET
    if total > budget:
        raise BudgetExceeded(
            f"scan needs {total} vectors, budget is {budget}",
            {"required": total, "budget": budget},
        )

    dual = dual_generator(x)
    # row t of the basis: coordinate t // (D+1) of h, power D - t % (D+1)
    basis_series = []
    for t in range(positions):
        i, k = divmod(t, degree_bound + 1)
        power = degree_bound - k
        basis_series.append([dual[j, i].shift(power) for j in range(d)])
    lo, hi, exact = _coefficient_window([s for row in basis_series for s in row])
    if not exact and hi < lo:
        raise PrecisionExhausted("dual generator carries no known coefficient in the scan window")
    width = max(hi - lo + 1, 0)
    stack = np.zeros((positions, d, width), dtype=np.int64)
    for t, row in enumerate(basis_series):
        for j, s in enumerate(row):
            stack[t, j] = _window(s, lo, hi)
    flat = stack.reshape(positions, d * width)
    unknown_degree = NEG_INF if exact else -(hi + 1)

    def scan_chunk(first: int) -> Tuple[float, int, bool]:
        last = min(first + _SCAN_CHUNK, total + 1)
        index = np.arange(first, last, dtype=np.int64)
        powers = b ** np.arange(positions - 1, -1, -1, dtype=np.int64)
        h = (index[:, None] // powers[None, :]) % b
        images = (h @ flat % b).reshape(len(index), d, width)
        mask = images != 0
        present = mask.any(axis=2)
        first_nonzero = mask.argmax(axis=2)
        degrees = np.where(present, -(lo + first_nonzero).astype(np.float64), unknown_degree)
        sums = degrees.sum(axis=1)
        best = int(np.argmin(sums))
        limited = bool((~present[best]).any()) and not exact
        return float(sums[best]), int(index[best]), limited

    starts = list(range(1, total + 1, _SCAN_CHUNK))
    results = parallel_map(scan_chunk, starts, threads)
    m_hat, best_index, limited = min(results, key=lambda r: (r[0], r[1]))

    digits = [(best_index // b**p) % b for p in range(positions - 1, -1, -1)]
    witness = tuple(
        FbPoly(ctx, [digits[i * (degree_bound + 1) + degree_bound - k] for k in range(degree_bound + 1)])
        for i in range(d)
    )
    point = mat_vec(dual, witness)
    m_value: DegValue = NEG_INF if m_hat == -math.inf else int(m_hat)
    report = AdmissibilityReport(
        degree_bound=degree_bound,
        m_hat=m_value,
        witness=witness,
        witness_dual_point=point,
        witness_degrees=tuple(p.deg for p in point),
        certified_lower_bound=certificate,
        exact=certificate is not None and m_value == certificate,
        precision_limited=limited,
        enumerated=total,
    )
    logger.info(
        "admissibility scan finished",
        extra={"fields": {"degree_bound": degree_bound, "m_hat": str(m_value), "enumerated": total}},
    )
    return report
