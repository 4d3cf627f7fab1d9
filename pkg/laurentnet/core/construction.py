"""
Explicit admissible lattices from the roots of p_d = F_n + x^{-1}, d = b^n.

F_n(z) is the product of (z - a) over all polynomials a of degree < n. Its roots shifted by
the driving constant x^{-1} are found level by level with Artin-Schreier type Frobenius sums;
the Vandermonde matrix B of the roots is the dual generator and T = (B^{-1})^T.
"""
import functools
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

from laurentnet.core import config
from laurentnet.core.algebra import (
    NEG_INF,
    FbPoly,
    FieldContext,
    LaurentSeries,
    frobenius_sum,
    get_context,
    inv,
)
from laurentnet.core.errors import PrecisionExhausted, PreconditionViolated
from laurentnet.core.lattice import LatticeSpec, ShrinkFactor
from laurentnet.core.matrix import LaurentMatrix, det_degree, mat_inverse
from laurentnet.core.pointgen import DigitPointSet, point_set

logger = logging.getLogger(__name__)

_INFLATION_ATTEMPTS = 4


class BivarPoly:
    """Polynomial in z whose coefficients are Laurent series in x (ascending powers of z)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: Sequence[Union[LaurentSeries, FbPoly, int]]):
        built = []
        for c in coeffs:
            if isinstance(c, FbPoly):
                c = c.to_series()
            elif not isinstance(c, LaurentSeries):
                c = LaurentSeries.constant(ctx, int(c))
            ctx.check(c.ctx)
            built.append(c)
        while built and built[-1].is_exact and built[-1].is_zero:
            built.pop()
        self.ctx = ctx
        self.coeffs: Tuple[LaurentSeries, ...] = tuple(built)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def coeff(self, k: int) -> LaurentSeries:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return LaurentSeries.zero(self.ctx)

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return BivarPoly(self.ctx, [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self) -> "BivarPoly":
        return BivarPoly(self.ctx, [-c for c in self.coeffs])

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (LaurentSeries, FbPoly, int)):
            return BivarPoly(self.ctx, [c * other for c in self.coeffs])
        if not isinstance(other, BivarPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return BivarPoly(self.ctx, [])
        out = [LaurentSeries.zero(self.ctx) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, c in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * c
        return BivarPoly(self.ctx, out)

    __rmul__ = __mul__

    def frobenius(self) -> "BivarPoly":
        """P^b: each a_k z^k becomes a_k^b z^{kb}"""
        b = self.ctx.b
        out = [LaurentSeries.zero(self.ctx) for _ in range(b * (len(self.coeffs) - 1) + 1)]
        for k, c in enumerate(self.coeffs):
            out[b * k] = c.frobenius()
        return BivarPoly(self.ctx, out)

    def evaluate(self, value: Union[LaurentSeries, FbPoly]) -> LaurentSeries:
        """Horner evaluation at z = value"""
        if isinstance(value, FbPoly):
            value = value.to_series()
        acc = LaurentSeries.zero(self.ctx)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivarPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(k) == other.coeff(k) for k in range(n))

    __hash__ = None

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            text = str(c)
            if not mono:
                terms.append(text)
            elif text == "1":
                terms.append(mono)
            else:
                terms.append(f"({text})*{mono}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True, eq=False)
class RootSet:
    """Roots of p_d indexed lexicographically by (a_{n-1}, ..., a_0)."""

    b: int
    n: int
    roots: Tuple[LaurentSeries, ...]
    labels: Tuple[Tuple[int, ...], ...]
    tail: LaurentSeries
    prec: int

    @property
    def d(self) -> int:
        return len(self.roots)

    def residuals(self, pd: BivarPoly) -> Tuple[LaurentSeries, ...]:
        return tuple(pd.evaluate(root) for root in self.roots)


@dataclass(frozen=True)
class PredictedQuality:
    m: int
    t_bound: int
    strength_bound: int
    deg_det_b: int


@dataclass(frozen=True, eq=False)
class Construction:
    b: int
    n: int
    requested_prec: int
    pd: BivarPoly
    roots: RootSet
    vandermonde: LaurentMatrix
    lattice: LatticeSpec
    audit: Dict[str, object] = field(default_factory=dict)

    @property
    def d(self) -> int:
        return self.b**self.n


def _x_power(ctx: FieldContext, k: int) -> LaurentSeries:
    return LaurentSeries.monomial(ctx, k)


@functools.lru_cache(maxsize=None)
def build_Fn(ctx: FieldContext, n: int) -> BivarPoly:
    """F_1 = z^b - z and F_n = F_{n-1}^b - F_{n-1}(x^{n-1})^{b-1} F_{n-1}."""
    if n < 1:
        raise PreconditionViolated(f"n must be at least 1, got {n}")
    b = ctx.b
    if n == 1:
        coeffs = [0] * (b + 1)
        coeffs[1] = b - 1
        coeffs[b] = 1
        return BivarPoly(ctx, coeffs)
    previous = build_Fn(ctx, n - 1)
    c = previous.evaluate(_x_power(ctx, n - 1))
    return previous.frobenius() - previous * (c ** (b - 1))


def build_pd(ctx: FieldContext, n: int) -> BivarPoly:
    """p_d = F_n + x^{-1}"""
    fn = build_Fn(ctx, n)
    shift = BivarPoly(ctx, [LaurentSeries.monomial(ctx, -1)])
    return fn + shift


def linearized_roots(fcoef: LaurentSeries, g: LaurentSeries, prec: int) -> Tuple[LaurentSeries, ...]:
    """
    The b roots of z^b - z fcoef^{b-1} + g, namely (a + S) fcoef with
    S = sum_i (fcoef^{-b} g)^{b^i}, known through x^{-prec}.
    """
    ctx = fcoef.ctx
    ctx.check(g.ctx)
    if fcoef.is_zero:
        raise PreconditionViolated("linearized roots need fcoef != 0")
    b = ctx.b
    deg_f = int(fcoef.deg)
    power = fcoef**b
    deg_g = g.deg if g.deg != NEG_INF else 0
    inverse = inv(power, prec=prec + deg_f + max(int(deg_g), 0) + 1)
    h = g * inverse
    if not h.is_zero and h.deg >= 0:
        raise PreconditionViolated(
            f"deg(fcoef^-b g) = {h.deg} must be negative", {"deg": h.deg}
        )
    s = frobenius_sum(h, prec + deg_f)
    return tuple((s + a) * fcoef for a in range(b))


def _common_tail(ctx: FieldContext, k: int, driving: LaurentSeries, prec: int) -> LaurentSeries:
    """
    Root of F_k + driving with negative degree.

    F_k(z) + f = prod_a (F_{k-1}(z) - f_a) where f_a are the linearized roots for
    fcoef = F_{k-1}(x^{k-1}); only the branch a = 0 is descended, the other branches are its
    shifts by a x^{k-1} because F_{k-1}(z + a x^{k-1}) = F_{k-1}(z) + a F_{k-1}(x^{k-1}).
    """
    one = LaurentSeries.one(ctx)
    if k == 1:
        return linearized_roots(one, driving, prec)[0]
    fcoef = build_Fn(ctx, k - 1).evaluate(_x_power(ctx, k - 1))
    f0 = linearized_roots(fcoef, driving, prec)[0]
    logger.debug(f"root recursion level {k}: deg f_0 = {f0.deg}")
    return _common_tail(ctx, k - 1, -f0, prec)


def roots_pd(ctx: FieldContext, n: int, prec: int) -> RootSet:
    """All b^n roots of p_d: a_{n-1} x^{n-1} + ... + a_0 + tail."""
    b = ctx.b
    tail = _common_tail(ctx, n, LaurentSeries.monomial(ctx, -1), prec)
    labels = tuple(itertools.product(range(b), repeat=n))
    roots = tuple(tail + FbPoly(ctx, label[::-1]) for label in labels)
    return RootSet(b=b, n=n, roots=roots, labels=labels, tail=tail, prec=prec)


def deg_det_b_closed_form(b: int, n: int) -> int:
    """(b^n/2)((n-1) b^n - (b^n - b)/(b-1))"""
    d = b**n
    value = Fraction(d, 2) * ((n - 1) * d - Fraction(d - b, b - 1))
    if value.denominator != 1:
        raise PreconditionViolated(f"non-integral det degree {value}")
    return int(value)


def t_bound(b: int, n: int) -> int:
    """(d/2)(d log_b d - (d-1) b/(b-1)), which coincides with deg det B"""
    d = b**n
    value = Fraction(d, 2) * (d * n - Fraction((d - 1) * b, b - 1))
    return int(value)


def precision_budget(b: int, n: int) -> int:
    """Degrees consumed by the root recursion plus the Vandermonde inversion."""
    d = b**n
    recursion = sum((k - 1) * (b - 1) * b ** (k - 1) for k in range(2, n + 1))
    return recursion + n * d + 2 * deg_det_b_closed_form(b, n) + 8


def dimension_for(b: int, d: int) -> int:
    """Smallest n with b^n >= d"""
    if d < 1:
        raise PreconditionViolated(f"dimension must be positive, got {d}")
    n = 1
    while b**n < d:
        n += 1
    return n


@functools.lru_cache(maxsize=32)
def build_construction(b: int, n: int, prec: int) -> Construction:
    """Roots, Vandermonde matrix B and generator T = (B^{-1})^T, with T known through ``prec``."""
    ctx = get_context(b)
    if n < 1:
        raise PreconditionViolated(f"n must be at least 1, got {n}")
    pd = build_pd(ctx, n)
    budget = precision_budget(b, n)
    for attempt in range(_INFLATION_ATTEMPTS):
        work_prec = prec + budget
        roots = roots_pd(ctx, n, work_prec)
        d = roots.d
        vandermonde = LaurentMatrix(ctx, [[root**j for j in range(d)] for root in roots.roots])
        generator = mat_inverse(vandermonde).transpose()
        reached = generator.min_prec
        if reached is None or reached >= prec:
            break
        logger.warning(
            "generator precision below request, inflating",
            extra={"fields": {"b": b, "n": n, "requested": prec, "reached": reached, "attempt": attempt}},
        )
        budget *= 2
    else:
        raise PrecisionExhausted(
            f"generator reached precision {reached}, requested {prec}",
            {"requested": prec, "reached": reached},
        )

    residual_precision = [r.prec for r in roots.residuals(pd)]
    lattice = LatticeSpec(
        generator=generator,
        known_dual=vandermonde,
        label=f"pd-roots(b={b},n={n})",
        provenance={"b": b, "n": n, "construction": "vandermonde of p_d roots"},
    )
    audit = {
        "work_precision": work_prec,
        "generator_precision": generator.min_prec,
        "tail_degree": roots.tail.deg,
        "residual_precision": residual_precision,
    }
    logger.info("construction finished", extra={"fields": {"b": b, "n": n, **audit}})
    return Construction(
        b=b,
        n=n,
        requested_prec=prec,
        pd=pd,
        roots=roots,
        vandermonde=vandermonde,
        lattice=lattice,
        audit=audit,
    )


def generator_matrix(ctx: FieldContext, n: int, prec: int) -> LatticeSpec:
    return build_construction(ctx.b, n, prec).lattice


def predicted_quality(b: int, n: int, f: Union[ShrinkFactor, Sequence[int]]) -> PredictedQuality:
    """Closed-form m, t bound and strength for the shrunken net."""
    degrees = f.degrees if isinstance(f, ShrinkFactor) else tuple(f)
    det_b = deg_det_b_closed_form(b, n)
    m = det_b + sum(degrees)
    bound = t_bound(b, n)
    return PredictedQuality(m=m, t_bound=bound, strength_bound=m - bound, deg_det_b=det_b)


def t_from_admissibility(deg_det_t: int, m_value: int, d: int) -> int:
    """t = -deg det T - M(X) - d + 1 for an admissible lattice"""
    return -deg_det_t - m_value - d + 1


def measured_det_degree(construction: Construction) -> int:
    return int(det_degree(construction.vandermonde))


def explicit_net(
    b: int,
    n: int,
    f: ShrinkFactor,
    depth: Optional[int] = None,
    prec: Optional[int] = None,
    method: str = "basis",
) -> Tuple[Construction, DigitPointSet]:
    """Construction and its shrunken point set; precision is doubled once if it runs out."""
    predicted = predicted_quality(b, n, f)
    depth = config.default_depth(predicted.m) if depth is None else depth
    prec = config.working_precision(predicted.m, b**n, depth) if prec is None else prec
    for attempt in range(2):
        construction = build_construction(b, n, prec)
        try:
            return construction, point_set(construction.lattice, f, depth, method)
        except PrecisionExhausted as e:
            if attempt:
                raise
            logger.warning(
                "point generation ran out of precision, doubling",
                extra={"fields": {"precision": prec, "details": e.details}},
            )
            prec *= 2
    raise PrecisionExhausted(f"point generation failed at precision {prec}")
