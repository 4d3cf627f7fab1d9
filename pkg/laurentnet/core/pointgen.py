"""
Point sets P_f = f^{-1}X ∩ U^d_b.

With T = L'Q and L = D_f^{-1} L', the set S = {g in F_b[x]^d : Lg in U^d_b} is built coordinate
by coordinate and every g in S is mapped to the point LQ⌈Q^{-1} g⌉. Both S and the map are
F_b-linear, so the images of a basis of S are generating matrices of the whole point set.
"""
import csv
import io
import logging
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from laurentnet.core import config
from laurentnet.core.algebra import FbPoly, LaurentSeries, inv, poly_part
from laurentnet.core.errors import (
    BudgetExceeded,
    DimensionMismatch,
    DuplicateAtDepth,
    ParseError,
    PreconditionViolated,
    ShrinkConditionViolated,
)
from laurentnet.core.fblinalg import fb_coefficient_vectors, fb_rank, fb_span
from laurentnet.core.lattice import LatticeSpec, ShrinkFactor, divide_by_poly, shrink
from laurentnet.core.matrix import LaurentMatrix, LQFactors, lq_decompose, mat_vec

logger = logging.getLogger(__name__)

DIGIT_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"
FORMATS = ("digits", "rational", "float")


@dataclass(frozen=True)
class ShrinkCheck:
    ok: bool
    degrees: Tuple[int, ...]
    minimal_degrees: Tuple[int, ...]

    def violations(self) -> List[int]:
        return [j for j, (have, need) in enumerate(zip(self.degrees, self.minimal_degrees)) if have < need]


@dataclass(frozen=True, eq=False)
class SSet:
    """Polynomial vectors g with Lg in the digital unit cube, in enumeration order."""

    b: int
    exponents: Tuple[int, ...]
    vectors: Tuple[Tuple[FbPoly, ...], ...]

    @property
    def m(self) -> int:
        return sum(self.exponents)

    @property
    def size(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True, eq=False)
class ShrinkPlan:
    """Everything point generation needs for one (X, f) pair."""

    lattice: LatticeSpec
    factor: ShrinkFactor
    factors: LQFactors
    lmat: LaurentMatrix
    shrunk_generator: LaurentMatrix
    exponents: Tuple[int, ...]

    @property
    def m(self) -> int:
        return sum(self.exponents)

    @property
    def d(self) -> int:
        return self.lattice.d


@dataclass(frozen=True, eq=False)
class DigitPointSet:
    """
    b^m points of the digital unit cube, stored as a (N, d, depth) digit array.

    digits[p, j, k] is the coefficient of x^{-(k+1)} in coordinate j of point p.
    """

    b: int
    d: int
    m: int
    depth: int
    digits: np.ndarray
    provenance: Dict[str, Any] = field(default_factory=dict)
    generators: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.digits.ndim != 3 or self.digits.shape[1:] != (self.d, self.depth):
            raise DimensionMismatch(
                f"digit array of shape {self.digits.shape} does not match d={self.d}, depth={self.depth}"
            )

    @property
    def size(self) -> int:
        return self.digits.shape[0]

    def flat(self, depth: Optional[int] = None) -> np.ndarray:
        """(N, d*depth) rows, coordinate-major"""
        depth = self.depth if depth is None else depth
        return self.digits[:, :, :depth].reshape(self.size, self.d * depth)

    def unique_count(self, depth: Optional[int] = None) -> int:
        if self.size == 0:
            return 0
        return int(np.unique(self.flat(depth), axis=0).shape[0])

    def truncated(self, depth: int) -> "DigitPointSet":
        if depth > self.depth:
            raise PreconditionViolated(f"cannot extend depth {self.depth} to {depth}")
        generators = None if self.generators is None else self.generators[:, :, :depth]
        return replace(self, depth=depth, digits=self.digits[:, :, :depth], generators=generators)

    def project(self, k: int) -> "DigitPointSet":
        """First k coordinates"""
        if not 1 <= k <= self.d:
            raise DimensionMismatch(f"cannot project {self.d} coordinates to {k}")
        generators = None if self.generators is None else self.generators[:, :k, :]
        return replace(
            self,
            d=k,
            digits=self.digits[:, :k, :],
            generators=generators,
            provenance={**self.provenance, "projected_from": self.d},
        )

    def numerators(self) -> np.ndarray:
        """Integer numerators over b^depth; object dtype when they overflow int64"""
        weights = [self.b ** (self.depth - 1 - k) for k in range(self.depth)]
        if self.b**self.depth < 2**62:
            return self.digits @ np.array(weights, dtype=np.int64)
        return self.digits.astype(object) @ np.array(weights, dtype=object)

    def as_floats(self) -> np.ndarray:
        scale = float(self.b) ** -np.arange(1, self.depth + 1)
        return self.digits.astype(np.float64) @ scale

    def same_points(self, other: "DigitPointSet") -> bool:
        """Equality as multisets at the common depth"""
        if (self.b, self.d, self.size) != (other.b, other.d, other.size):
            return False
        depth = min(self.depth, other.depth)
        a = self.flat(depth)
        c = other.flat(depth)
        return np.array_equal(a[np.lexsort(a.T[::-1])], c[np.lexsort(c.T[::-1])])


def check_shrink_condition(lprime: LaurentMatrix, f: ShrinkFactor) -> ShrinkCheck:
    """deg f_j >= max_{i <= j} deg l'_{ji}, and the minimal degrees satisfying it."""
    if f.d != lprime.nrows:
        raise DimensionMismatch(f"shrinking factor has {f.d} coordinates, L' has {lprime.nrows} rows")
    minimal = []
    for j in range(lprime.nrows):
        row = [lprime[j, i].deg for i in range(j + 1)]
        minimal.append(max(0, int(max(row))))
    degrees = f.degrees
    ok = all(have >= need for have, need in zip(degrees, minimal))
    return ShrinkCheck(ok=ok, degrees=degrees, minimal_degrees=tuple(minimal))


def plan_shrink(x: LatticeSpec, f: ShrinkFactor) -> ShrinkPlan:
    """L'Q decomposition of T, the shrinking check and L = D_f^{-1} L'."""
    factors = lq_decompose(x.generator)
    check = check_shrink_condition(factors.lprime, f)
    if not check.ok:
        raise ShrinkConditionViolated(
            f"shrinking degrees {check.degrees} below minimal {check.minimal_degrees}",
            {"degrees": list(check.degrees), "minimal_degrees": list(check.minimal_degrees)},
        )
    lprime = factors.lprime
    lmat = LaurentMatrix(
        x.ctx,
        [
            [divide_by_poly(lprime[j, i], f.factors[j], x.precision) for i in range(x.d)]
            for j in range(x.d)
        ],
    )
    exponents = []
    for j in range(x.d):
        degree = lmat[j, j].deg
        if degree > 0:
            raise PreconditionViolated(f"diagonal entry {j} of L has positive degree {degree}")
        exponents.append(int(-degree))
    return ShrinkPlan(
        lattice=x,
        factor=f,
        factors=factors,
        lmat=lmat,
        shrunk_generator=shrink(x, f).generator,
        exponents=tuple(exponents),
    )


def _fallback_precision(lmat: LaurentMatrix) -> int:
    return lmat.min_prec if lmat.min_prec is not None else 2 * config.MIN_PRECISION


def _base_poly(lmat: LaurentMatrix, j: int, prefix: Sequence[FbPoly]) -> FbPoly:
    """⌈-l_jj^{-1} sum_{i<j} l_ji g_i⌉"""
    ctx = lmat.ctx
    acc = LaurentSeries.zero(ctx)
    for i, g in enumerate(prefix):
        if not g.is_zero:
            acc = acc + lmat[j, i] * g
    if acc.is_exact and acc.is_zero:
        return FbPoly.zero(ctx)
    diagonal = lmat[j, j]
    inverse = inv(diagonal, prec=_fallback_precision(lmat) if diagonal.is_exact else None)
    return poly_part(-(acc * inverse))


def _complete(lmat: LaurentMatrix, prefix: Sequence[FbPoly]) -> Tuple[FbPoly, ...]:
    """Extend a prefix with h_j = 0 for every remaining coordinate"""
    out = list(prefix)
    for j in range(len(prefix), lmat.nrows):
        out.append(_base_poly(lmat, j, out))
    return tuple(out)


def enumerate_S(lmat: LaurentMatrix, max_size: Optional[int] = None) -> SSet:
    """
    Breadth-first construction of S: level j extends each prefix by
    g_j = ⌈-l_jj^{-1} sum_{i<j} l_ji g_i⌉ + h over all h with deg h < -deg l_jj.
    """
    ctx = lmat.ctx
    exponents = []
    for j in range(lmat.nrows):
        degree = lmat[j, j].deg
        if degree > 0:
            raise PreconditionViolated(f"diagonal entry {j} of L has positive degree {degree}")
        exponents.append(int(-degree))
    size = ctx.b ** sum(exponents)
    cap = max_size if max_size is not None else config.MAX_POINTS
    if size > cap:
        raise BudgetExceeded(f"S has {size} elements, cap is {cap}", {"required": size, "budget": cap})

    prefixes: List[Tuple[FbPoly, ...]] = [()]
    for j, e in enumerate(exponents):
        shifts = list(FbPoly.iter_below(ctx, e))
        extended = []
        for prefix in prefixes:
            base = _base_poly(lmat, j, prefix)
            extended.extend(prefix + (base + h,) for h in shifts)
        prefixes = extended
    return SSet(b=ctx.b, exponents=tuple(exponents), vectors=tuple(prefixes))


def basis_of_S(plan: ShrinkPlan) -> Tuple[Tuple[FbPoly, ...], ...]:
    """h_j = x^k for j ascending and k descending, in the order matching ``enumerate_S``."""
    ctx = plan.lattice.ctx
    basis = []
    for j, e in enumerate(plan.exponents):
        zeros = tuple(FbPoly.zero(ctx) for _ in range(j))
        for k in range(e - 1, -1, -1):
            basis.append(_complete(plan.lmat, zeros + (FbPoly.monomial(ctx, k),)))
    return tuple(basis)


def image_point(plan: ShrinkPlan, g: Sequence[FbPoly], depth: int) -> np.ndarray:
    """Digits of LQ⌈Q^{-1} g⌉ = D_f^{-1} T ⌈Q^{-1} g⌉, shape (d, depth)"""
    k = tuple(poly_part(v) for v in mat_vec(plan.factors.qinv, g))
    point = mat_vec(plan.shrunk_generator, k)
    return np.stack([c.digits(depth) for c in point])


def point_generators(plan: ShrinkPlan, depth: int) -> np.ndarray:
    """(m, d, depth) digit matrices: the images of the basis of S."""
    basis = basis_of_S(plan)
    if not basis:
        return np.zeros((0, plan.d, depth), dtype=np.int64)
    return np.stack([image_point(plan, g, depth) for g in basis])


def generator_rank(generators: np.ndarray, b: int) -> int:
    """|P| = b^rank without materialising the points"""
    if generators.shape[0] == 0:
        return 0
    return fb_rank(generators.reshape(generators.shape[0], -1), b)


def _build(plan: ShrinkPlan, depth: int, method: str) -> DigitPointSet:
    b, d, m = plan.lattice.b, plan.d, plan.m
    if b**m > config.MAX_POINTS:
        raise BudgetExceeded(
            f"point set has {b**m} points, cap is {config.MAX_POINTS}",
            {"required": b**m, "budget": config.MAX_POINTS},
        )
    generators = point_generators(plan, depth)
    if method == "basis":
        if m:
            digits = fb_span(generators.reshape(m, d * depth), b).reshape(b**m, d, depth)
        else:
            digits = np.zeros((1, d, depth), dtype=np.int64)
    elif method == "enumerate":
        s = enumerate_S(plan.lmat)
        digits = np.stack([image_point(plan, g, depth) for g in s.vectors])
    else:
        raise PreconditionViolated(f"unknown point method {method!r}")
    provenance = {
        "lattice": plan.lattice.label,
        "shrink": str(plan.factor),
        "method": method,
        "exponents": list(plan.exponents),
    }
    return DigitPointSet(
        b=b, d=d, m=m, depth=depth, digits=digits, provenance=provenance, generators=generators
    )


def point_set(
    x: LatticeSpec,
    f: ShrinkFactor,
    depth: Optional[int] = None,
    method: str = "basis",
    plan: Optional[ShrinkPlan] = None,
) -> DigitPointSet:
    """
    P_f truncated to ``depth`` digits (default m + guard digits).

    When points coincide at the depth, one retry at doubled depth is made before
    DuplicateAtDepth is raised.
    """
    plan = plan or plan_shrink(x, f)
    m = plan.m
    depth = config.default_depth(m) if depth is None else depth
    if depth < m:
        raise PreconditionViolated(f"depth {depth} is smaller than m={m}")

    for attempt, current in enumerate((depth, 2 * depth)):
        points = _build(plan, current, method)
        distinct = points.unique_count()
        if distinct == points.size:
            logger.info(
                "point set generated",
                extra={"fields": {"m": m, "d": plan.d, "depth": current, "method": method, "points": distinct}},
            )
            return points
        logger.warning(
            "points coincide at depth",
            extra={"fields": {"depth": current, "distinct": distinct, "points": points.size, "attempt": attempt}},
        )
    raise DuplicateAtDepth(
        f"only {distinct} of {points.size} points are distinct at depth {2 * depth}",
        {"depth": 2 * depth, "distinct": distinct},
    )


def brute_force_points(
    x: LatticeSpec, f: ShrinkFactor, coefficient_count: int, depth: int
) -> np.ndarray:
    """
    Distinct points of D_f^{-1} T k over all k with deg k_j < coefficient_count, keeping those
    in the digital unit cube. Rows are flattened digit vectors, sorted.
    """
    ctx = x.ctx
    generator = shrink(x, f).generator
    d = x.d
    rows = []
    for flat in fb_coefficient_vectors(ctx.b, d * coefficient_count):
        k = [FbPoly(ctx, flat[j * coefficient_count : (j + 1) * coefficient_count]) for j in range(d)]
        image = mat_vec(generator, k)
        if all(c.is_zero or c.deg < 0 for c in image):
            rows.append(np.concatenate([c.digits(depth) for c in image]))
    found = np.unique(np.array(rows, dtype=np.int64), axis=0)
    return found


# ---------------------------------------------------------------------------
# CSV emission


def _header(points: DigitPointSet, fmt: str) -> str:
    return f"# b={points.b} d={points.d} m={points.m} depth={points.depth} format={fmt}"


def format_points(points: DigitPointSet, fmt: str = "digits", header: bool = True) -> str:
    """CSV text: base-b digit strings, rationals a/b^depth or floats, one point per row."""
    if fmt not in FORMATS:
        raise PreconditionViolated(f"unknown format {fmt!r}; choose one of {', '.join(FORMATS)}")
    if fmt == "digits" and points.b > len(DIGIT_ALPHABET):
        raise PreconditionViolated(f"digit format supports b <= {len(DIGIT_ALPHABET)}")
    buffer = io.StringIO()
    if header:
        buffer.write(_header(points, fmt) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    if fmt == "digits":
        for point in points.digits:
            writer.writerow(["".join(DIGIT_ALPHABET[int(c)] for c in row) for row in point])
    elif fmt == "rational":
        denominator = points.b**points.depth
        for row in points.numerators():
            writer.writerow([f"{int(v)}/{denominator}" for v in row])
    else:
        for row in points.as_floats():
            writer.writerow([format(float(v), ".17g") for v in row])
    return buffer.getvalue()


def emit(points: DigitPointSet, fmt: str = "digits", path: Optional[str] = None, header: bool = True) -> str:
    text = format_points(points, fmt, header)
    if path is not None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info("points written", extra={"fields": {"path": path, "format": fmt, "points": points.size}})
    return text


def _parse_header(line: str) -> Dict[str, str]:
    fields = {}
    for token in line.lstrip("#").split():
        if "=" in token:
            key, value = token.split("=", 1)
            fields[key.strip()] = value.strip()
    return fields


def _log_b(b: int, n: int) -> Optional[int]:
    m, power = 0, 1
    while power < n:
        power *= b
        m += 1
    return m if power == n else None


def parse_points(text: str, b: Optional[int] = None, m: Optional[int] = None) -> DigitPointSet:
    """Inverse of ``format_points`` for the digits and rational formats."""
    lines = text.splitlines()
    header: Dict[str, str] = {}
    if lines and lines[0].startswith("#"):
        header = _parse_header(lines[0])
        lines = lines[1:]
    try:
        b = b if b is not None else int(header["b"])
    except KeyError:
        raise ParseError("point file has no header; pass b explicitly")
    except ValueError:
        raise ParseError(f"invalid b in header {header}")
    rows = [row for row in csv.reader(lines) if row]
    if not rows:
        raise ParseError("point file contains no points")

    fmt = header.get("format") or ("rational" if "/" in rows[0][0] else "digits")
    if fmt == "float":
        raise ParseError("float point files cannot be loaded exactly")
    d = len(rows[0])
    if any(len(row) != d for row in rows):
        raise ParseError("point rows have different numbers of coordinates")

    if fmt == "digits":
        depth = len(rows[0][0].strip())
        digits = np.zeros((len(rows), d, depth), dtype=np.int64)
        for p, row in enumerate(rows):
            for j, cell in enumerate(row):
                cell = cell.strip().lower()
                if len(cell) != depth:
                    raise ParseError(f"row {p} coordinate {j} has {len(cell)} digits, expected {depth}")
                for k, char in enumerate(cell):
                    value = DIGIT_ALPHABET.find(char)
                    if value < 0 or value >= b:
                        raise ParseError(f"digit {char!r} out of range for b={b}")
                    digits[p, j, k] = value
    elif fmt == "rational":
        denominators = set()
        numerators = []
        for row in rows:
            parsed = []
            for cell in row:
                try:
                    num, den = (int(part) for part in cell.split("/"))
                except ValueError:
                    raise ParseError(f"invalid rational {cell!r}")
                denominators.add(den)
                parsed.append(num)
            numerators.append(parsed)
        if len(denominators) != 1:
            raise ParseError("rational coordinates must share one denominator b^depth")
        depth = _log_b(b, denominators.pop())
        if depth is None:
            raise ParseError(f"denominator is not a power of b={b}")
        digits = np.zeros((len(rows), d, depth), dtype=np.int64)
        for p, row in enumerate(numerators):
            for j, num in enumerate(row):
                if not 0 <= num < b**depth:
                    raise ParseError(f"rational {num}/{b**depth} is outside [0, 1)")
                for k in range(depth - 1, -1, -1):
                    num, digits[p, j, k] = divmod(num, b)
    else:
        raise ParseError(f"unknown point format {fmt!r}")

    if m is None:
        m = int(header["m"]) if "m" in header else _log_b(b, len(rows))
    if m is None:
        raise ParseError(f"{len(rows)} points is not a power of b={b}; pass m explicitly")
    if "depth" in header and int(header["depth"]) != depth:
        raise ParseError(f"header depth {header['depth']} disagrees with data depth {depth}")
    return DigitPointSet(b=b, d=d, m=m, depth=depth, digits=digits, provenance={"format": fmt})


def load_points(path: str, b: Optional[int] = None, m: Optional[int] = None) -> DigitPointSet:
    with open(path, "r", encoding="utf-8") as handle:
        points = parse_points(handle.read(), b=b, m=m)
    return replace(points, provenance={**points.provenance, "source": path})
