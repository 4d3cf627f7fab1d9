"""
Independent verification of digital point sets: elementary-interval counting, the dual net
over F_b, its minimum NRT weight and the duality cross-check.

Digits are flattened coordinate-major: position j*n + k holds digit k+1 of coordinate j,
which pairs with the coefficient of x^k in g_j, so res(sum_j g_j p_j) is a dot product mod b.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from laurentnet.core import config
from laurentnet.core.algebra import DegValue, FbPoly
from laurentnet.core.errors import BudgetExceeded, NotAGroup, PreconditionViolated
from laurentnet.core.fblinalg import fb_nullspace_basis, fb_rank, fb_row_basis, fb_span
from laurentnet.core.pointgen import DigitPointSet
from laurentnet.core.workers import parallel_map

logger = logging.getLogger(__name__)

Weight = Union[int, float]


@dataclass(frozen=True)
class DualNet:
    """Row basis of the F_b-space of g in M^d_{b,n} pairing to zero with every point."""

    b: int
    d: int
    n: int
    basis: np.ndarray
    point_rank: int

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    def contains(self, vector: np.ndarray) -> bool:
        flat = np.asarray(vector, dtype=np.int64).reshape(-1) % self.b
        if self.dimension == 0:
            return not flat.any()
        stacked = np.vstack([self.basis, flat])
        return fb_rank(stacked, self.b) == self.dimension


@dataclass(frozen=True)
class NrtResult:
    value: Weight
    witness: Optional[np.ndarray]
    strategy: str


@dataclass(frozen=True)
class CharacterSum:
    """sum_p w^{e_p} kept as the histogram of exponents e_p in F_b."""

    b: int
    histogram: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.histogram)

    @property
    def is_zero(self) -> bool:
        return len(set(self.histogram)) == 1

    @property
    def is_full(self) -> bool:
        return self.histogram[0] == self.total

    @property
    def exact_value(self) -> Optional[int]:
        """Integer value when the sum is 0 or |P|, otherwise None"""
        if self.is_full:
            return self.total
        if self.is_zero:
            return 0
        return None

    def value(self) -> complex:
        roots = np.exp(2j * np.pi * np.arange(self.b) / self.b)
        return complex(np.dot(np.array(self.histogram, dtype=np.float64), roots))


@dataclass(frozen=True)
class NetReport:
    b: int
    d: int
    m: int
    depth: int
    exact_t: int
    t_bound_predicted: Optional[int]
    delta: Weight
    t_from_dual: int
    strength: int
    dual_dimension: int
    duality_consistent: bool
    dual_witness: Optional[List[List[int]]] = None
    extra: Dict[str, object] = field(default_factory=dict)


def compositions(total: int, parts: int, cap: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of ``parts`` non-negative integers summing to ``total`` (stars and bars)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        previous = -1
        out = []
        for bar in bars:
            out.append(bar - previous - 1)
            previous = bar
        out.append(total + parts - 2 - previous)
        if cap is None or max(out) <= cap:
            yield tuple(out)


def _prefix_values(points: DigitPointSet, length: int) -> List[List[np.ndarray]]:
    """prefix[j][l]: integer formed by the first l digits of coordinate j"""
    b = points.b
    prefixes = []
    for j in range(points.d):
        values = [np.zeros(points.size, dtype=np.int64)]
        for level in range(length):
            values.append(values[-1] * b + points.digits[:, j, level])
        prefixes.append(values)
    return prefixes


def is_net(points: DigitPointSet, t: int, m: Optional[int] = None, threads: Optional[int] = None) -> bool:
    """
    True iff every elementary interval of volume b^{t-m} holds exactly b^t points.

    Counting runs on digit prefixes; a size other than b^m is rejected.
    """
    b = points.b
    m = points.m if m is None else m
    if t < 0:
        raise PreconditionViolated(f"t must be non-negative, got {t}")
    if points.size != b**m:
        return False
    if t >= m:
        return True
    q = m - t
    if points.depth < q:
        raise PreconditionViolated(f"depth {points.depth} cannot resolve intervals of side b^-{q}")
    prefixes = _prefix_values(points, q)
    expected = b**t

    def check(composition: Tuple[int, ...]) -> bool:
        key = np.zeros(points.size, dtype=np.int64)
        for j, length in enumerate(composition):
            key = key * b**length + prefixes[j][length]
        counts = np.bincount(key, minlength=b**q)
        return bool((counts == expected).all())

    results = parallel_map(check, list(compositions(q, points.d)), threads)
    return all(results)


def exact_t(points: DigitPointSet, threads: Optional[int] = None) -> int:
    """Smallest t with ``is_net(points, t)``"""
    for t in range(points.m + 1):
        if is_net(points, t, threads=threads):
            return t
    raise PreconditionViolated(f"{points.size} points do not form a set of size b^{points.m}")


def dual_net(points: DigitPointSet, n: Optional[int] = None) -> DualNet:
    """Kernel of the pairing against the points truncated to ``n`` digits."""
    b = points.b
    n = points.depth if n is None else n
    if n > points.depth:
        raise PreconditionViolated(f"dual depth {n} exceeds point depth {points.depth}")
    rows = points.flat(n)
    basis = fb_row_basis(rows, b)
    rank = int(basis.shape[0])
    distinct = points.unique_count(n)
    if distinct != b**rank:
        raise NotAGroup(
            f"{distinct} distinct points at depth {n} but their span has {b**rank} elements",
            {"distinct": distinct, "span": b**rank, "depth": n},
        )
    if rank == 0:
        kernel = np.eye(points.d * n, dtype=np.int64)
    else:
        kernel = fb_nullspace_basis(basis, b)
    logger.debug(f"dual net at depth {n}: dimension {kernel.shape[0]}, point rank {rank}")
    return DualNet(b=b, d=points.d, n=n, basis=kernel, point_rank=rank)


def nrt_weights(vectors: np.ndarray, d: int, n: int) -> np.ndarray:
    """sum_j (1 + deg g_j) over nonzero coordinates, for each flattened row"""
    blocks = np.asarray(vectors).reshape(-1, d, n) != 0
    present = blocks.any(axis=2)
    highest = n - np.argmax(blocks[:, :, ::-1], axis=2)
    return np.where(present, highest, 0).sum(axis=1)


def _enumerate_weight(dual: DualNet) -> NrtResult:
    elements = fb_span(dual.basis, dual.b)[1:]
    weights = nrt_weights(elements, dual.d, dual.n)
    best = int(np.argmin(weights))
    return NrtResult(value=int(weights[best]), witness=elements[best], strategy="enumerate")


def _profile_search(dual: DualNet, budget: int) -> NrtResult:
    """
    Smallest w such that some profile (k_1..k_d) with sum k_j = w admits a nonzero dual vector
    with deg g_j < k_j; the basis combination comes from the left kernel of the excluded columns.
    """
    d, n, b = dual.d, dual.n, dual.b
    dim = dual.dimension
    tested = 0
    for w in range(1, d * n + 1):
        for profile in compositions(w, d, cap=n):
            tested += 1
            if tested > budget:
                raise BudgetExceeded(
                    f"weight-profile search exceeded {budget} profiles",
                    {"required": tested, "budget": budget},
                )
            outside = [j * n + p for j, k in enumerate(profile) for p in range(k, n)]
            block = dual.basis[:, outside]
            if outside and fb_rank(block, b) == dim:
                continue
            combination = fb_nullspace_basis(block.T, b)[0] if outside else np.eye(dim, dtype=np.int64)[0]
            witness = combination @ dual.basis % b
            return NrtResult(value=w, witness=witness, strategy="profile")
    raise PreconditionViolated("nonzero dual net without a finite weight")


def minimum_weight(dual: DualNet, enum_cap: Optional[int] = None, budget: Optional[int] = None) -> NrtResult:
    if dual.dimension == 0:
        return NrtResult(value=math.inf, witness=None, strategy="trivial")
    cap = config.DUAL_ENUM_CAP if enum_cap is None else enum_cap
    if dual.b**dual.dimension <= cap:
        return _enumerate_weight(dual)
    return _profile_search(dual, config.SCAN_BUDGET if budget is None else budget)


def min_nrt(dual: DualNet) -> Weight:
    """Minimum NRT weight over nonzero dual elements, +inf for a trivial dual"""
    return minimum_weight(dual).value


def t_from_delta(m: int, delta: Weight) -> int:
    if delta == math.inf:
        return 0
    return max(0, m - int(delta) + 1)


def nrt_lower_bound(shrink_degrees: Sequence[int], m_hat: DegValue, d: int) -> DegValue:
    """sum_j deg f_j + M + d"""
    return sum(shrink_degrees) + m_hat + d


def duality_check(
    points: DigitPointSet,
    t_bound: Optional[int] = None,
    threads: Optional[int] = None,
) -> NetReport:
    """t from interval counting against t = m - delta + 1 from the dual net."""
    t_count = exact_t(points, threads)
    dual = dual_net(points)
    nrt = minimum_weight(dual)
    t_dual = t_from_delta(points.m, nrt.value)
    consistent = t_count == t_dual and (t_bound is None or t_count <= t_bound)
    witness = None
    if nrt.witness is not None:
        witness = np.asarray(nrt.witness).reshape(points.d, points.depth).tolist()
    report = NetReport(
        b=points.b,
        d=points.d,
        m=points.m,
        depth=points.depth,
        exact_t=t_count,
        t_bound_predicted=t_bound,
        delta=nrt.value,
        t_from_dual=t_dual,
        strength=points.m - t_count,
        dual_dimension=dual.dimension,
        duality_consistent=consistent,
        dual_witness=witness,
        extra={"nrt_strategy": nrt.strategy},
    )
    logger.info(
        "duality check finished",
        extra={"fields": {"m": points.m, "t": t_count, "delta": str(nrt.value), "consistent": consistent}},
    )
    return report


def flatten_dual_vector(g: Sequence[FbPoly], n: int) -> np.ndarray:
    """Coefficient vector of (g_1..g_d) with deg g_j < n"""
    out = np.zeros((len(g), n), dtype=np.int64)
    for j, poly in enumerate(g):
        if poly.is_zero:
            continue
        if poly.degree >= n:
            raise PreconditionViolated(f"coordinate {j} has degree {poly.degree}, limit is {n - 1}")
        out[j, : len(poly.coeffs)] = poly.coeffs
    return out.reshape(-1)


def character_sum(
    points: DigitPointSet,
    g: Union[Sequence[FbPoly], np.ndarray],
    threads: Optional[int] = None,
) -> CharacterSum:
    """sum_{p in P} w_b^{res(p . g)} as an exponent histogram"""
    b = points.b
    if isinstance(g, np.ndarray):
        vector = g.reshape(-1) % b
        if vector.size != points.d * points.depth:
            raise PreconditionViolated("character vector does not match the point layout")
    else:
        vector = flatten_dual_vector(g, points.depth)
    chunks = np.array_split(points.flat(), max(1, min(points.size // 4096, 16)))

    def count(chunk: np.ndarray) -> np.ndarray:
        exponents = chunk @ vector % b
        return np.bincount(exponents, minlength=b)

    histogram = np.sum(parallel_map(count, chunks, threads), axis=0)
    return CharacterSum(b=b, histogram=tuple(int(c) for c in histogram))
