"""
Dense matrices over truncated Laurent series, and the L'Q decomposition
T = L'Q with L' lower triangular, Q over F_b[[x^{-1}]] and det Q = 1.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from laurentnet.core import config
from laurentnet.core.algebra import (
    NEG_INF,
    DegValue,
    FbPoly,
    FieldContext,
    LaurentSeries,
    get_context,
    inv,
)
from laurentnet.core.errors import DimensionMismatch, ParseError, Singular

logger = logging.getLogger(__name__)

Entry = Union[LaurentSeries, FbPoly, int]


class LaurentMatrix:
    """Immutable rectangular matrix of LaurentSeries over one field context."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: FieldContext, rows: Sequence[Sequence[Entry]]):
        built = []
        width = None
        for row in rows:
            cells = []
            for entry in row:
                if isinstance(entry, LaurentSeries):
                    ctx.check(entry.ctx)
                elif isinstance(entry, FbPoly):
                    ctx.check(entry.ctx)
                    entry = entry.to_series()
                else:
                    entry = LaurentSeries.constant(ctx, int(entry))
                cells.append(entry)
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise DimensionMismatch("matrix rows have different lengths")
            built.append(tuple(cells))
        self.ctx = ctx
        self.rows: Tuple[Tuple[LaurentSeries, ...], ...] = tuple(built)

    @classmethod
    def identity(cls, ctx: FieldContext, d: int) -> "LaurentMatrix":
        return cls(ctx, [[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @classmethod
    def diag(cls, ctx: FieldContext, entries: Sequence[Entry]) -> "LaurentMatrix":
        d = len(entries)
        return cls(ctx, [[entries[i] if i == j else 0 for j in range(d)] for i in range(d)])

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def nrows(self) -> int:
        return self.shape[0]

    @property
    def ncols(self) -> int:
        return self.shape[1]

    def __getitem__(self, index: Tuple[int, int]) -> LaurentSeries:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[LaurentSeries, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(self.ctx, [self.column(j) for j in range(self.ncols)])

    @property
    def min_prec(self) -> Optional[int]:
        """Smallest precision among truncated entries; None when every entry is exact"""
        precisions = [e.prec for row in self.rows for e in row if not e.is_exact]
        return min(precisions) if precisions else None

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    __hash__ = None

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "b": self.ctx.b,
            "rows": self.nrows,
            "cols": self.ncols,
            "precision": self.min_prec,
            "entries": [[e.to_text() for e in row] for row in self.rows],
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "LaurentMatrix":
        try:
            b = int(data["b"])
            entries = data["entries"]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"invalid matrix JSON: {e}")
        ctx = get_context(b)
        rows = [[LaurentSeries.from_text(text) for text in row] for row in entries]
        for row in rows:
            for entry in row:
                ctx.check(entry.ctx)
        return cls(ctx, rows)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"LaurentMatrix(b={self.ctx.b}, [{body}])"


@dataclass(frozen=True)
class LQFactors:
    lprime: LaurentMatrix
    q: LaurentMatrix
    qinv: LaurentMatrix
    swaps: int

    @property
    def min_prec(self) -> Optional[int]:
        precisions = [m.min_prec for m in (self.lprime, self.q, self.qinv) if m.min_prec is not None]
        return min(precisions) if precisions else None

    def diagonal_degrees(self) -> Tuple[DegValue, ...]:
        return tuple(self.lprime[j, j].deg for j in range(self.lprime.nrows))


def _zero(ctx: FieldContext) -> LaurentSeries:
    return LaurentSeries.zero(ctx)


def mat_mul(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    a.ctx.check(b.ctx)
    if a.ncols != b.nrows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    rows = []
    for i in range(a.nrows):
        row = []
        for j in range(b.ncols):
            acc = _zero(a.ctx)
            for k in range(a.ncols):
                acc = acc + a.rows[i][k] * b.rows[k][j]
            row.append(acc)
        rows.append(row)
    return LaurentMatrix(a.ctx, rows)


def mat_vec(a: LaurentMatrix, v: Sequence[Entry]) -> Tuple[LaurentSeries, ...]:
    if a.ncols != len(v):
        raise DimensionMismatch(f"cannot multiply {a.shape} matrix by vector of length {len(v)}")
    out = []
    for row in a.rows:
        acc = _zero(a.ctx)
        for entry, value in zip(row, v):
            acc = acc + entry * value
        out.append(acc)
    return tuple(out)


def _exact_fallback(t: LaurentMatrix, prec: Optional[int]) -> int:
    if prec is not None:
        return prec
    if t.min_prec is not None:
        return t.min_prec
    return 2 * config.MIN_PRECISION


def lq_decompose(t: LaurentMatrix, prec: Optional[int] = None) -> LQFactors:
    """
    Column reduction T U = L' with U in GL_d(F_b[[x^{-1}]]), returning Q = U^{-1}.

    For row i the pivot is the entry of maximal degree among columns i..d-1 (ties go to the
    smallest column). The quotient T[i,j]/T[i,i] then has degree <= 0, which keeps Q in the
    valuation ring. The sign of the column permutation is absorbed into column 0 of L' so
    that det Q = 1. ``prec`` sets the inverse precision for exact non-monomial pivots.
    """
    ctx = t.ctx
    d = t.nrows
    if t.ncols != d:
        raise DimensionMismatch(f"L'Q decomposition needs a square matrix, got {t.shape}")
    fallback = _exact_fallback(t, prec)

    work: List[List[LaurentSeries]] = [list(row) for row in t.rows]
    q: List[List[LaurentSeries]] = [list(row) for row in LaurentMatrix.identity(ctx, d).rows]
    qinv: List[List[LaurentSeries]] = [list(row) for row in LaurentMatrix.identity(ctx, d).rows]
    swaps = 0

    for i in range(d):
        degrees = [work[i][j].deg for j in range(i, d)]
        best = max(degrees)
        if best == NEG_INF:
            raise Singular(
                f"row {i} has no nonzero pivot within precision; higher precision may resolve it",
                {"row": i, "prec": t.min_prec},
            )
        p = i + degrees.index(best)
        if p != i:
            for row in work:
                row[i], row[p] = row[p], row[i]
            for row in qinv:
                row[i], row[p] = row[p], row[i]
            q[i], q[p] = q[p], q[i]
            swaps += 1

        pivot = work[i][i]
        pivot_inverse = inv(pivot, prec=fallback if pivot.is_exact else None)
        for j in range(i + 1, d):
            entry = work[i][j]
            if entry.is_exact and entry.is_zero:
                continue
            c = entry * pivot_inverse
            for r in range(i + 1, d):
                work[r][j] = work[r][j] - c * work[r][i]
            work[i][j] = _zero(ctx)
            q[i] = [q[i][k] + c * q[j][k] for k in range(d)]
            for row in qinv:
                row[j] = row[j] - c * row[i]

    u = 1 if swaps % 2 == 0 else ctx.b - 1
    if u != 1:
        for row in work:
            row[0] = row[0].scale(u)
        for row in qinv:
            row[0] = row[0].scale(u)
        q[0] = [entry.scale(ctx.inverse(u)) for entry in q[0]]

    factors = LQFactors(
        lprime=LaurentMatrix(ctx, work),
        q=LaurentMatrix(ctx, q),
        qinv=LaurentMatrix(ctx, qinv),
        swaps=swaps,
    )
    logger.debug(f"L'Q decomposition d={d} swaps={swaps} min_prec={factors.min_prec}")
    return factors


def lower_triangular_inverse(l: LaurentMatrix, prec: Optional[int] = None) -> LaurentMatrix:
    """Forward substitution for a lower triangular matrix with nonzero diagonal."""
    ctx = l.ctx
    d = l.nrows
    fallback = _exact_fallback(l, prec)
    x: List[List[LaurentSeries]] = [[_zero(ctx) for _ in range(d)] for _ in range(d)]
    for i in range(d):
        diagonal = l[i, i]
        if diagonal.is_zero:
            raise Singular(f"zero diagonal entry {i} in triangular matrix", {"row": i})
        x[i][i] = inv(diagonal, prec=fallback if diagonal.is_exact else None)
    for i in range(d):
        for j in range(i):
            acc = _zero(ctx)
            for k in range(j, i):
                acc = acc + l[i, k] * x[k][j]
            x[i][j] = -(x[i][i] * acc)
    return LaurentMatrix(ctx, x)


def mat_inverse(a: LaurentMatrix, prec: Optional[int] = None) -> LaurentMatrix:
    """A^{-1} = Q^{-1} L'^{-1}"""
    factors = lq_decompose(a, prec)
    return mat_mul(factors.qinv, lower_triangular_inverse(factors.lprime, prec))


def det_degree(t: LaurentMatrix) -> DegValue:
    return sum(lq_decompose(t).diagonal_degrees())


def mat_det(t: LaurentMatrix) -> LaurentSeries:
    """det T = product of the diagonal of L' (det Q = 1)"""
    factors = lq_decompose(t)
    result = LaurentSeries.one(t.ctx)
    for j in range(t.nrows):
        result = result * factors.lprime[j, j]
    return result
