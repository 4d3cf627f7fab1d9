"""
Exact arithmetic in F_b, F_b[x] and truncated Laurent series F_b((x^{-1})).

A series is stored as a dense coefficient window. ``start`` is the index w of the first
stored coefficient (the series is sum_{i >= w} c_i x^{-i}) and ``prec`` is the largest index
whose coefficient is known. ``prec=None`` marks an exact series with finitely many terms.
Precision is propagated by every operation so that no returned coefficient is ever a guess.
"""
import functools
import itertools
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from laurentnet.core.errors import (
    DivideByZero,
    InvalidModulus,
    ModulusMismatch,
    NonConvergent,
    ParseError,
    PrecisionExhausted,
    PreconditionViolated,
)

logger = logging.getLogger(__name__)

NEG_INF = -math.inf
DegValue = Union[int, float]
FbElem = int

_EMPTY = np.zeros(0, dtype=np.int64)
_EMPTY.setflags(write=False)


def is_prime(n: int) -> bool:
    """Trial division primality test"""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class FieldContext:
    """The prime field F_b shared by every value built over it."""

    b: int

    def __post_init__(self):
        if not isinstance(self.b, int) or not is_prime(self.b):
            raise InvalidModulus(f"b must be a prime, got {self.b!r}", {"b": self.b})

    def inverse(self, a: int) -> int:
        a %= self.b
        if a == 0:
            raise DivideByZero("inverse of 0 in F_b")
        return pow(a, -1, self.b)

    def check(self, other: "FieldContext") -> None:
        if other.b != self.b:
            raise ModulusMismatch(f"cannot combine values over F_{self.b} and F_{other.b}")


@functools.lru_cache(maxsize=None)
def get_context(b: int) -> FieldContext:
    return FieldContext(b)


def _frozen(values, b: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64).ravel() % b
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# human-readable text forms

_TERM = re.compile(r"^(?P<coef>\d+)?(?:\*?(?P<x>x)(?:\^(?:(?P<exp>-?\d+)|\((?P<pexp>-?\d+)\)))?)?$")


def _parse_terms(b: int, text: str) -> Tuple[Dict[int, int], bool]:
    """Parse ``x^2 + 2*x^-1 + ...`` into {exponent: coefficient} and a truncation flag"""
    compact = text.replace(" ", "")
    if not compact:
        raise ParseError("empty expression")
    terms: Dict[int, int] = {}
    truncated = False
    for token in re.split(r"(?<![\^(])(?=[+-])", compact):
        if not token:
            continue
        sign = 1
        while token and token[0] in "+-":
            if token[0] == "-":
                sign = -sign
            token = token[1:]
        if token == "...":
            truncated = True
            continue
        match = _TERM.match(token)
        if not match or (match.group("coef") is None and match.group("x") is None):
            raise ParseError(f"cannot parse term {token!r} in {text!r}")
        coef = int(match.group("coef")) if match.group("coef") is not None else 1
        if match.group("x") is None:
            exponent = 0
        else:
            exp = match.group("exp") or match.group("pexp")
            exponent = 1 if exp is None else int(exp)
        terms[exponent] = (terms.get(exponent, 0) + sign * coef) % b
    return terms, truncated


def _format_terms(pairs: Sequence[Tuple[int, int]], truncated: bool) -> str:
    parts = []
    for exponent, coef in pairs:
        if coef == 0:
            continue
        if exponent == 0:
            parts.append(str(coef))
            continue
        mono = "x" if exponent == 1 else f"x^{exponent}"
        parts.append(mono if coef == 1 else f"{coef}*{mono}")
    if not parts:
        parts.append("0")
    if truncated:
        parts.append("...")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# F_b[x]


class FbPoly:
    """Polynomial over F_b with coefficients in ascending powers of x."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: Sequence[int] = ()):
        arr = np.asarray(coeffs, dtype=np.int64).ravel() % ctx.b
        nonzero = np.flatnonzero(arr)
        arr = arr[: nonzero[-1] + 1] if nonzero.size else arr[:0]
        self.ctx = ctx
        self.coeffs = _frozen(arr, ctx.b)

    @classmethod
    def zero(cls, ctx: FieldContext) -> "FbPoly":
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: FieldContext) -> "FbPoly":
        return cls(ctx, (1,))

    @classmethod
    def monomial(cls, ctx: FieldContext, k: int, c: int = 1) -> "FbPoly":
        coeffs = [0] * (k + 1)
        coeffs[k] = c
        return cls(ctx, coeffs)

    @classmethod
    def from_int(cls, ctx: FieldContext, value: int) -> "FbPoly":
        """Polynomial whose coefficients are the base-b digits of ``value`` (c_0 least significant)"""
        digits = []
        while value:
            value, digit = divmod(value, ctx.b)
            digits.append(digit)
        return cls(ctx, digits)

    @classmethod
    def iter_below(cls, ctx: FieldContext, n: int) -> Iterator["FbPoly"]:
        """All polynomials of degree < n, ordered by their integer encoding."""
        for digits in itertools.product(range(ctx.b), repeat=n):
            yield cls(ctx, digits[::-1])

    @classmethod
    def parse(cls, ctx: FieldContext, text: str) -> "FbPoly":
        terms, truncated = _parse_terms(ctx.b, text)
        if truncated or any(e < 0 for e in terms):
            raise ParseError(f"{text!r} is not a polynomial in x")
        if not terms:
            return cls.zero(ctx)
        coeffs = [0] * (max(terms) + 1)
        for exponent, coef in terms.items():
            coeffs[exponent] = coef
        return cls(ctx, coeffs)

    @property
    def degree(self) -> DegValue:
        return len(self.coeffs) - 1 if len(self.coeffs) else NEG_INF

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def to_int(self) -> int:
        value = 0
        for c in self.coeffs[::-1]:
            value = value * self.ctx.b + int(c)
        return value

    def to_series(self) -> "LaurentSeries":
        if self.is_zero:
            return LaurentSeries.zero(self.ctx)
        return LaurentSeries(self.ctx, -(len(self.coeffs) - 1), self.coeffs[::-1])

    def _coerce(self, other) -> Optional["FbPoly"]:
        if isinstance(other, FbPoly):
            self.ctx.check(other.ctx)
            return other
        if isinstance(other, (int, np.integer)):
            return FbPoly(self.ctx, (int(other),))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(n, dtype=np.int64)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] += other.coeffs
        return FbPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "FbPoly":
        return FbPoly(self.ctx, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return FbPoly.zero(self.ctx)
        return FbPoly(self.ctx, np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.ctx.b, tuple(int(c) for c in self.coeffs)))

    def __str__(self) -> str:
        pairs = [(k, int(c)) for k, c in enumerate(self.coeffs)][::-1]
        return _format_terms(pairs, truncated=False)

    def __repr__(self) -> str:
        return f"FbPoly(b={self.ctx.b}, {self})"


# ---------------------------------------------------------------------------
# F_b((x^{-1}))


def _unit_series_inverse(unit: np.ndarray, n: int, b: int) -> np.ndarray:
    """Inverse of a power series with constant term 1, modulo z^n (Newton iteration)."""
    h = np.ones(1, dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        uh = np.convolve(unit[:k], h)[:k] % b
        correction = (-uh) % b
        correction[0] = (correction[0] + 2) % b
        h = np.convolve(h, correction)[:k] % b
    return h[:n]


class LaurentSeries:
    """Truncated (or exact) element of F_b((x^{-1})) with tracked absolute precision."""

    __slots__ = ("ctx", "_start", "_coeffs", "_prec")

    def __init__(
        self,
        ctx: FieldContext,
        start: int,
        coeffs: Sequence[int] = (),
        prec: Optional[int] = None,
    ):
        start = int(start)
        arr = np.asarray(coeffs, dtype=np.int64).ravel() % ctx.b
        if prec is not None:
            prec = int(prec)
            known = prec - start + 1
            if known <= 0:
                arr = arr[:0]
            elif arr.size > known:
                arr = arr[:known]
            elif arr.size < known:
                arr = np.concatenate([arr, np.zeros(known - arr.size, dtype=np.int64)])
        nonzero = np.flatnonzero(arr)
        if nonzero.size == 0:
            arr = arr[:0]
            start = prec + 1 if prec is not None else 0
        else:
            first = int(nonzero[0])
            arr = arr[first:] if prec is not None else arr[first : nonzero[-1] + 1]
            start += first
        self.ctx = ctx
        self._start = start
        self._coeffs = _frozen(arr, ctx.b) if arr.size else _EMPTY
        self._prec = prec

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldContext, prec: Optional[int] = None) -> "LaurentSeries":
        return cls(ctx, 0, (), prec)

    @classmethod
    def one(cls, ctx: FieldContext) -> "LaurentSeries":
        return cls(ctx, 0, (1,))

    @classmethod
    def constant(cls, ctx: FieldContext, c: int) -> "LaurentSeries":
        return cls(ctx, 0, (c,))

    @classmethod
    def monomial(cls, ctx: FieldContext, exponent: int, coeff: int = 1) -> "LaurentSeries":
        """coeff * x^exponent, exact"""
        return cls(ctx, -exponent, (coeff,))

    @classmethod
    def from_terms(
        cls, ctx: FieldContext, terms: Dict[int, int], prec: Optional[int] = None
    ) -> "LaurentSeries":
        """Build from {exponent: coefficient}; ``prec`` truncates (absolute index of x^{-prec})."""
        if not terms:
            return cls.zero(ctx, prec)
        indices = {-e: c for e, c in terms.items()}
        lo, hi = min(indices), max(indices)
        arr = np.zeros(hi - lo + 1, dtype=np.int64)
        for i, c in indices.items():
            arr[i - lo] += c
        return cls(ctx, lo, arr, prec)

    @classmethod
    def parse(cls, ctx: FieldContext, text: str, prec: Optional[int] = None) -> "LaurentSeries":
        """
        Parse the human form, e.g. ``x^2 + 2*x^-1 + ...``.

        A trailing ``...`` marks a truncated value; its precision must then be supplied.
        """
        terms, truncated = _parse_terms(ctx.b, text)
        if truncated and prec is None:
            raise ParseError(f"truncated expression {text!r} needs an explicit precision")
        return cls.from_terms(ctx, terms, prec if truncated else None)

    @classmethod
    def from_text(cls, text: str) -> "LaurentSeries":
        """Parse the canonical text form ``b; w; c_w c_{w+1} ... [...]``"""
        parts = text.split(";", 2)
        if len(parts) != 3:
            raise ParseError(f"expected 'b; w; coefficients', got {text!r}")
        try:
            b = int(parts[0])
            start = int(parts[1])
        except ValueError:
            raise ParseError(f"invalid header in {text!r}")
        tokens = parts[2].split()
        truncated = bool(tokens) and tokens[-1] == "..."
        if truncated:
            tokens = tokens[:-1]
        try:
            coeffs = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(f"invalid coefficient in {text!r}")
        if any(c < 0 or c >= b for c in coeffs):
            raise ParseError(f"coefficient out of range for b={b} in {text!r}")
        ctx = get_context(b)
        prec = start + len(coeffs) - 1 if truncated else None
        return cls(ctx, start, coeffs, prec)

    # -- inspection ---------------------------------------------------------

    @property
    def b(self) -> int:
        return self.ctx.b

    @property
    def prec(self) -> Optional[int]:
        """Largest index i whose coefficient of x^{-i} is known; None for exact values"""
        return self._prec

    @property
    def is_exact(self) -> bool:
        return self._prec is None

    @property
    def is_zero(self) -> bool:
        """True for exact zero and for series that are zero up to precision"""
        return self._coeffs.size == 0

    @property
    def lead_exp(self) -> Optional[int]:
        if self._coeffs.size:
            return self._start
        return None if self._prec is None else self._prec + 1

    @property
    def deg(self) -> DegValue:
        return -self._start if self._coeffs.size else NEG_INF

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def known(self) -> float:
        return math.inf if self._prec is None else self._prec

    def _lead(self) -> float:
        if self._coeffs.size:
            return self._start
        return math.inf if self._prec is None else self._prec + 1

    def _end(self) -> int:
        return self._start + self._coeffs.size - 1

    def coefficient(self, i: int) -> int:
        """Coefficient of x^{-i}"""
        if i > self.known:
            raise PrecisionExhausted(
                f"coefficient of x^-{i} requested but only known through x^-{self._prec}",
                {"index": i, "prec": self._prec},
            )
        if not self._coeffs.size or i < self._start or i > self._end():
            return 0
        return int(self._coeffs[i - self._start])

    def digits(self, n: int) -> np.ndarray:
        """Digits c_1..c_n of a series in the digital unit cube"""
        if self._coeffs.size and self._start < 1:
            raise PreconditionViolated(f"series of degree {self.deg} is not in the unit cube")
        if n > self.known:
            raise PrecisionExhausted(
                f"{n} digits requested but only {self._prec} are known",
                {"depth": n, "prec": self._prec},
            )
        out = np.zeros(n, dtype=np.int64)
        if self._coeffs.size and self._start <= n:
            hi = min(n, self._end())
            out[self._start - 1 : hi] = self._coeffs[: hi - self._start + 1]
        return out

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Optional["LaurentSeries"]:
        if isinstance(other, LaurentSeries):
            self.ctx.check(other.ctx)
            return other
        if isinstance(other, FbPoly):
            self.ctx.check(other.ctx)
            return other.to_series()
        if isinstance(other, (int, np.integer)):
            return LaurentSeries.constant(self.ctx, int(other))
        return None

    def _add(self, other: "LaurentSeries") -> "LaurentSeries":
        b = self.ctx.b
        known = min(self.known, other.known)
        prec = None if known == math.inf else int(known)
        parts = [s for s in (self, other) if s._coeffs.size]
        if not parts:
            return LaurentSeries.zero(self.ctx, prec)
        lo = min(s._start for s in parts)
        hi = max(s._end() for s in parts) if prec is None else prec
        if hi < lo:
            return LaurentSeries.zero(self.ctx, prec)
        out = np.zeros(hi - lo + 1, dtype=np.int64)
        for s in parts:
            seg = s._coeffs[: max(0, hi - s._start + 1)]
            if seg.size:
                out[s._start - lo : s._start - lo + seg.size] += seg
        return LaurentSeries(self.ctx, lo, out % b, prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(other)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.ctx, self._start, -self._coeffs, self._prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._add(-self)

    def _mul(self, other: "LaurentSeries") -> "LaurentSeries":
        b = self.ctx.b
        if (self.is_exact and self.is_zero) or (other.is_exact and other.is_zero):
            return LaurentSeries.zero(self.ctx)
        w_f, w_g = self._lead(), other._lead()
        known = min(self.known + w_g, other.known + w_f)
        if not self._coeffs.size or not other._coeffs.size:
            return LaurentSeries.zero(self.ctx, int(known))
        start = self._start + other._start
        if known == math.inf:
            return LaurentSeries(self.ctx, start, np.convolve(self._coeffs, other._coeffs) % b)
        n = int(known) - start + 1
        if n <= 0:
            raise PrecisionExhausted(
                "product of nonzero series has no known coefficient",
                {"lead_index": start, "prec": int(known)},
            )
        product = np.convolve(self._coeffs[:n], other._coeffs[:n])[:n] % b
        return LaurentSeries(self.ctx, start, product, int(known))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._mul(inv(other, prec=_quotient_target(self, other)))

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        k = int(k)
        if k < 0:
            return inv(self) ** (-k)
        result = LaurentSeries.one(self.ctx)
        base = self
        while k:
            k, digit = divmod(k, self.ctx.b)
            for _ in range(digit):
                result = result._mul(base)
            if k:
                base = base.frobenius()
        return result

    def scale(self, c: int) -> "LaurentSeries":
        return LaurentSeries(self.ctx, self._start, self._coeffs * (c % self.ctx.b), self._prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by x^k"""
        if self.is_zero:
            return LaurentSeries.zero(self.ctx, None if self._prec is None else self._prec - k)
        return LaurentSeries(
            self.ctx, self._start - k, self._coeffs, None if self._prec is None else self._prec - k
        )

    def with_prec(self, prec: int) -> "LaurentSeries":
        """Forget every coefficient beyond index ``prec``"""
        if prec >= self.known:
            return self
        return LaurentSeries(self.ctx, self._start, self._coeffs, prec)

    def frobenius(self) -> "LaurentSeries":
        """f^b: in characteristic b the coefficient of x^{-i} moves to x^{-bi}."""
        b = self.ctx.b
        prec = None if self._prec is None else b * (self._prec + 1) - 1
        if not self._coeffs.size:
            return LaurentSeries.zero(self.ctx, prec)
        spread = np.zeros(b * (self._coeffs.size - 1) + 1, dtype=np.int64)
        spread[::b] = self._coeffs
        return LaurentSeries(self.ctx, b * self._start, spread, prec)

    def frac_part(self) -> "LaurentSeries":
        """g - ceil(g): the part of degree < 0"""
        if not self._coeffs.size or self._start >= 1:
            return self
        return LaurentSeries(self.ctx, 1, self._coeffs[1 - self._start :], self._prec)

    # -- comparison and text --------------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def to_text(self) -> str:
        body = " ".join(str(int(c)) for c in self._coeffs)
        if self.is_exact:
            start = self._start if self._coeffs.size else 0
            return f"{self.b}; {start}; {body}".rstrip()
        tail = f"{body} ..." if body else "..."
        return f"{self.b}; {self.lead_exp}; {tail}"

    def __str__(self) -> str:
        pairs = [(-(self._start + k), int(c)) for k, c in enumerate(self._coeffs)]
        return _format_terms(pairs, truncated=not self.is_exact)

    def __repr__(self) -> str:
        return f"LaurentSeries({self.to_text()!r})"


def _quotient_target(num: LaurentSeries, den: LaurentSeries) -> Optional[int]:
    """Inverse precision needed so that num/den keeps the precision of num."""
    if not den.is_exact or num.is_exact:
        return None
    deg_num = num.deg if num.deg != NEG_INF else 0
    return int(num.known + den.deg + max(deg_num, 0)) + 1


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class PhiValue:
    """Truncated digit expansion sum c_i b^{-i} as numerator / b^n"""

    numerator: int
    denominator: int

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def deg(f: LaurentSeries) -> DegValue:
    return f.deg


def add(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    f.ctx.check(g.ctx)
    return f + g


def mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    f.ctx.check(g.ctx)
    return f * g


def inv(f: LaurentSeries, prec: Optional[int] = None) -> LaurentSeries:
    """
    Multiplicative inverse.

    The relative precision of ``f`` is preserved, so a truncated ``f`` known through
    x^{-p} yields an inverse known through x^{-(p + 2 deg f)}. Exact monomials invert
    exactly; any other exact value needs the target precision ``prec``.
    """
    ctx = f.ctx
    if f.is_zero:
        raise DivideByZero("inverse of a series that is zero up to precision", {"prec": f.prec})
    w = f._start
    lead_inverse = ctx.inverse(int(f._coeffs[0]))
    if f.is_exact and f._coeffs.size == 1:
        return LaurentSeries(ctx, -w, (lead_inverse,))
    if f.is_exact:
        if prec is None:
            raise PreconditionViolated("inverse of an exact non-monomial needs a target precision")
        target = int(prec)
    else:
        target = f.prec - 2 * w
        if prec is not None:
            target = min(target, int(prec))
    n = target + w + 1
    if n <= 0:
        raise PrecisionExhausted("inverse has no known coefficient", {"target": target})
    unit = f._coeffs[:n] * lead_inverse % ctx.b
    h = _unit_series_inverse(unit, n, ctx.b)
    return LaurentSeries(ctx, -w, h * lead_inverse % ctx.b, target)


def poly_part(g: LaurentSeries) -> FbPoly:
    """ceil(g): the terms of non-negative degree"""
    if g.known < 0:
        raise PrecisionExhausted("polynomial part needs the x^0 coefficient", {"prec": g.prec})
    if not g._coeffs.size or g._start > 0:
        return FbPoly.zero(g.ctx)
    window = np.zeros(1 - g._start, dtype=np.int64)
    head = g._coeffs[: 1 - g._start]
    window[: head.size] = head
    return FbPoly(g.ctx, window[::-1])


def res(f: LaurentSeries) -> FbElem:
    if f.known < 1:
        raise PrecisionExhausted("residue needs the x^-1 coefficient", {"prec": f.prec})
    return f.coefficient(1)


def truncate(f: LaurentSeries, n: int) -> LaurentSeries:
    """tr_n: keep digits c_1..c_n as an exact series"""
    return LaurentSeries(f.ctx, 1, f.digits(n))


def phi_n(f: LaurentSeries, n: int) -> PhiValue:
    numerator = 0
    for c in f.digits(n):
        numerator = numerator * f.b + int(c)
    return PhiValue(numerator, f.b**n)


def frobenius_sum(h: LaurentSeries, prec_target: int) -> LaurentSeries:
    """
    sum_{i >= 0} h^{b^i}, known through x^{-prec_target} (or the precision of h if lower).

    Raises NonConvergent unless deg h < 0.
    """
    known = prec_target if h.is_exact else min(prec_target, h.prec)
    if h.is_zero:
        return LaurentSeries.zero(h.ctx, None if h.is_exact else known)
    if h._start <= 0:
        raise NonConvergent(f"frobenius sum needs deg h < 0, got {h.deg}", {"deg": h.deg})
    total = LaurentSeries.zero(h.ctx)
    term = h.with_prec(known)
    while term._lead() <= known:
        total = total + term
        term = term.frobenius().with_prec(known)
    return total.with_prec(known)
