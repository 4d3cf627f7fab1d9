from fractions import Fraction

import numpy as np
import pytest

from laurentnet.core.algebra import (
    FbPoly,
    FieldContext,
    LaurentSeries,
    add,
    deg,
    frobenius_sum,
    get_context,
    inv,
    mul,
    phi_n,
    poly_part,
    res,
    truncate,
)
from laurentnet.core.errors import (
    DivideByZero,
    InvalidModulus,
    ModulusMismatch,
    NonConvergent,
    ParseError,
    PrecisionExhausted,
    PreconditionViolated,
)


def test_non_prime_modulus_is_rejected():
    with pytest.raises(InvalidModulus):
        FieldContext(4)
    with pytest.raises(InvalidModulus):
        get_context(1)


def test_mixing_fields_raises(ctx2, ctx3):
    with pytest.raises(ModulusMismatch):
        LaurentSeries.one(ctx2) + LaurentSeries.one(ctx3)


def test_product_precision_follows_leading_degrees(ctx2):
    f = LaurentSeries(ctx2, 1, [1], prec=10)
    g = LaurentSeries.monomial(ctx2, 2)
    product = f * g
    assert product.prec == 8
    assert product.deg == 1


def test_inverse_keeps_relative_precision(ctx2):
    # x^2 known through x^-10 inverts to x^-2 known through x^-14
    f = LaurentSeries(ctx2, -2, [1], prec=10)
    g = inv(f)
    assert g.prec == 14
    assert g.deg == -2
    assert f * g == LaurentSeries.one(ctx2)


def test_inverse_of_exact_non_monomial_needs_target(ctx2):
    f = LaurentSeries.parse(ctx2, "1 + x^-1")
    with pytest.raises(PreconditionViolated):
        inv(f)
    g = inv(f, prec=10)
    assert g.prec == 10
    assert f * g == LaurentSeries.one(ctx2)


def test_inverse_of_zero(ctx2):
    with pytest.raises(DivideByZero):
        inv(LaurentSeries.zero(ctx2))
    with pytest.raises(DivideByZero):
        inv(LaurentSeries.zero(ctx2, prec=5))


def test_frobenius_precision(ctx2):
    f = LaurentSeries(ctx2, 1, [1, 1], prec=5)
    assert f.frobenius().prec == 11
    assert f.frobenius() == f * f


def test_power_is_frobenius_in_characteristic(ctx2, ctx3):
    assert LaurentSeries.parse(ctx2, "x + 1") ** 2 == LaurentSeries.parse(ctx2, "x^2 + 1")
    assert LaurentSeries.parse(ctx3, "x + 1") ** 3 == LaurentSeries.parse(ctx3, "x^3 + 1")


def test_frobenius_sum_of_x_inverse(ctx2):
    xi = frobenius_sum(LaurentSeries.monomial(ctx2, -1), 20)
    assert xi.prec == 20
    for i in range(1, 21):
        assert xi.coefficient(i) == (1 if i in (1, 2, 4, 8, 16) else 0)
    # xi^2 - xi + x^-1 = 0
    assert xi * xi - xi + LaurentSeries.monomial(ctx2, -1) == LaurentSeries.zero(ctx2)


def test_frobenius_sum_needs_negative_degree(ctx2):
    with pytest.raises(NonConvergent):
        frobenius_sum(LaurentSeries.one(ctx2), 10)


def test_equality_is_up_to_precision(ctx2):
    truncated = LaurentSeries.parse(ctx2, "x^-1 + ...", prec=3)
    assert truncated == LaurentSeries.parse(ctx2, "x^-1 + x^-5")
    assert truncated != LaurentSeries.parse(ctx2, "x^-1 + x^-2")
    with pytest.raises(TypeError):
        hash(truncated)


def test_parse_human_form(ctx3):
    f = LaurentSeries.parse(ctx3, "2*x^2 + x^-1")
    assert f.is_exact
    assert f.deg == 2
    assert f.coefficient(-2) == 2
    assert f.coefficient(1) == 1
    assert f.coefficient(0) == 0


def test_truncated_text_needs_precision(ctx2):
    with pytest.raises(ParseError):
        LaurentSeries.parse(ctx2, "x + ...")
    with pytest.raises(ParseError):
        LaurentSeries.parse(ctx2, "x + y")


def test_canonical_text_keeps_precision(ctx3):
    f = LaurentSeries.parse(ctx3, "x + 2 + x^-2 + ...", prec=6)
    assert f.to_text() == "3; -1; 1 2 0 1 0 0 0 0 ..."
    g = LaurentSeries.from_text(f.to_text())
    assert g == f
    assert g.prec == 6


def test_coefficient_beyond_precision(ctx2):
    f = LaurentSeries(ctx2, 1, [1], prec=3)
    with pytest.raises(PrecisionExhausted):
        f.coefficient(4)
    with pytest.raises(PrecisionExhausted):
        f.digits(5)


def test_polynomial_part_residue_and_digits(ctx2):
    g = LaurentSeries.parse(ctx2, "x + 1 + x^-1 + x^-3")
    assert poly_part(g) == FbPoly.parse(ctx2, "x + 1")
    assert res(g) == 1
    frac = g.frac_part()
    assert frac == LaurentSeries.parse(ctx2, "x^-1 + x^-3")
    value = phi_n(frac, 3)
    assert str(value) == "5/8"
    assert value.as_fraction() == Fraction(5, 8)
    assert truncate(frac, 2) == LaurentSeries.monomial(ctx2, -1)
    with pytest.raises(PreconditionViolated):
        g.digits(3)


def test_fbpoly_integer_encoding(ctx2):
    assert FbPoly.from_int(ctx2, 6) == FbPoly.parse(ctx2, "x^2 + x")
    assert FbPoly.from_int(ctx2, 6).to_int() == 6
    assert [p.to_int() for p in FbPoly.iter_below(ctx2, 2)] == [0, 1, 2, 3]
    assert FbPoly.zero(ctx2).degree == float("-inf")


def test_fbpoly_arithmetic(ctx3):
    a = FbPoly.parse(ctx3, "x + 1")
    b = FbPoly.parse(ctx3, "x + 2")
    assert a * b == FbPoly.parse(ctx3, "x^2 + 2")
    assert a - a == FbPoly.zero(ctx3)
    assert (a * b).to_series() == LaurentSeries.parse(ctx3, "x^2 + 2")


def test_functional_operations(ctx2, ctx3):
    f = LaurentSeries.parse(ctx2, "x + x^-1")
    g = LaurentSeries(ctx2, 1, [1], prec=6)
    assert add(f, g) == LaurentSeries.parse(ctx2, "x")
    assert add(f, g).prec == 6
    assert mul(f, g).deg == 0
    assert deg(LaurentSeries.zero(ctx2)) == float("-inf")
    assert deg(f) == 1
    with pytest.raises(ModulusMismatch):
        mul(f, LaurentSeries.one(ctx3))


@pytest.mark.parametrize(
    "text,expected",
    [
        ("x", "x"),
        ("x^2 + x", "x^2 + x"),
        ("x^2 + x^-1", "x^2"),
        ("x^3 + x^-2", "x^3"),
        ("1", "1"),
        ("x^-1 + x^-4", "0"),
    ],
)
def test_polynomial_part_keeps_low_zero_coefficients(ctx2, text, expected):
    assert poly_part(LaurentSeries.parse(ctx2, text)) == FbPoly.parse(ctx2, expected)


def test_residue_without_negative_tail(ctx3):
    assert res(LaurentSeries.parse(ctx3, "x")) == 0
    assert res(LaurentSeries.parse(ctx3, "x^2 + 2*x")) == 0
    assert res(LaurentSeries.parse(ctx3, "2*x^-1")) == 2


def test_polynomial_part_splits_every_series(ctx3):
    rng = np.random.default_rng(7)
    for _ in range(200):
        exponents = rng.choice(np.arange(-5, 6), size=rng.integers(1, 6), replace=False)
        terms = {int(e): int(rng.integers(1, 3)) for e in exponents}
        g = LaurentSeries.from_terms(ctx3, terms)
        ceil_g = poly_part(g)
        assert (g - ceil_g).deg < 0
        for k in range(0, 6):
            expected = int(ceil_g.coeffs[k]) if k < len(ceil_g.coeffs) else 0
            assert g.coefficient(-k) == expected


def test_polynomial_part_of_truncated_series(ctx2):
    g = LaurentSeries(ctx2, -2, [1], prec=0)
    assert poly_part(g) == FbPoly.parse(ctx2, "x^2")
    with pytest.raises(PrecisionExhausted):
        poly_part(LaurentSeries(ctx2, -3, [1, 1], prec=-1))


@pytest.mark.parametrize(
    "series",
    [
        (-5, [1, 1], -3),
        (-4, [], -2),
        (-1, [1, 0, 1], 4),
    ],
)
def test_canonical_text_round_trip_with_low_precision(ctx2, series):
    start, coeffs, prec = series
    f = LaurentSeries(ctx2, start, coeffs, prec=prec)
    g = LaurentSeries.from_text(f.to_text())
    assert g.prec == prec
    assert g == f
    assert g.to_text() == f.to_text()


def test_parenthesized_exponents(ctx2):
    assert LaurentSeries.parse(ctx2, "x^(-1)") == LaurentSeries.monomial(ctx2, -1)
    assert LaurentSeries.parse(ctx2, "x^(2) - x^(-3)") == LaurentSeries.parse(ctx2, "x^2 + x^-3")
    assert FbPoly.parse(ctx2, "x^(3) + 1") == FbPoly.parse(ctx2, "x^3 + 1")
    for text in ("x^(-1", "x^-1)", "x^()"):
        with pytest.raises(ParseError):
            LaurentSeries.parse(ctx2, text)
