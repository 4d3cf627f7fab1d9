import pytest

from laurentnet.core.algebra import FbPoly, LaurentSeries, frobenius_sum, get_context
from laurentnet.core.construction import (
    build_construction,
    build_Fn,
    build_pd,
    deg_det_b_closed_form,
    dimension_for,
    explicit_net,
    generator_matrix,
    linearized_roots,
    measured_det_degree,
    precision_budget,
    predicted_quality,
    roots_pd,
    t_bound,
    t_from_admissibility,
)
from laurentnet.core.errors import PreconditionViolated
from laurentnet.core.lattice import ShrinkFactor


@pytest.mark.parametrize("b,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_Fn_vanishes_on_low_degree_polynomials(b, n):
    ctx = get_context(b)
    fn = build_Fn(ctx, n)
    assert fn.degree == b**n
    for a in FbPoly.iter_below(ctx, n):
        value = fn.evaluate(a)
        assert value.is_exact and value.is_zero
    assert not fn.evaluate(FbPoly.monomial(ctx, n)).is_zero


def test_pd_adds_driving_constant(ctx2):
    pd = build_pd(ctx2, 1)
    assert pd.coeff(0) == LaurentSeries.monomial(ctx2, -1)
    assert pd.coeff(1) == LaurentSeries.one(ctx2)
    assert pd.coeff(2) == LaurentSeries.one(ctx2)


@pytest.mark.parametrize("b,n", [(2, 1), (2, 2), (3, 1)])
def test_root_residuals(b, n):
    ctx = get_context(b)
    prec = 128
    roots = roots_pd(ctx, n, prec)
    assert roots.d == b**n
    assert len(set(roots.labels)) == b**n
    assert roots.tail.deg < 0
    for residual in roots.residuals(build_pd(ctx, n)):
        assert residual.is_zero
        assert residual.known >= prec - n * b**n


def test_root_labels_are_lexicographic(ctx2):
    roots = roots_pd(ctx2, 2, 32)
    assert roots.labels == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert roots.roots[1] - roots.tail == LaurentSeries.one(ctx2)
    assert roots.roots[2] - roots.tail == LaurentSeries.monomial(ctx2, 1)


def test_linearized_roots_solve_the_equation(ctx3):
    one = LaurentSeries.one(ctx3)
    g = LaurentSeries.monomial(ctx3, -1)
    roots = linearized_roots(one, g, 40)
    assert len(roots) == 3
    for r in roots:
        assert r**3 - r + g == LaurentSeries.zero(ctx3)


def test_linearized_roots_preconditions(ctx2):
    with pytest.raises(PreconditionViolated):
        linearized_roots(LaurentSeries.zero(ctx2), LaurentSeries.monomial(ctx2, -1), 10)
    with pytest.raises(PreconditionViolated):
        linearized_roots(LaurentSeries.one(ctx2), LaurentSeries.one(ctx2), 10)


def test_worked_generator(worked_construction, ctx2):
    xi = frobenius_sum(LaurentSeries.monomial(ctx2, -1), 80)
    one = LaurentSeries.one(ctx2)
    t = worked_construction.lattice.generator
    assert t[0, 0] == one + xi
    assert t[0, 1] == one
    assert t[1, 0] == xi
    assert t[1, 1] == one
    assert t.min_prec >= 64
    vandermonde = worked_construction.vandermonde
    assert vandermonde[0, 1] == xi
    assert vandermonde[1, 1] == one + xi


@pytest.mark.parametrize("b,n,expected", [(2, 1, 0), (2, 2, 4), (3, 1, 0), (3, 2, 27), (5, 1, 0)])
def test_det_b_closed_form(b, n, expected):
    assert deg_det_b_closed_form(b, n) == expected
    assert t_bound(b, n) == expected


@pytest.mark.parametrize("b,n", [(2, 1), (2, 2), (3, 1)])
def test_measured_det_degree_matches_closed_form(b, n):
    construction = build_construction(b, n, 48)
    assert measured_det_degree(construction) == deg_det_b_closed_form(b, n)


def test_predicted_quality():
    worked = predicted_quality(2, 1, (3, 3))
    assert (worked.m, worked.t_bound, worked.strength_bound) == (6, 0, 6)
    four = predicted_quality(2, 2, [1, 1, 1, 1])
    assert (four.m, four.t_bound, four.deg_det_b) == (8, 4, 4)


def test_t_from_admissibility():
    # shrunk worked lattice: deg det T = -6, M = -1 + 6
    assert t_from_admissibility(-6, 5, 2) == 0


def test_dimension_for():
    assert dimension_for(2, 1) == 1
    assert dimension_for(2, 3) == 2
    assert dimension_for(3, 9) == 2
    with pytest.raises(PreconditionViolated):
        dimension_for(2, 0)


def test_precision_budget_grows_with_n():
    assert precision_budget(2, 1) < precision_budget(2, 2) < precision_budget(2, 3)


def test_construction_rejects_bad_level():
    with pytest.raises(PreconditionViolated):
        build_construction(2, 0, 32)


def test_construction_audit(worked_construction):
    audit = worked_construction.audit
    assert audit["generator_precision"] >= worked_construction.requested_prec
    assert audit["tail_degree"] == -1
    assert len(audit["residual_precision"]) == 2


def test_explicit_net_size(ctx2):
    construction, points = explicit_net(2, 1, ShrinkFactor.parse(ctx2, "x^2", 2))
    assert construction.d == 2
    assert points.size == 16
    assert points.m == 4


def test_generator_matrix_matches_construction(ctx2, worked_construction):
    lattice = generator_matrix(ctx2, 1, 64)
    assert lattice.generator == worked_construction.lattice.generator
    assert lattice.label == "pd-roots(b=2,n=1)"
    assert str(build_pd(ctx2, 1)) == "z^2 + z + x^-1"
