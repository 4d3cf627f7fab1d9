from fractions import Fraction

import numpy as np
import pytest

from laurentnet.core import config
from laurentnet.core.construction import explicit_net
from laurentnet.core.errors import BudgetExceeded, ConfigError, DimensionTooLarge, PreconditionViolated
from laurentnet.core.integrands import INTEGRANDS, get_integrand
from laurentnet.core.lattice import ShrinkFactor
from laurentnet.core.pointgen import DigitPointSet, plan_shrink
from laurentnet.core.quality import (
    discrepancy_bound,
    error_decay_experiment,
    qmc_integrate,
    quadrature_weight,
    star_discrepancy_exact,
)


def corner_grid():
    """{0, 1/2}^2"""
    digits = np.array([[[0], [0]], [[0], [1]], [[1], [0]], [[1], [1]]])
    return DigitPointSet(b=2, d=2, m=2, depth=1, digits=digits)


def test_single_point_at_origin():
    origin = DigitPointSet(b=2, d=2, m=0, depth=1, digits=np.zeros((1, 2, 1), dtype=np.int64))
    assert star_discrepancy_exact(origin).value == 1


def test_corner_grid_discrepancy():
    result = star_discrepancy_exact(corner_grid())
    assert result.value == Fraction(3, 4)
    assert (result.numerator, result.denominator) == (3, 4)
    assert result.bound is None


def test_worked_net_discrepancy(worked_net):
    result = star_discrepancy_exact(worked_net, t=0)
    assert 0 < result.value < Fraction(6, 64)
    assert result.bound == pytest.approx(6 / 64)
    assert result.envelope == Fraction(4 * 6, 64)
    assert result.envelope_exceeded is False


def test_discrepancy_decreases_with_r(ctx2):
    values = []
    for r in range(1, 6):
        _, points = explicit_net(2, 1, ShrinkFactor.monomial(ctx2, 2, r))
        values.append(star_discrepancy_exact(points, t=0).value)
    assert all(later < earlier for earlier, later in zip(values, values[1:]))
    assert values[-1] < Fraction(1, 100)


def test_discrepancy_limits(grid_net, monkeypatch):
    wide = DigitPointSet(b=2, d=4, m=0, depth=1, digits=np.zeros((1, 4, 1), dtype=np.int64))
    with pytest.raises(DimensionTooLarge):
        star_discrepancy_exact(wide)
    monkeypatch.setattr(config, "DISCREPANCY_MAX_POINTS", 8)
    with pytest.raises(BudgetExceeded):
        star_discrepancy_exact(grid_net)


def test_discrepancy_bound():
    assert discrepancy_bound(6, 0, 2, 2) == pytest.approx(6 / 64)
    assert discrepancy_bound(8, 4, 4, 2) == pytest.approx(4)
    assert discrepancy_bound(4, 0, 1, 2) == pytest.approx(1 / 16)
    with pytest.raises(PreconditionViolated):
        discrepancy_bound(2, 3, 2, 2)


def test_qmc_on_grid(grid_net):
    assert qmc_integrate(grid_net, get_integrand("linear")) == pytest.approx(3 / 8)
    assert qmc_integrate(grid_net, get_integrand("constant")) == 1.0


def test_quadrature_weight_is_one_over_n(worked_construction, ctx2, worked_net):
    factor = ShrinkFactor.parse(ctx2, "x^3", 2)
    plan = plan_shrink(worked_construction.lattice, factor)
    deg_det_t = sum(plan.factors.diagonal_degrees())
    assert deg_det_t == 0
    assert quadrature_weight(deg_det_t, factor.degrees, 2) == Fraction(1, worked_net.size)


def test_product_integrand_error_decays():
    run = error_decay_experiment(2, 1, range(1, 7), get_integrand("product"))
    assert [row.n_points for row in run.rows] == [4**r for r in range(1, 7)]
    assert run.exact == 1.0
    assert run.slope is not None
    assert run.slope <= -0.8


def test_constant_integrand_is_exact(tmp_path):
    run = error_decay_experiment(2, 1, [1, 2, 3], get_integrand("constant"))
    assert all(row.error == 0 for row in run.rows)
    assert run.slope is None
    lines = run.to_csv().splitlines()
    assert lines[0] == "integrand,r,N,estimate,exact,abs_error"
    assert lines[1].startswith("constant,1,4,")
    assert len(lines) == 4


def test_decay_needs_r_values():
    with pytest.raises(PreconditionViolated):
        error_decay_experiment(2, 1, [], get_integrand("constant"))


def test_integrand_library():
    assert sorted(INTEGRANDS) == ["constant", "indicator", "linear", "oscillatory", "product"]
    x = np.array([[0.25, 0.75]])
    assert get_integrand("product")(x)[0] == pytest.approx(0.75 * 1.25)
    assert get_integrand("oscillatory").integral(1) == pytest.approx(
        np.sin(1 + 0.6 * np.pi) - np.sin(0.6 * np.pi)
    )
    with pytest.raises(ConfigError):
        get_integrand("gaussian")
