import math

import numpy as np
import pytest

from laurentnet.core.algebra import FbPoly, get_context
from laurentnet.core.construction import explicit_net, predicted_quality
from laurentnet.core.errors import BudgetExceeded, NotAGroup, PreconditionViolated
from laurentnet.core.lattice import ShrinkFactor
from laurentnet.core.netanalysis import (
    character_sum,
    compositions,
    dual_net,
    duality_check,
    exact_t,
    flatten_dual_vector,
    is_net,
    min_nrt,
    minimum_weight,
    nrt_lower_bound,
    nrt_weights,
    t_from_delta,
)
from laurentnet.core.pointgen import DigitPointSet


def test_compositions():
    assert list(compositions(3, 2)) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert list(compositions(0, 3)) == [(0, 0, 0)]
    assert list(compositions(4, 2, cap=2)) == [(2, 2)]
    assert len(list(compositions(5, 3))) == math.comb(7, 2)


def test_grid_is_a_2_4_2_net(grid_net):
    assert not is_net(grid_net, 1)
    assert is_net(grid_net, 2)
    report = duality_check(grid_net)
    assert report.exact_t == 2
    assert report.delta == 3
    assert report.t_from_dual == 2
    assert report.duality_consistent
    assert report.extra["nrt_strategy"] == "profile"
    # profile (0, 3) is tried first: witness (0, x^2)
    assert not any(report.dual_witness[0])
    assert report.dual_witness[1] == [0, 0, 1] + [0] * 9


def test_worked_net(worked_net):
    report = duality_check(worked_net, t_bound=0)
    assert report.exact_t == 0
    assert report.delta == 7
    assert report.strength == 6
    assert report.duality_consistent
    assert nrt_lower_bound((3, 3), -1, 2) <= report.delta


@pytest.mark.parametrize("b,r", [(2, r) for r in range(1, 6)] + [(3, r) for r in range(1, 4)])
def test_t_zero_when_d_equals_b(b, r):
    ctx = get_context(b)
    factor = ShrinkFactor.monomial(ctx, b, r)
    _, points = explicit_net(b, 1, factor)
    report = duality_check(points, t_bound=predicted_quality(b, 1, factor).t_bound)
    assert report.exact_t == 0
    assert report.t_from_dual == 0
    assert report.delta == points.m + 1
    assert report.duality_consistent


def test_four_dimensional_net(ctx2):
    factor = ShrinkFactor.parse(ctx2, "x", 4)
    _, points = explicit_net(2, 2, factor)
    assert points.m == 8
    assert points.size == 256
    report = duality_check(points, t_bound=4)
    assert report.exact_t <= 4
    assert report.exact_t == report.t_from_dual
    assert report.duality_consistent


def non_group_points():
    # 0, 1/2, 1/4, 1/4 on one coordinate
    digits = np.array([[[0, 0]], [[1, 0]], [[0, 1]], [[0, 1]]])
    return DigitPointSet(b=2, d=1, m=2, depth=2, digits=digits)


def test_duplicate_points_are_not_a_net():
    points = non_group_points()
    assert not is_net(points, 0)
    assert is_net(points, 2)
    assert exact_t(points) == 2
    with pytest.raises(NotAGroup) as info:
        dual_net(points)
    assert info.value.details == {"distinct": 3, "span": 4, "depth": 2}


def test_size_mismatch_and_bad_t(worked_net):
    assert not is_net(worked_net, 0, m=7)
    with pytest.raises(PreconditionViolated):
        is_net(worked_net, -1)
    with pytest.raises(PreconditionViolated):
        dual_net(worked_net, n=worked_net.depth + 1)


def test_trivial_dual_has_infinite_weight():
    points = DigitPointSet(b=2, d=1, m=1, depth=1, digits=np.array([[[0]], [[1]]]))
    dual = dual_net(points)
    assert dual.dimension == 0
    assert min_nrt(dual) == math.inf
    assert t_from_delta(1, math.inf) == 0


def test_t_from_delta():
    assert t_from_delta(6, 7) == 0
    assert t_from_delta(4, 3) == 2
    assert t_from_delta(3, 1) == 3


def test_nrt_weights():
    rows = np.array([[1, 0, 0, 0, 0, 1], [0, 1, 1, 0, 0, 0], [0, 0, 0, 0, 0, 0]])
    assert nrt_weights(rows, 2, 3).tolist() == [4, 3, 0]


def test_enumeration_and_profile_search_agree(grid_net):
    dual = dual_net(grid_net, n=4)
    assert dual.dimension == 4
    enumerated = minimum_weight(dual)
    profiled = minimum_weight(dual, enum_cap=1)
    assert enumerated.strategy == "enumerate"
    assert profiled.strategy == "profile"
    assert enumerated.value == profiled.value == 3
    assert dual.contains(profiled.witness)
    with pytest.raises(BudgetExceeded):
        minimum_weight(dual, enum_cap=1, budget=1)


def test_character_sums_detect_the_dual(ctx2, worked_net):
    dual = dual_net(worked_net)
    degree_limit = 6
    for code_0 in range(2**degree_limit):
        for code_1 in range(2**degree_limit):
            g = [FbPoly.from_int(ctx2, code_0), FbPoly.from_int(ctx2, code_1)]
            vector = flatten_dual_vector(g, worked_net.depth)
            chi = character_sum(worked_net, vector)
            assert chi.exact_value in (0, 64)
            assert (chi.exact_value == 64) == dual.contains(vector)


def test_character_sum_value(worked_net, ctx2):
    one = FbPoly.one(ctx2)
    chi = character_sum(worked_net, [one, FbPoly.zero(ctx2)])
    assert chi.histogram == (32, 32)
    assert abs(chi.value()) < 1e-9
    with pytest.raises(PreconditionViolated):
        character_sum(worked_net, np.zeros(3, dtype=np.int64))
