import pytest

from laurentnet.core.algebra import get_context
from laurentnet.core.construction import build_construction, explicit_net
from laurentnet.core.lattice import ShrinkFactor, identity_lattice
from laurentnet.core.pointgen import point_set


@pytest.fixture(scope="session")
def ctx2():
    return get_context(2)


@pytest.fixture(scope="session")
def ctx3():
    return get_context(3)


@pytest.fixture(scope="session")
def worked_construction():
    """b=2, n=1: d=2, p_d = z^2 - z + x^-1"""
    return build_construction(2, 1, 64)


@pytest.fixture(scope="session")
def worked_net(ctx2):
    """(0,6,2)-net from the b=2, n=1 lattice shrunk by (x^3, x^3)"""
    _, points = explicit_net(2, 1, ShrinkFactor.parse(ctx2, "x^3", 2))
    return points


@pytest.fixture(scope="session")
def grid_net(ctx2):
    """{0, 1/4, 1/2, 3/4}^2 from the identity lattice shrunk by (x^2, x^2), 12 digits"""
    return point_set(identity_lattice(ctx2, 2), ShrinkFactor.parse(ctx2, "x^2", 2), depth=12)
