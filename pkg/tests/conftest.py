import numpy as np
import pytest

from groupoid_spectra import models as M
from groupoid_spectra.cocycles import cocycle_from_table, trivial_cocycle
from groupoid_spectra.groupoids import Arrow, GroupAction, UnitSpace, build_transformation_groupoid
from groupoid_spectra.groups import cyclic_group


def z2_groupoid():
    action = GroupAction(cyclic_group(2), UnitSpace.discrete(["pt"]), lambda a, x: x)
    return build_transformation_groupoid(action)


def z2_arrows():
    return {a: Arrow("pt", "pt", a) for a in (0, 1)}


def z2_table(value11):
    a = z2_arrows()
    return {(a[i], a[j]): (value11 if i == j == 1 else 1) for i in (0, 1) for j in (0, 1)}


@pytest.fixture
def z2():
    return z2_groupoid()


@pytest.fixture
def z2_twisted(z2):
    return z2, cocycle_from_table(z2, z2_table(-1), order=2)


@pytest.fixture(scope="session")
def two_limit():
    return M.two_limit_line(0.0, 4.0)


@pytest.fixture(scope="session")
def two_limit_small(two_limit):
    """Radius-5 instance with a window-2 lattice groupoid (products of short arrows stay inside)."""
    inst = two_limit.instance(5)
    g = build_transformation_groupoid(inst.action, window=2)
    return g, trivial_cocycle(g)


def random_kernel_values(arrows, rng, scale=1.0):
    return {xi: scale * complex(rng.normal(), rng.normal()) for xi in arrows}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
