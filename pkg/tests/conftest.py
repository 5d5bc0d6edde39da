import numpy as np
import pytest

from dunkl1d import MultiplicityParam, TransformPlan, gauss_legendre_grid
from dunkl1d.oscillator import build_hermite_basis

_PLANS = {}
_BASES = {}
_GRIDS = {}


def get_grid(n=512, radius=14.0, panels=16):
    key = (n, radius, panels)
    if key not in _GRIDS:
        _GRIDS[key] = gauss_legendre_grid(n, radius, panels)
    return _GRIDS[key]


def get_plan(k, n=512, radius=14.0, panels=16):
    key = (k, n, radius, panels)
    if key not in _PLANS:
        _PLANS[key] = TransformPlan(get_grid(n, radius, panels), MultiplicityParam(k))
    return _PLANS[key]


def get_basis(k, n):
    key = (k, n)
    if key not in _BASES:
        _BASES[key] = build_hermite_basis(MultiplicityParam(k), n)
    return _BASES[key]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def grid512():
    return get_grid(512)


@pytest.fixture(scope="session")
def grid384():
    return get_grid(384)
