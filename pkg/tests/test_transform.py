"""Forward/inverse transform, radial shortcut, translation, convolution."""

import math

import numpy as np
import pytest

from dunkl1d import (MultiplicityParam, SampledFunction, TransformPlan,
                     convolve, dunkl_norm, forward, gauss_legendre_grid,
                     inverse, radial_transform, translate)
from dunkl1d.heat import heat_apply
from dunkl1d.measure import TruncationLossWarning
from tests.conftest import get_plan

K_VALUES = [0.0, 0.5, 1.0, 2.5]


def _gaussian(grid, m):
    return SampledFunction.from_callable(grid, m, lambda x: np.exp(-x**2 / 2))


def test_plan_normalization_constant(grid512):
    m = MultiplicityParam(1.0)
    plan = get_plan(1.0)
    assert plan.c_k == pytest.approx(2.0 ** 1.5 * math.gamma(1.5), rel=1e-14)
    assert float(np.max(np.abs(plan.kernel))) <= 1.0 + 1e-12


def test_plan_rejects_bad_grid():
    # a grid too small to hold the Gaussian normalization integral
    tiny = gauss_legendre_grid(64, 1.0, 2)
    with pytest.raises(ValueError):
        TransformPlan(tiny, MultiplicityParam(0.5))


@pytest.mark.parametrize("k", K_VALUES)
def test_gaussian_is_fixed_point(k):
    plan = get_plan(k)
    f = _gaussian(plan.grid, plan.multiplicity)
    fh = forward(f, plan)
    assert np.max(np.abs(fh.values - np.exp(-plan.frequencies**2 / 2))) < 1e-12


@pytest.mark.parametrize("k", K_VALUES)
def test_plancherel_and_inversion(k):
    plan = get_plan(k)
    m = plan.multiplicity
    grid = plan.grid
    for fn in (lambda x: x * np.exp(-x**2 / 2),
               lambda x: (1 - x**2) * np.exp(-x**2 / 3),
               lambda x: np.cos(2 * x) * np.exp(-x**2 / 4)):
        f = SampledFunction.from_callable(grid, m, fn)
        fh = forward(f, plan)
        assert dunkl_norm(fh, 2) / dunkl_norm(f, 2) == pytest.approx(1.0, abs=1e-6)
        back = inverse(fh, plan)
        assert dunkl_norm(back - f, 2) / dunkl_norm(f, 2) < 1e-6


def test_double_transform_reflects():
    plan = get_plan(1.0)
    m = plan.multiplicity
    f = SampledFunction.from_callable(plan.grid, m, lambda x: x * np.exp(-x**2 / 2))
    ff = forward(forward(f, plan), plan)
    assert np.max(np.abs(ff.values - f.values[::-1])) < 1e-10


def test_k0_matches_classical_fourier():
    plan = get_plan(0.0)
    m = plan.multiplicity
    grid = plan.grid
    f = SampledFunction.from_callable(grid, m, lambda x: np.exp(-(x - 0.5) ** 2))
    ft = forward(f, plan)
    mes = grid.measure(m)
    classical = np.array([np.sum(mes * f.values * np.exp(-1j * xi * grid.nodes))
                          for xi in plan.frequencies]) / math.sqrt(2 * math.pi)
    assert np.max(np.abs(ft.values - classical)) < 1e-8 * np.max(np.abs(classical))


def test_truncation_warning_on_forward():
    plan = get_plan(0.0)
    f = SampledFunction.from_callable(plan.grid, plan.multiplicity,
                                      lambda x: 1.0 / (1.0 + x * x))
    with pytest.warns(TruncationLossWarning):
        forward(f, plan)


def test_inverse_of_heat_multiplier_is_heat_kernel():
    plan = get_plan(1.0)
    m = plan.multiplicity
    grid = plan.grid
    t = 0.5
    g = SampledFunction(plan.target, np.exp(-t * plan.frequencies**2), m)
    kt_col = inverse(g, plan)
    # k_t(x) relates to the two-argument kernel through K_t(x, 0) = k_t(x)/c_k
    from dunkl1d import HeatKernelEval
    ref = HeatKernelEval(t, m)(grid.nodes, np.zeros_like(grid.nodes)) * plan.c_k
    assert np.max(np.abs(kt_col.values - ref)) < 1e-10 * np.max(np.abs(ref))


@pytest.mark.parametrize("k", [0.0, 1.0])
def test_radial_transform_gaussian(k):
    m = MultiplicityParam(k)
    rs = np.linspace(0.0, 5.0, 11)
    got = radial_transform(lambda s: np.exp(-s**2 / 2), m, rs)
    assert np.allclose(got, np.exp(-rs**2 / 2), atol=1e-10)


def test_radial_transform_at_zero_is_moment():
    m = MultiplicityParam(1.0)
    val = radial_transform(lambda s: np.exp(-s**2 / 2), m, 0.0)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_radial_matches_forward():
    plan = get_plan(2.5)
    m = plan.multiplicity
    prof = lambda s: (1 + s**2) * np.exp(-s**2 / 2)
    f = SampledFunction.from_callable(plan.grid, m, lambda x: prof(np.abs(x)))
    fh = forward(f, plan)
    sel = slice(256, 296)
    ref = radial_transform(prof, m, np.abs(plan.frequencies[sel]))
    assert np.max(np.abs(ref - fh.values[sel].real)) < 1e-6 * np.max(np.abs(ref))


def test_radial_rejects_divergent_profile():
    m = MultiplicityParam(1.0)
    with pytest.raises(ValueError):
        radial_transform(lambda s: 1.0 / s**4, m, 1.0)


def test_translate_by_zero_is_identity():
    plan = get_plan(1.5)
    f = _gaussian(plan.grid, plan.multiplicity)
    g = translate(f, 0.0, plan)
    assert np.max(np.abs(g.values - f.values)) < 1e-12


def test_translate_k0_is_shift():
    plan = get_plan(0.0)
    m = plan.multiplicity
    f = SampledFunction.from_callable(plan.grid, m, lambda x: np.exp(-(x - 0.3) ** 2))
    g = translate(f, 0.7, plan)
    expected = np.exp(-(plan.grid.nodes + 0.7 - 0.3) ** 2)
    assert np.max(np.abs(g.values - expected)) < 1e-9


@pytest.mark.parametrize("p", [1, 2, np.inf])
def test_translate_contracts_radial(p):
    plan = get_plan(1.0)
    f = _gaussian(plan.grid, plan.multiplicity)
    for x0 in (0.5, 1.5, 3.0):
        g = translate(f, x0, plan)
        assert dunkl_norm(g, p) <= dunkl_norm(f, p) * (1 + 1e-9)


def test_convolution_commutes_and_young():
    plan = get_plan(0.5)
    m = plan.multiplicity
    g = _gaussian(plan.grid, m)
    f = SampledFunction.from_callable(plan.grid, m, lambda x: (1 + x) * np.exp(-x**2 / 3))
    ab = convolve(f, g, plan)
    ba = convolve(g, f, plan, check_radial=False)
    assert dunkl_norm(ab - ba, 2) < 1e-8 * dunkl_norm(ab, 2)
    for p in (1, 2):
        assert dunkl_norm(ab, p) <= dunkl_norm(g, 1) * dunkl_norm(f, p) * (1 + 1e-8)


def test_convolution_with_heat_kernel_is_heat_flow():
    plan = get_plan(1.0)
    m = plan.multiplicity
    t = 0.4
    kt = inverse(SampledFunction(plan.target, np.exp(-t * plan.frequencies**2), m), plan)
    f = SampledFunction.from_callable(plan.grid, m, lambda x: np.sin(x) * np.exp(-x**2 / 2))
    via_conv = convolve(f, kt, plan)
    via_heat = heat_apply(f, t, plan)
    assert dunkl_norm(via_conv - via_heat, 2) < 1e-9 * dunkl_norm(via_heat, 2)


def test_convolution_warns_on_nonradial():
    plan = get_plan(0.5)
    m = plan.multiplicity
    f = _gaussian(plan.grid, m)
    odd = SampledFunction.from_callable(plan.grid, m, lambda x: x * np.exp(-x**2))
    with pytest.warns(UserWarning, match="not radial"):
        convolve(f, odd, plan)
