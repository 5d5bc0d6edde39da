"""Normalized Bessel functions and the Dunkl kernel against frozen oracles.

The reference values were computed with mpmath at 30 significant digits:
J~_nu(z) = Gamma(nu+1)(2/z)^nu besselj(nu, z) and the scaled modified
analogue; the Dunkl kernel values come from the two-Bessel closed form
evaluated in high precision.
"""

import math

import numpy as np
import pytest

from dunkl1d import (BesselOrder, MultiplicityParam, dunkl_kernel,
                     dunkl_kernel_scaled, fourier_kernel,
                     modified_bessel_scaled, normalized_bessel)

# (nu, z, J~_nu(z)) -- mpmath, 17 digits
JOSC_ORACLE = [
    (0.0, 3.7, -0.39923020337119112),
    (0.3, 2.0, 0.38204794621990689),
    (1.7, 10.0, 0.023496805090760302),
    (0.25, 37.5, 0.010778746327149019),
    (2.0, 50.0, -0.00019108096254162823),
    (-0.3, 5.0, -0.025715481631611837),
    (0.5, 29.0, -0.022883927041826466),
    (3.0, 14.2, -0.0032854240729270981),
    (0.75, 50.0, -0.0056509545504060265),
    (1.25, 13.0, -0.015483548495789769),
    (4.5, 8.0, 0.0048173292252328043),
    (0.1, 45.0, 0.082660708541648463),
    (2.5, 21.0, -0.0012191724431570019),
    (-0.45, 11.0, -0.063788214489421798),
    (6.0, 33.0, -1.1354519558796157e-6),
]

# (nu, u, e^{-Re u} I~_nu(u)) -- mpmath
IMOD_SCALED_ORACLE = [
    (0.5, complex(2.0, 1.0), complex(0.19176957113872024, 0.11833598030588625)),
    (1.5, complex(35.0, 10.0), complex(-0.0011018213744197418, -2.9066732231625553e-5)),
    (0.7, complex(80.0, 30.0), complex(-0.00076831673475144287, -0.0027214638794472162)),
    (2.0, complex(7.0, -3.0), complex(-0.0078959603739705048, -0.013593111979060168)),
    (0.25, complex(300.0, 0.0), complex(0.0059673794094152628, 0.0)),
    (3.5, complex(18.0, 18.0), complex(-8.2387828362452708e-5, 6.6404344567432511e-5)),
    (0.0, complex(55.0, 0.0), complex(0.053916898493938759, 0.0)),
    (1.0, complex(9.0, 0.5), complex(0.025766780248341999, 0.011487033821851384)),
    (2.75, complex(130.0, -60.0), complex(-5.3351921200787439e-7, -1.0100036658415715e-6)),
]

# (k, x, y, E_k(x, y)) -- mpmath closed form
DUNKL_KERNEL_ORACLE = [
    (1.0, 0.7, 1.3, 1.4730519873259181),
    (0.5, -2.0, 1.1, 0.71504821298092804),
    (2.5, 3.0, 2.0, 17.09725222593965),
    (0.17, 5.0, -4.0, 1087501.7827567529),
    (1.5, 12.0, 9.0, 1.1274676905509631e+44),
]


def test_order_validation():
    with pytest.raises(ValueError):
        BesselOrder(-1.0)
    BesselOrder(-0.999)


def test_at_zero_is_one():
    for nu in (-0.5, 0.0, 0.3, 1.5, 4.0):
        assert normalized_bessel(nu, 0.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("z", [0.1, 1.0, 5.0, 12.0, 31.0])
def test_half_integer_closed_forms(z):
    assert normalized_bessel(-0.5, z) == pytest.approx(math.cos(z), rel=1e-13)
    assert normalized_bessel(0.5, z) == pytest.approx(math.sin(z) / z, rel=1e-13)


@pytest.mark.parametrize("nu,z,ref", JOSC_ORACLE)
def test_oscillatory_oracle(nu, z, ref):
    assert normalized_bessel(nu, z) == pytest.approx(ref, rel=2e-13)


@pytest.mark.parametrize("nu,u,ref", IMOD_SCALED_ORACLE)
def test_modified_scaled_oracle(nu, u, ref):
    got = modified_bessel_scaled(nu, u)
    assert abs(got - ref) <= 5e-13 * abs(ref)


def test_overflow_guard():
    with pytest.raises(OverflowError):
        normalized_bessel(0.3, 2.0e6)
    with pytest.raises(OverflowError):
        dunkl_kernel(MultiplicityParam(1.0), 30.0, 30.0)


@pytest.mark.parametrize("k,x,y,ref", DUNKL_KERNEL_ORACLE)
def test_dunkl_kernel_oracle(k, x, y, ref):
    assert dunkl_kernel(MultiplicityParam(k), x, y) == pytest.approx(ref, rel=1e-12)


def test_dunkl_kernel_normalized_at_zero():
    m = MultiplicityParam(0.7)
    ys = np.linspace(-5, 5, 11)
    assert np.allclose(dunkl_kernel(m, np.zeros_like(ys), ys), 1.0, atol=1e-14)


def test_dunkl_kernel_k0_is_exp(rng):
    m = MultiplicityParam(0.0)
    for x, y in [(1.0, 1.0), (2.0, -0.5)] + list(rng.uniform(-3, 3, (5, 2))):
        assert dunkl_kernel(m, x, y) == pytest.approx(math.exp(x * y), rel=1e-13)


def test_dunkl_kernel_symmetry_scaling_reflection(rng):
    m = MultiplicityParam(1.3)
    pts = rng.uniform(-4, 4, (40, 2))
    ex = dunkl_kernel(m, pts[:, 0], pts[:, 1])
    assert np.allclose(ex, dunkl_kernel(m, pts[:, 1], pts[:, 0]), rtol=1e-13)
    assert np.allclose(ex, dunkl_kernel(m, -pts[:, 0], -pts[:, 1]), rtol=1e-13)
    assert np.all(ex > 0)
    for lam in (-2.0, 0.5, 3.0):
        a = dunkl_kernel(m, lam * pts[:, 0], pts[:, 1])
        b = dunkl_kernel(m, pts[:, 0], lam * pts[:, 1])
        assert np.allclose(a, b, rtol=1e-12)


def test_dunkl_kernel_against_intertwining_density(rng):
    # independent oracle: E_k(x, y) = c int_{-1}^{1} e^{xyt} (1-t)^{k-1} (1+t)^k dt
    from scipy.special import roots_jacobi

    for k in (0.6, 1.0, 2.5):
        m = MultiplicityParam(k)
        t, w = roots_jacobi(80, k - 1.0, k)
        c = math.gamma(k + 0.5) / (math.gamma(0.5) * math.gamma(k))
        for _ in range(5):
            x, y = rng.uniform(-3, 3, 2)
            ref = c * float(np.sum(w * np.exp(x * y * t)))
            assert dunkl_kernel(m, x, y) == pytest.approx(ref, rel=1e-11)


def test_fourier_kernel_k0_is_complex_exponential():
    m = MultiplicityParam(0.0)
    z = np.linspace(-30, 30, 61)
    got = fourier_kernel(m, z, np.full_like(z, 1.3))
    assert np.max(np.abs(got - np.exp(-1.3j * z))) < 1e-13


def test_fourier_kernel_bounded_by_one(rng):
    for k in (0.0, 0.5, 0.7, 1.0, 2.5):
        m = MultiplicityParam(k)
        x = rng.uniform(-14, 14, 400)
        xi = rng.uniform(-14, 14, 400)
        assert np.max(np.abs(fourier_kernel(m, x, xi))) <= 1.0 + 1e-12


def test_fourier_kernel_at_zero():
    m = MultiplicityParam(1.7)
    xs = np.linspace(-9, 9, 13)
    assert np.allclose(fourier_kernel(m, np.zeros_like(xs), xs), 1.0, atol=1e-14)


def test_product_case_kernels():
    m = MultiplicityParam((0.5, 1.5))
    x = np.array([1.0, -0.7])
    y = np.array([0.3, 2.0])
    one_a = dunkl_kernel(MultiplicityParam(0.5), x[0], y[0])
    one_b = dunkl_kernel(MultiplicityParam(1.5), x[1], y[1])
    assert dunkl_kernel(m, x, y) == pytest.approx(one_a * one_b, rel=1e-13)
    fa = fourier_kernel(MultiplicityParam(0.5), x[0], y[0])
    fb = fourier_kernel(MultiplicityParam(1.5), x[1], y[1])
    assert fourier_kernel(m, x, y) == pytest.approx(fa * fb, rel=1e-13)


def test_scaled_kernel_consistency(rng):
    m = MultiplicityParam(0.8)
    x = rng.uniform(-4, 4, 20)
    y = rng.uniform(-4, 4, 20)
    scaled = dunkl_kernel_scaled(m, x.astype(complex), y)
    plain = dunkl_kernel(m, x, y)
    assert np.allclose(np.real(scaled) * np.exp(np.abs(x * y)), plain, rtol=1e-12)
