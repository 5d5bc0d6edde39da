"""The numba kernels and the pure-numpy fallback must agree bit-for-bit-ish."""

import os
import subprocess
import sys

import numpy as np
import pytest

from dunkl1d._backend import backend_name, numpy_impl

try:
    from dunkl1d._backend import numba_impl
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")


@needs_numba
@pytest.mark.parametrize("nu", [0.0, 0.3, 1.7, 4.5])
def test_series_agree(nu, rng):
    z = np.ascontiguousarray(rng.uniform(0.0, 7.0, 200))
    a = numba_impl.josc_series(nu, z)
    b = numpy_impl.josc_series(nu, z)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-15)


@needs_numba
@pytest.mark.parametrize("nu", [0.3, 1.7])
def test_series_dd_agree(nu, rng):
    z = np.ascontiguousarray(rng.uniform(7.0, 20.0, 100))
    a = numba_impl.josc_series_dd(nu, z)
    b = numpy_impl.josc_series_dd(nu, z)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-16)


@needs_numba
@pytest.mark.parametrize("m", [0, 1, 3, 6])
def test_halfint_agree(m, rng):
    z = np.ascontiguousarray(rng.uniform(5.0, 100.0, 200))
    assert np.allclose(numba_impl.josc_halfint(m, z), numpy_impl.josc_halfint(m, z),
                       rtol=1e-13, atol=1e-16)
    u = np.ascontiguousarray(rng.uniform(5.0, 60.0, 100)
                             + 1j * rng.uniform(-20, 20, 100))
    assert np.allclose(numba_impl.imod_halfint_scaled(m, u),
                       numpy_impl.imod_halfint_scaled(m, u), rtol=1e-13)


@needs_numba
def test_hankel_and_asym_agree(rng):
    import math
    nu = 1.3
    g = math.gamma(nu + 1.0)
    z = np.ascontiguousarray(rng.uniform(20.0, 300.0, 200))
    assert np.allclose(numba_impl.josc_hankel(nu, z, g),
                       numpy_impl.josc_hankel(nu, z, g), rtol=1e-13)
    u = np.ascontiguousarray(rng.uniform(40.0, 400.0, 100)
                             + 1j * rng.uniform(-50, 50, 100))
    assert np.allclose(numba_impl.imod_asym_scaled(nu, u, g),
                       numpy_impl.imod_asym_scaled(nu, u, g), rtol=1e-12)


@needs_numba
def test_modified_series_agree(rng):
    nu = 0.8
    u = np.ascontiguousarray(rng.uniform(0, 12, 100) + 1j * rng.uniform(-6, 6, 100))
    u = np.where(u.real < 0, -u, u)
    assert np.allclose(numba_impl.imod_series_scaled(nu, u),
                       numpy_impl.imod_series_scaled(nu, u), rtol=1e-13)
    assert np.allclose(numba_impl.imod_series_scaled_dd(nu, 3 * u),
                       numpy_impl.imod_series_scaled_dd(nu, 3 * u), rtol=1e-12)


@needs_numba
def test_orthopoly_agree(rng):
    from dunkl1d.oscillator import recurrence_coefficients
    from dunkl1d import MultiplicityParam
    b = recurrence_coefficients(MultiplicityParam(1.3), 30)
    x = np.ascontiguousarray(rng.uniform(-10, 10, 64))
    assert np.allclose(numba_impl.orthopoly_eval(b, 0.9, x),
                       numpy_impl.orthopoly_eval(b, 0.9, x), rtol=1e-12, atol=1e-300)


def test_env_flag_selects_backend():
    for choice, expected in (("numpy", "numpy"), ("auto", None)):
        env = dict(os.environ, DUNKL1D_BACKEND=choice)
        proc = subprocess.run(
            [sys.executable, "-c",
             "from dunkl1d import backend_name; print(backend_name())"],
            capture_output=True, text=True, env=env)
        assert proc.returncode == 0, proc.stderr
        got = proc.stdout.strip()
        if expected is not None:
            assert got == expected
        else:
            assert got in ("numba", "numpy")


def test_bad_env_flag_rejected():
    env = dict(os.environ, DUNKL1D_BACKEND="fortran")
    proc = subprocess.run(
        [sys.executable, "-c", "import dunkl1d"],
        capture_output=True, text=True, env=env)
    assert proc.returncode != 0
    assert "DUNKL1D_BACKEND" in proc.stderr


def test_numpy_backend_runs_transform_end_to_end():
    env = dict(os.environ, DUNKL1D_BACKEND="numpy")
    code = (
        "import numpy as np\n"
        "from dunkl1d import *\n"
        "from dunkl1d.transform import TransformPlan, forward, inverse\n"
        "g = gauss_legendre_grid(256, 14.0, 16)\n"
        "m = MultiplicityParam(0.7)\n"
        "plan = TransformPlan(g, m)\n"
        "f = SampledFunction.from_callable(g, m, lambda x: np.exp(-x**2/2)*x)\n"
        "back = inverse(forward(f, plan), plan)\n"
        "err = dunkl_norm(back - f, 2)/dunkl_norm(f, 2)\n"
        "assert err < 1e-6, err\n"
        "print('ok', err)\n")
    proc = subprocess.run([sys.executable, "-c", code],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("ok")


def test_active_backend_reported():
    assert backend_name() in ("numba", "numpy")
