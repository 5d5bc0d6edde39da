"""Normalized Bessel functions and the rank-one Dunkl kernel.

Conventions (the single most important correctness decision of the package):

* ``normalized_bessel`` is the oscillatory series
  J~_nu(z) = Gamma(nu+1) sum (-1)^n / (n! Gamma(nu+n+1)) (z/2)^(2n),
  so J~_{-1/2} = cos and J~_{1/2} = sinc.
* ``dunkl_kernel`` is the exponential-type kernel built from the modified
  (all-positive-term) series I~_nu, so that E_0(x, y) = exp(xy) and
  E_k(x, y) > 0 for real arguments.
* ``fourier_kernel`` evaluates E_k(x, -i xi) with the oscillatory series,
  reducing to exp(-i x xi) at k = 0 and satisfying |E_k(x, -i xi)| <= 1.

Evaluation strategy per argument magnitude: power series for small arguments;
stable upward recurrence from cos/sinc (or scaled cosh/sinh) for half-integer
orders; Gauss-Jacobi quadrature of the Poisson integral representation for
general orders at moderate arguments; Hankel-type asymptotic expansions beyond.
"""

import functools
import math

import numpy as np
from scipy.special import roots_jacobi

from . import _backend as bk

# argument magnitude thresholds between evaluation branches
_SERIES_OSC = 7.0       # plain oscillatory series keeps ~1e-14 up to here
_DD_OSC = 20.0          # double-double series bridges to the asymptotics
_SERIES_MOD_REAL = 30.0  # all-positive series; limited only by cost
_SERIES_MOD_CPLX = 12.0  # complex modified series; cancellation off the axis
_DD_MOD = 40.0          # complex double-double band
_HALFINT_MIN = 5.0      # below this the recurrences lose digits to 0/0 limits
_ASYM_ARG_BOUND = 1.2   # |arg u| validity limit of the one-sided asymptotics
_MAX_ARG = 1.0e6

_POISSON_N_MOD = 64


class BesselOrder:
    """Validated order nu > -1 for the normalized Bessel functions."""

    __slots__ = ("nu",)

    def __init__(self, nu):
        nu = float(nu)
        if not nu > -1.0:
            raise ValueError(f"order must exceed -1, got {nu}")
        self.nu = nu

    def __repr__(self):
        return f"BesselOrder({self.nu})"


def _order(nu):
    return nu.nu if isinstance(nu, BesselOrder) else float(nu)


def _halfint_m(nu):
    """m with nu = m - 1/2 when nu is a half-integer, else None."""
    m = round(nu + 0.5)
    if m >= 0 and abs(nu + 0.5 - m) < 1e-12:
        return int(m)
    return None


@functools.lru_cache(maxsize=256)
def _jacobi_rule(alpha, n):
    t, w = roots_jacobi(n, alpha, alpha)
    return np.ascontiguousarray(t), np.ascontiguousarray(w)


@functools.lru_cache(maxsize=256)
def _poisson_const(nu):
    # Gamma(nu+1) / (Gamma(nu+1/2) Gamma(1/2))
    return math.exp(math.lgamma(nu + 1.0) - math.lgamma(nu + 0.5)) / math.sqrt(math.pi)


def _josc(nu, z):
    """Normalized oscillatory Bessel on a real array, any magnitude."""
    z = np.ascontiguousarray(np.abs(z), dtype=np.float64)
    if np.any(z > _MAX_ARG):
        raise OverflowError(f"|z| beyond the supported range {_MAX_ARG:g}")
    out = np.empty_like(z)
    m = _halfint_m(nu)
    if m is not None:
        small = z < _HALFINT_MIN
        if np.any(small):
            out[small] = bk.josc_series(nu, z[small])
        if np.any(~small):
            out[~small] = bk.josc_halfint(m, z[~small])
        return out
    g = math.gamma(nu + 1.0)
    lo = z <= _SERIES_OSC
    hi = z > _DD_OSC
    mid = ~(lo | hi)
    if np.any(lo):
        out[lo] = bk.josc_series(nu, z[lo])
    if np.any(mid):
        out[mid] = bk.josc_series_dd(nu, z[mid])
    if np.any(hi):
        out[hi] = bk.josc_hankel(nu, z[hi], g)
    return out


def _imod_scaled(nu, u):
    """exp(-|Re u|) * I~_nu(u) on a complex array (even in u)."""
    u = np.ascontiguousarray(u, dtype=np.complex128)
    if np.any(np.abs(u) > _MAX_ARG):
        raise OverflowError(f"|z| beyond the supported range {_MAX_ARG:g}")
    v = np.where(u.real < 0.0, -u, u)
    av = np.abs(v)
    out = np.empty_like(v)
    m = _halfint_m(nu)
    if m is not None:
        small = av < _HALFINT_MIN
        if np.any(small):
            out[small] = bk.imod_series_scaled(nu, v[small])
        if np.any(~small):
            out[~small] = bk.imod_halfint_scaled(m, v[~small])
        return out
    g = math.gamma(nu + 1.0)
    realish = np.abs(v.imag) <= 1e-8 * (1.0 + v.real)
    series = av <= np.where(realish, _SERIES_MOD_REAL, _SERIES_MOD_CPLX)
    ddband = (~series) & (av <= _DD_MOD)
    asym = (~series) & (~ddband) & (np.abs(np.angle(v)) <= _ASYM_ARG_BOUND)
    mid = ~(series | ddband | asym)
    if np.any(series):
        out[series] = bk.imod_series_scaled(nu, v[series])
    if np.any(ddband):
        out[ddband] = bk.imod_series_scaled_dd(nu, v[ddband])
    if np.any(asym):
        out[asym] = bk.imod_asym_scaled(nu, v[asym], g)
    if np.any(mid):
        # huge argument near the imaginary axis: quadrature of the scaled
        # Poisson integral is the only branch that survives there
        vm = v[mid]
        if nu <= -0.5:
            # Jacobi exponent would fall below -1; climb two orders first
            a = _imod_scaled(nu + 1.0, vm)
            b = _imod_scaled(nu + 2.0, vm)
            out[mid] = a + vm * vm * b / (4.0 * (nu + 1.0) * (nu + 2.0))
            return out
        need = int(math.ceil(0.75 * float(np.max(np.abs(vm)))) + 24)
        n = _POISSON_N_MOD
        while n < need:
            n *= 2
        if n > 4096:
            raise OverflowError("modified-kernel argument too oscillatory to resolve")
        t, w = _jacobi_rule(nu - 0.5, n)
        out[mid] = bk.imod_poisson_scaled(nu, vm, t, w, _poisson_const(nu))
    return out


def normalized_bessel(nu, z):
    """Normalized Bessel J~_nu(z); J~_nu(0) = 1, J~_{-1/2} = cos, J~_{1/2} = sinc.

    Relative accuracy ~1e-13 on real |z| <= 50 for any order nu > -1.
    Complex z is evaluated through the modified series (J~_nu(z) = I~_nu(iz)).
    """
    nu = _order(nu)
    BesselOrder(nu)  # validates
    z = np.asarray(z)
    scalar = z.ndim == 0
    flat = np.atleast_1d(z)
    if np.iscomplexobj(flat) and np.any(np.abs(flat.imag) > 1e-14 * (1.0 + np.abs(flat.real))):
        u = 1j * flat.astype(np.complex128)
        scale = np.abs(u.real)
        if np.any(scale > 690.0):
            raise OverflowError("complex argument too large for the unscaled kernel")
        out = _imod_scaled(nu, u) * np.exp(scale)
    else:
        out = _josc(nu, flat.real.astype(np.float64))
    return out[0] if scalar else out.reshape(z.shape)


def modified_bessel_scaled(nu, u):
    """exp(-|Re u|) * I~_nu(u) for complex u: the overflow-safe kernel core."""
    nu = _order(nu)
    BesselOrder(nu)
    u = np.asarray(u, dtype=np.complex128)
    scalar = u.ndim == 0
    out = _imod_scaled(nu, np.atleast_1d(u))
    return out[0] if scalar else out.reshape(u.shape)


def _as_coord_arrays(m, x, y):
    """Broadcast x, y to (..., d) coordinate arrays."""
    x = np.asarray(x)
    y = np.asarray(y)
    if m.d == 1:
        return x[..., None], y[..., None]
    if x.shape[-1] != m.d or y.shape[-1] != m.d:
        raise ValueError(f"expected trailing axis of size {m.d}")
    return x, y


def dunkl_kernel_scaled(m, x, y):
    """exp(-sum_j |Re(x_j y_j)|) * E_k(x, y); x may be complex (y real).

    This is the stable building block for the heat and oscillator kernels,
    where the plain kernel would overflow.
    """
    xa, ya = _as_coord_arrays(m, x, y)
    out = None
    for j, kj in enumerate(m.k):
        u = np.asarray(xa[..., j] * ya[..., j], dtype=np.complex128)
        shape = u.shape
        u = np.atleast_1d(u).ravel()
        if kj == 0.0:
            # E_0(u) e^{-|Re u|} = exp(u - |Re u|), exponent never positive;
            # the generic assembly would cancel to zero for Re u << 0
            term = np.exp(u - np.abs(u.real))
        else:
            term = (_imod_scaled(kj - 0.5, u)
                    + (u / (2.0 * kj + 1.0)) * _imod_scaled(kj + 0.5, u))
        term = term.reshape(shape) if shape else term[0]
        out = term if out is None else out * term
    return out


def dunkl_kernel(m, x, y):
    """The Dunkl kernel E_k(x, y): positive, E_k(0, y) = 1, E_0(x, y) = e^<x,y>."""
    xa, ya = _as_coord_arrays(m, x, y)
    u = xa * ya
    scale = np.sum(np.abs(np.real(u)), axis=-1)
    if np.any(scale > 690.0):
        raise OverflowError("<x, y> too large for the unscaled kernel; "
                            "use dunkl_kernel_scaled")
    out = dunkl_kernel_scaled(m, x, y) * np.exp(scale)
    if not (np.iscomplexobj(np.asarray(x)) or np.iscomplexobj(np.asarray(y))):
        out = np.real(out)
    return out


def fourier_kernel(m, x, xi):
    """E_k(x, -i xi) for real x, xi: the transform kernel, |value| <= 1."""
    xa, ya = _as_coord_arrays(m, x, xi)
    out = None
    for j, kj in enumerate(m.k):
        u = np.asarray(xa[..., j] * ya[..., j], dtype=np.float64)
        shape = u.shape
        uf = np.atleast_1d(u).ravel()
        re = _josc(kj - 0.5, uf)
        im = -(uf / (2.0 * kj + 1.0)) * _josc(kj + 0.5, uf)
        term = re + 1j * im
        term = term.reshape(shape) if shape else term[0]
        out = term if out is None else out * term
    return out
