"""Numba @njit implementations of the hot kernels.

Scalar inner loops with per-element early termination; contracts identical to
``numpy_impl``.  Compiled lazily on first call, cached on disk.

The dd_* helpers are double-double (Dekker/Knuth) primitives: the mid-range
oscillatory series cancels up to ~e^20 of its own magnitude, which plain
doubles cannot survive, so terms and partial sums are carried in ~31-digit
arithmetic there.
"""

import cmath
import math

import numpy as np
from numba import njit

_EPS = 2.2204460492503131e-16
_SPLIT = 134217729.0  # 2^27 + 1


@njit(cache=True, inline="always")
def _two_sum(a, b):
    s = a + b
    v = s - a
    e = (a - (s - v)) + (b - v)
    return s, e


@njit(cache=True, inline="always")
def _two_prod(a, b):
    p = a * b
    ca = _SPLIT * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLIT * b
    bh = cb - (cb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


@njit(cache=True, inline="always")
def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    e += al + bl
    return _two_sum(s, e)


@njit(cache=True, inline="always")
def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _two_sum(p, e)


@njit(cache=True, inline="always")
def _dd_div(ah, al, bh, bl):
    q0 = ah / bh
    ph, pl = _dd_mul(q0, 0.0, bh, bl)
    rh, rl = _dd_add(ah, al, -ph, -pl)
    q1 = (rh + rl) / bh
    return _two_sum(q0, q1)


@njit(cache=True)
def josc_series(nu, z):
    out = np.empty_like(z)
    for i in range(z.shape[0]):
        q = -0.25 * z[i] * z[i]
        term = 1.0
        total = 1.0
        comp = 0.0  # Kahan compensation
        for n in range(400):
            term = term * q / ((n + 1.0) * (nu + n + 1.0))
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
            if abs(term) <= _EPS * abs(total):
                break
        out[i] = total
    return out


@njit(cache=True)
def josc_series_dd(nu, z):
    out = np.empty_like(z)
    for i in range(z.shape[0]):
        qh, ql = _two_prod(z[i], z[i])
        qh, ql = -0.25 * qh, -0.25 * ql
        th, tl = 1.0, 0.0
        sh, sl = 1.0, 0.0
        for n in range(600):
            dh, dl = _two_sum(nu, n + 1.0)
            dh, dl = _dd_mul(dh, dl, n + 1.0, 0.0)
            th, tl = _dd_mul(th, tl, qh, ql)
            th, tl = _dd_div(th, tl, dh, dl)
            sh, sl = _dd_add(sh, sl, th, tl)
            if abs(th) <= 1e-34 * abs(sh):
                break
        out[i] = sh + sl
    return out


@njit(cache=True)
def josc_halfint(m, z):
    out = np.empty_like(z)
    for i in range(z.shape[0]):
        az = abs(z[i])
        if m == 0:
            out[i] = math.cos(az)
            continue
        if az < 1e-30:
            out[i] = 1.0
            continue
        prev = math.cos(az)
        cur = math.sin(az) / az
        for j in range(1, m):
            nu = j - 0.5
            nxt = 4.0 * nu * (nu + 1.0) / (az * az) * (cur - prev)
            prev = cur
            cur = nxt
        out[i] = cur
    return out


@njit(cache=True)
def josc_hankel(nu, z, gamma_nu1):
    out = np.empty_like(z)
    mu = 4.0 * nu * nu
    for i in range(z.shape[0]):
        az = abs(z[i])
        omega = az - nu * math.pi / 2.0 - math.pi / 4.0
        p = 1.0
        q = 0.0
        c = 1.0
        for mm in range(30):
            c = c * (mu - (2.0 * mm + 1.0) ** 2) / (8.0 * az * (mm + 1.0))
            if mm % 2 == 0:
                q += (-1.0) ** (mm // 2) * c
            else:
                p += (-1.0) ** ((mm + 1) // 2) * c
            if abs(c) < _EPS:
                break
        j = math.sqrt(2.0 / (math.pi * az)) * (math.cos(omega) * p - math.sin(omega) * q)
        out[i] = gamma_nu1 * (2.0 / az) ** nu * j
    return out


@njit(cache=True)
def imod_series_scaled(nu, u):
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        q = 0.25 * u[i] * u[i]
        term = 1.0 + 0.0j
        total = 1.0 + 0.0j
        for n in range(400):
            term = term * q / ((n + 1.0) * (nu + n + 1.0))
            total += term
            if abs(term) <= _EPS * abs(total):
                break
        out[i] = total * cmath.exp(-u[i].real)
    return out


@njit(cache=True)
def imod_series_scaled_dd(nu, u):
    # complex double-double: re/im carried as dd pairs; denominators are real
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        zr, zi = u[i].real, u[i].imag
        # q = u^2 / 4
        ah, al = _two_prod(zr, zr)
        bh, bl = _two_prod(zi, zi)
        qrh, qrl = _dd_add(ah, al, -bh, -bl)
        qrh, qrl = 0.25 * qrh, 0.25 * qrl
        ch, cl = _two_prod(zr, zi)
        qih, qil = 0.5 * ch, 0.5 * cl
        trh, trl = 1.0, 0.0
        tih, til = 0.0, 0.0
        srh, srl = 1.0, 0.0
        sih, sil = 0.0, 0.0
        for n in range(600):
            dh, dl = _two_sum(nu, n + 1.0)
            dh, dl = _dd_mul(dh, dl, n + 1.0, 0.0)
            # t <- t * q (complex dd)
            prh, prl = _dd_mul(trh, trl, qrh, qrl)
            p2h, p2l = _dd_mul(tih, til, qih, qil)
            nrh, nrl = _dd_add(prh, prl, -p2h, -p2l)
            p3h, p3l = _dd_mul(trh, trl, qih, qil)
            p4h, p4l = _dd_mul(tih, til, qrh, qrl)
            nih, nil = _dd_add(p3h, p3l, p4h, p4l)
            trh, trl = _dd_div(nrh, nrl, dh, dl)
            tih, til = _dd_div(nih, nil, dh, dl)
            srh, srl = _dd_add(srh, srl, trh, trl)
            sih, sil = _dd_add(sih, sil, tih, til)
            if abs(trh) + abs(tih) <= 1e-34 * (abs(srh) + abs(sih)):
                break
        out[i] = complex(srh + srl, sih + sil) * cmath.exp(-zr)
    return out


@njit(cache=True)
def imod_halfint_scaled(m, u):
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        ui = u[i]
        ea = cmath.exp(1j * ui.imag)
        eb = cmath.exp(-2.0 * ui.real - 1j * ui.imag)
        ch = 0.5 * (ea + eb)
        if m == 0:
            out[i] = ch
            continue
        sh = 0.5 * (ea - eb)
        prev = ch
        cur = sh / ui
        for j in range(1, m):
            nu = j - 0.5
            nxt = 4.0 * nu * (nu + 1.0) / (ui * ui) * (prev - cur)
            prev = cur
            cur = nxt
        out[i] = cur
    return out


@njit(cache=True)
def imod_asym_scaled(nu, u, gamma_nu1):
    out = np.empty_like(u)
    mu = 4.0 * nu * nu
    for i in range(u.shape[0]):
        ui = u[i]
        s = 1.0 + 0.0j
        c = 1.0 + 0.0j
        for mm in range(30):
            c = c * -(mu - (2.0 * mm + 1.0) ** 2) / (8.0 * ui * (mm + 1.0))
            s += c
            if abs(c) < _EPS:
                break
        logu = cmath.log(ui)
        pref = cmath.exp(nu * (math.log(2.0) - logu) - 0.5 * (math.log(2.0 * math.pi) + logu))
        out[i] = gamma_nu1 * pref * cmath.exp(1j * ui.imag) * s
    return out


@njit(cache=True)
def imod_poisson_scaled(nu, u, t, w, cnu):
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        ui = u[i]
        acc = 0.0 + 0.0j
        for j in range(t.shape[0]):
            ea = cmath.exp(ui * t[j] - ui.real)
            eb = cmath.exp(-ui * t[j] - ui.real)
            acc += w[j] * 0.5 * (ea + eb)
        out[i] = cnu * acc
    return out


@njit(cache=True)
def orthopoly_eval(bcoef, p0, x):
    n = bcoef.shape[0]
    h = np.empty((n, x.shape[0]), dtype=np.float64)
    for j in range(x.shape[0]):
        h[0, j] = p0 * math.exp(-0.5 * x[j] * x[j])
    if n > 1:
        for j in range(x.shape[0]):
            h[1, j] = x[j] * h[0, j] / bcoef[1]
    for i in range(2, n):
        for j in range(x.shape[0]):
            h[i, j] = (x[j] * h[i - 1, j] - bcoef[i - 1] * h[i - 2, j]) / bcoef[i]
    return h
