"""Pure-numpy implementations of the hot kernels.

Same contracts as ``numba_impl``; vectorized over the input arrays.  All
normalized Bessel conventions:

    josc_*(nu, z)  ->  Gamma(nu+1) (2/z)^nu J_nu(z)            (real z)
    imod_*(nu, u)  ->  exp(-Re u) Gamma(nu+1) (2/u)^nu I_nu(u) (complex u, Re u >= 0)

Branch selection (series vs recurrence vs asymptotics) is done by the caller;
each function here assumes its inputs are in-range.  The dd_* helpers are
elementwise double-double primitives used where the oscillatory series
cancels beyond double precision.
"""

import numpy as np

_EPS = 2.2204460492503131e-16
_SPLIT = 134217729.0  # 2^27 + 1


def _two_sum(a, b):
    s = a + b
    v = s - a
    return s, (a - (s - v)) + (b - v)


def _two_prod(a, b):
    p = a * b
    ca = _SPLIT * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLIT * b
    bh = cb - (cb - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    return _two_sum(s, e + al + bl)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    return _two_sum(p, e + ah * bl + al * bh)


def _dd_div(ah, al, bh, bl):
    q0 = ah / bh
    ph, pl = _dd_mul(q0, np.zeros_like(q0), bh, bl)
    rh, rl = _dd_add(ah, al, -ph, -pl)
    q1 = (rh + rl) / bh
    return _two_sum(q0, q1)


def josc_series(nu, z):
    """Oscillatory power series; accurate for |z| <~ 7."""
    q = -0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for n in range(400):
        term = term * q / ((n + 1.0) * (nu + n + 1.0))
        total += term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return total


def josc_series_dd(nu, z):
    """Power series in double-double arithmetic; survives the 7 < |z| <= ~40 band."""
    qh, ql = _two_prod(z, z)
    qh, ql = -0.25 * qh, -0.25 * ql
    th, tl = np.ones_like(z), np.zeros_like(z)
    sh, sl = np.ones_like(z), np.zeros_like(z)
    for n in range(600):
        dh, dl = _two_sum(np.full_like(z, nu), np.full_like(z, n + 1.0))
        dh, dl = _dd_mul(dh, dl, np.full_like(z, n + 1.0), np.zeros_like(z))
        th, tl = _dd_mul(th, tl, qh, ql)
        th, tl = _dd_div(th, tl, dh, dl)
        sh, sl = _dd_add(sh, sl, th, tl)
        if np.all(np.abs(th) <= 1e-34 * np.abs(sh)):
            break
    return sh + sl


def josc_halfint(m, z):
    """Order nu = m - 1/2 by upward recurrence from cos and sinc; |z| >= ~5."""
    az = np.abs(z)
    if m == 0:
        return np.cos(az)
    prev = np.cos(az)
    small = az < 1e-30
    azs = np.where(small, 1.0, az)
    cur = np.where(small, 1.0, np.sin(azs) / azs)
    for i in range(1, m):
        nu = i - 0.5
        nxt = 4.0 * nu * (nu + 1.0) / (azs * azs) * (cur - prev)
        prev, cur = cur, np.where(small, 1.0, nxt)
    return cur


def josc_hankel(nu, z, gamma_nu1):
    """Large-argument asymptotic expansion; |z| >= ~20."""
    az = np.abs(z)
    mu = 4.0 * nu * nu
    omega = az - nu * np.pi / 2.0 - np.pi / 4.0
    p = np.ones_like(az)
    q = np.zeros_like(az)
    c = np.ones_like(az)
    for mm in range(30):
        c = c * (mu - (2.0 * mm + 1.0) ** 2) / (8.0 * az * (mm + 1.0))
        if mm % 2 == 0:
            q = q + (-1.0) ** (mm // 2) * c
        else:
            p = p + (-1.0) ** ((mm + 1) // 2) * c
        if np.all(np.abs(c) < _EPS):
            break
    j = np.sqrt(2.0 / (np.pi * az)) * (np.cos(omega) * p - np.sin(omega) * q)
    return gamma_nu1 * (2.0 / az) ** nu * j


def imod_series_scaled(nu, u):
    """All-positive-coefficient series times exp(-Re u); Re u >= 0."""
    q = 0.25 * u * u
    term = np.ones_like(u)
    total = np.ones_like(u)
    for n in range(400):
        term = term * q / ((n + 1.0) * (nu + n + 1.0))
        total += term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return total * np.exp(-u.real)


def imod_series_scaled_dd(nu, u):
    """Complex double-double series for mid-range arguments off the real axis."""
    zr, zi = u.real, u.imag
    ah, al = _two_prod(zr, zr)
    bh, bl = _two_prod(zi, zi)
    qrh, qrl = _dd_add(ah, al, -bh, -bl)
    qrh, qrl = 0.25 * qrh, 0.25 * qrl
    ch, cl = _two_prod(zr, zi)
    qih, qil = 0.5 * ch, 0.5 * cl
    zero = np.zeros_like(zr)
    trh, trl = np.ones_like(zr), zero.copy()
    tih, til = zero.copy(), zero.copy()
    srh, srl = np.ones_like(zr), zero.copy()
    sih, sil = zero.copy(), zero.copy()
    for n in range(600):
        dh, dl = _two_sum(np.full_like(zr, nu), np.full_like(zr, n + 1.0))
        dh, dl = _dd_mul(dh, dl, np.full_like(zr, n + 1.0), zero)
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
        if np.all(np.abs(trh) + np.abs(tih) <= 1e-34 * (np.abs(srh) + np.abs(sih))):
            break
    return ((srh + srl) + 1j * (sih + sil)) * np.exp(-zr)


def imod_halfint_scaled(m, u):
    """Order nu = m - 1/2: scaled cosh/sinh closed forms plus recurrence."""
    # e^{-Re u} cosh u = (e^{i Im u} + e^{-2 Re u - i Im u})/2, both bounded
    ea = np.exp(1j * u.imag)
    eb = np.exp(-2.0 * u.real - 1j * u.imag)
    ch = 0.5 * (ea + eb)
    if m == 0:
        return ch
    sh = 0.5 * (ea - eb)
    prev = ch
    cur = sh / u
    for i in range(1, m):
        nu = i - 0.5
        prev, cur = cur, 4.0 * nu * (nu + 1.0) / (u * u) * (prev - cur)
    return cur


def imod_asym_scaled(nu, u, gamma_nu1):
    """Scaled modified asymptotic series; |u| >= ~30 on the real axis, ~40 off it."""
    mu = 4.0 * nu * nu
    s = np.ones_like(u)
    c = np.ones_like(u)
    for mm in range(30):
        c = c * -(mu - (2.0 * mm + 1.0) ** 2) / (8.0 * u * (mm + 1.0))
        s = s + c
        if np.all(np.abs(c) < _EPS):
            break
    logu = np.log(u)
    pref = np.exp(nu * (np.log(2.0) - logu) - 0.5 * (np.log(2.0 * np.pi) + logu))
    return gamma_nu1 * pref * np.exp(1j * u.imag) * s


def imod_poisson_scaled(nu, u, t, w, cnu):
    """Gauss-Jacobi form of e^{-Re u} int cosh(u s)(1-s^2)^(nu-1/2) ds.

    Last-resort branch for huge arguments near the imaginary axis.
    """
    out = np.empty_like(u)
    step = max(1, 2**21 // max(t.size, 1))
    for i in range(0, u.size, step):
        blk = u[i : i + step][:, None]
        # e^{-Re u} cosh(u s): both exponents have nonpositive real part
        ea = np.exp(blk * t[None, :] - blk.real)
        eb = np.exp(-blk * t[None, :] - blk.real)
        out[i : i + step] = (0.5 * (ea + eb)) @ w
    return cnu * out


def orthopoly_eval(bcoef, p0, x):
    """Weighted orthonormal-polynomial table H[n, j] = p_n(x_j) e^{-x_j^2/2}.

    bcoef[n] are the three-term recurrence off-diagonals (bcoef[0] unused),
    p0 the constant normalized p_0.
    """
    n = bcoef.shape[0]
    h = np.empty((n, x.shape[0]), dtype=np.float64)
    h[0] = p0 * np.exp(-0.5 * x * x)
    if n > 1:
        h[1] = x * h[0] / bcoef[1]
    for i in range(2, n):
        h[i] = (x * h[i - 1] - bcoef[i - 1] * h[i - 2]) / bcoef[i]
    return h
