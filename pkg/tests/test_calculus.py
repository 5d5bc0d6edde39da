"""Sectorial calculus: resolvents, contour integrals, bounded extension,
spectral path, convergence theorem, CZ decomposition, weak-type harness."""

import math
import warnings

import numpy as np
import pytest

from dunkl1d import (MultiplicityParam, SampledFunction,
                     Sector, SectorSymbol, cz_decompose, dunkl_norm,
                     hinfty_extend, imaginary_power_symbol,
                     psi_contour_calculus, psi_symbol, resolvent_apply,
                     spectral_calculus, weak_type_harness)
from dunkl1d.calculus import convergence_theorem_check, exp_symbol, zexp_symbol
from dunkl1d.operators import discretize_operator
from dunkl1d.oscillator import hermite_semigroup_apply, mehler_kernel
from tests.conftest import get_basis

M1 = MultiplicityParam(1.0)
SECTOR = Sector(math.pi / 4)


def _section(n=40):
    return discretize_operator("oscillator", "hermite", M1, n=n)


def _lam(T):
    return np.diag(T.entries).astype(np.complex128)


def test_sector_validation():
    with pytest.raises(ValueError):
        Sector(0.0)
    with pytest.raises(ValueError):
        Sector(1.0, theta=1.5)
    s = Sector(1.0)
    assert s.theta == pytest.approx(0.5)


def test_resolvent_diagonal():
    T = _section(12)
    lam = np.real(_lam(T))
    v = np.zeros(12)
    v[4] = 1.0
    out = resolvent_apply(T, -2.0 + 1.0j, v)
    assert out[4] == pytest.approx(1.0 / (lam[4] - (-2.0 + 1.0j)))
    with pytest.raises(ValueError):
        resolvent_apply(T, lam[0], v)


def test_resolvent_sector_bound():
    T = _section(30)
    lam = np.real(_lam(T))
    worst = 0.0
    for mu in (math.pi / 4, math.pi / 2):
        for r in np.logspace(-2, 4, 25):
            z = r * np.exp(1j * mu)
            norm = 1.0 / np.min(np.abs(lam - z))
            worst = max(worst, norm * abs(z))
    assert np.isfinite(worst)
    # C_mu = 1/sin(mu) for positive self-adjoint sections
    assert worst <= 1.0 / math.sin(math.pi / 4) + 1e-9


def test_resolvent_negative_axis():
    T = _section(12)
    lam = np.real(_lam(T))
    v = np.ones(12)
    out = resolvent_apply(T, -3.0, v)
    assert np.max(np.abs(out)) == pytest.approx(1.0 / (lam[0] + 3.0), rel=1e-14)


def test_resolvent_general_matrix():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(8, 8))
    sym = a + a.T + 16 * np.eye(8)
    v = rng.normal(size=8)
    out = resolvent_apply(sym, 0.5j, v)
    assert np.allclose((sym - 0.5j * np.eye(8)) @ out, v, atol=1e-12)


@pytest.mark.parametrize("make", [psi_symbol, zexp_symbol])
def test_contour_matches_spectral(make):
    T = _section()
    xi = make()
    out, cert = psi_contour_calculus(T, xi, SECTOR)
    assert cert["converged"]
    exact = np.diag(xi(_lam(T)))
    assert np.linalg.norm(out.entries - exact, 2) < 1e-4


def test_contour_rejects_bounded_symbol():
    with pytest.raises(ValueError):
        psi_contour_calculus(_section(), exp_symbol(), SECTOR)


def test_contour_linearity():
    T = _section(20)
    a, b = 2.0, -1.5j
    xi1, xi2 = psi_symbol(), zexp_symbol()
    mix = SectorSymbol(lambda z: a * xi1(z) + b * xi2(z), "mix", psi_decay=1.0)
    m1, _ = psi_contour_calculus(T, xi1, SECTOR)
    m2, _ = psi_contour_calculus(T, xi2, SECTOR)
    mm, _ = psi_contour_calculus(T, mix, SECTOR, check_decay=False)
    assert np.linalg.norm(mm.entries - (a * m1.entries + b * m2.entries), 2) < 1e-10


def test_contour_multiplicative_on_decay_class():
    T = _section(20)
    xi1, xi2 = psi_symbol(), zexp_symbol()
    prod = SectorSymbol(lambda z: xi1(z) * xi2(z), "prod", psi_decay=2.0)
    p1, _ = psi_contour_calculus(T, xi1, SECTOR)
    p2, _ = psi_contour_calculus(T, xi2, SECTOR)
    pp, _ = psi_contour_calculus(T, prod, SECTOR, check_decay=False)
    assert np.linalg.norm(pp.entries - p1.entries @ p2.entries, 2) < 1e-4


def test_extension_of_one_is_identity():
    T = _section()
    one = SectorSymbol(lambda z: np.ones_like(z), "1", sup_norm=1.0)
    out, _ = hinfty_extend(T, one, SECTOR)
    assert np.linalg.norm(out.entries - np.eye(T.dim), 2) < 1e-4


def test_extension_imaginary_power():
    T = _section()
    ip = imaginary_power_symbol(1.0, SECTOR.mu)
    out, _ = hinfty_extend(T, ip, SECTOR)
    exact = np.diag(ip(_lam(T)))
    assert np.linalg.norm(out.entries - exact, 2) < 1e-4
    assert np.linalg.norm(out.entries, 2) <= 1.0 + 1e-6


def test_imaginary_power_symbol_properties():
    mu = 0.7
    a = 2.0
    xi = imaginary_power_symbol(a, mu)
    assert xi.sup_norm(mu) == pytest.approx(math.exp(a * mu))
    zero = imaginary_power_symbol(0.0, mu)
    zs = np.exp(1j * 0.3) * np.logspace(-2, 2, 11)
    assert np.allclose(zero(zs), 1.0)
    # |xi(r e^{i phi})| = e^{-a phi}
    for phi in (-0.6, 0.0, 0.5):
        z = 2.0 * np.exp(1j * phi)
        assert abs(xi(np.array([z]))[0]) == pytest.approx(math.exp(-a * phi), rel=1e-12)


def test_spectral_calculus_identity_and_semigroup():
    basis = get_basis(1.0, 60)
    m = basis.multiplicity
    f = SampledFunction.from_callable(basis.grid, m,
                                      lambda x: (1 + x) * np.exp(-x**2 / 2))
    one = SectorSymbol(lambda z: np.ones_like(z), "1", sup_norm=1.0)
    rec = spectral_calculus(basis, one, f)
    assert dunkl_norm(rec - f, 2) < 1e-8 * dunkl_norm(f, 2)
    t = 0.6
    et = SectorSymbol(lambda z: np.exp(-t * z), "heat", sup_norm=1.0)
    a = spectral_calculus(basis, et, f)
    b = hermite_semigroup_apply(f, t, basis)
    assert dunkl_norm(a - b, 2) < 1e-12


def test_spectral_calculus_tail_warning():
    basis = get_basis(1.0, 20)
    m = basis.multiplicity
    spike = SampledFunction.from_callable(basis.grid, m,
                                          lambda x: np.exp(-(x - 1) ** 2 / 0.001))
    one = SectorSymbol(lambda z: np.ones_like(z), "1", sup_norm=1.0)
    with pytest.warns(UserWarning, match="tail"):
        spectral_calculus(basis, one, spike)


def test_spectral_matches_extension():
    basis = get_basis(1.0, 40)
    m = basis.multiplicity
    T = _section(40)
    ip = imaginary_power_symbol(1.0, SECTOR.mu)
    ext, _ = hinfty_extend(T, ip, SECTOR)
    f = SampledFunction.from_callable(basis.grid, m,
                                      lambda x: np.sin(x) * np.exp(-x**2 / 2))
    coef = basis.coefficients(f)
    via_matrix = basis.synthesize(ext.entries @ coef)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        via_spectral = spectral_calculus(basis, ip, f)
    assert dunkl_norm(via_matrix - via_spectral, 2) < 1e-4 * dunkl_norm(via_spectral, 2)


def test_norm_bound_for_bounded_symbols(rng):
    T = _section()
    worst = -np.inf
    for i in range(20):
        bs = rng.uniform(0.2, 5.0, size=3)
        amps = rng.normal(size=3) + 1j * rng.normal(size=3)
        xi = SectorSymbol(
            lambda z, bs=bs, amps=amps: sum(
                a * (b * z) / ((1 + b * z) * (1 + z / (4 * b)))
                for b, a in zip(bs, amps)),
            f"rational-{i}", psi_decay=1.0)
        out, _ = hinfty_extend(T, xi, SECTOR)
        worst = max(worst, float(np.linalg.norm(out.entries, 2)) - xi.sup_norm(SECTOR.mu))
    assert worst <= 1e-6


def test_convergence_theorem():
    T = _section()
    ip = imaginary_power_symbol(1.0, SECTOR.mu)
    seq = [SectorSymbol(lambda z, s=s: ip(z) * (s * z / (1 + s * z)) / (1 + z / s),
                        f"stage-{s:g}")
           for s in (1e2, 1e3, 1e4, 2e5, 1e8)]
    rep = convergence_theorem_check(T, seq, ip)
    assert rep["probe_errors"] == sorted(rep["probe_errors"], reverse=True)
    assert rep["final_probe_error"] < 1e-3
    assert rep["norm_bound_holds"]
    const = convergence_theorem_check(T, [ip, ip], ip)
    assert const["final_probe_error"] == 0.0


def test_cz_trivial_for_large_level():
    basis = get_basis(1.0, 40)
    m = basis.multiplicity
    f = SampledFunction.from_callable(basis.grid, m, lambda x: np.exp(-x**2))
    dec = cz_decompose(f, 10.0)
    assert dec.constants["n_balls"] == 0
    assert not dec.bad
    assert np.array_equal(dec.good.values, np.abs(f.values.real).astype(complex))


def test_cz_spike_properties():
    basis = get_basis(1.0, 40)
    m = basis.multiplicity
    grid = basis.grid
    f = SampledFunction.from_callable(grid, m, lambda x: np.exp(-(x - 1) ** 2 / 0.02))
    f = f * (1.0 / dunkl_norm(f, 1))
    lam = 1.0
    dec = cz_decompose(f, lam)
    assert dec.constants["n_balls"] >= 1
    # exact reassembly
    assert np.max(np.abs(dec.reassemble().values - np.abs(f.values))) < 1e-14
    # property (v): sum mu(B_j) <= c/lam ||f||_1 with modest c
    assert dec.constants["sum_mu_times_lam_over_l1"] < 8.0
    # disjoint dyadic intervals: overlap exactly 1
    assert dec.overlap == 1
    mes = grid.measure(m)
    for (c0, r0), fj in zip(dec.balls, dec.bad):
        inside = np.abs(grid.nodes - c0) <= r0 + 1e-12
        assert np.all(fj.values[~inside] == 0)
        # property (iv) with the lambda factor
        assert float(np.sum(np.abs(fj.values) * mes)) <= \
            2.0 * lam * float(np.sum(mes[inside])) * (1 + 1e-9)
    # good part bounded by a doubling multiple of the level
    assert dec.constants["sup_good_over_lam"] <= 2.0 ** (2 * m.gamma + 1) + 1e-9


def test_cz_rejects_bad_input():
    basis = get_basis(1.0, 40)
    m = basis.multiplicity
    f = SampledFunction.from_callable(basis.grid, m, lambda x: np.exp(-x**2) * 1j)
    with pytest.raises(ValueError):
        cz_decompose(f, 1.0)
    g = SampledFunction.from_callable(basis.grid, m, lambda x: np.exp(-x**2))
    with pytest.raises(ValueError):
        cz_decompose(g, 0.0)


def _spike_family(grid, m):
    out = []
    for j in range(5):
        sig = 2.0 ** (-j)
        sp = SampledFunction.from_callable(
            grid, m, lambda x, s=sig: np.exp(-(x - 1.0) ** 2 / (2 * s * s)))
        out.append(sp * (1.0 / dunkl_norm(sp, 1)))
    return out


def test_weak_type_chebyshev_for_identity():
    basis = get_basis(1.0, 120)
    m = basis.multiplicity
    one = SectorSymbol(lambda z: np.ones_like(z), "1", sup_norm=1.0)
    lambdas = np.logspace(-2, 3, 21)
    rep = weak_type_harness(one, _spike_family(basis.grid, m), lambdas, basis)
    # lam * mu{|f| > lam} <= ||f||_1 exactly (Chebyshev); basis truncation
    # of the narrowest spikes costs a little
    assert rep["sup_ratio"] <= 1.05


def test_weak_type_imaginary_powers_finite_and_stable():
    basis = get_basis(1.0, 120)
    m = basis.multiplicity
    lambdas = np.logspace(-2, 3, 26)
    fam = _spike_family(basis.grid, m)
    for a in (1.0, 3.0):
        xi = imaginary_power_symbol(a, SECTOR.mu)
        rep = weak_type_harness(xi, fam, lambdas, basis)
        assert np.isfinite(rep["sup_ratio"])
        assert rep["sup_ratio"] > 0


def test_weak_type_heat_symbol_kernel_bound():
    basis = get_basis(1.0, 120)
    m = basis.multiplicity
    grid = basis.grid
    lambdas = np.logspace(-2, 3, 21)
    fam = _spike_family(grid, m)
    rep = weak_type_harness(exp_symbol(), fam, lambdas, basis)
    # kernel-integral oracle: |e^{-H} f| <= sup_y H_1(., y) ||f||_1 pointwise,
    # so lam mu{.} / ||f||_1 is bounded by the Chebyshev constant of that bound
    peak = float(np.max(np.real(mehler_kernel(1.0, grid.nodes[:, None],
                                              grid.nodes[None, :], m))))
    mes = grid.measure(m)
    for f in fam:
        g = np.abs(hermite_semigroup_apply(f, 1.0, basis).values)
        bound = peak * dunkl_norm(f, 1)
        assert float(np.max(g)) <= bound * (1 + 1e-6)
    assert np.isfinite(rep["sup_ratio"])
