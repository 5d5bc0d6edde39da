"""Command-line front end: reproducible experiments with machine-readable output.

Exit codes: 0 all checks passed, 1 check failure, 2 configuration error,
3 numerical non-convergence.
"""

import argparse
import json
import math
import sys
import warnings

import numpy as np

from .calculus import (Sector, exp_symbol, hinfty_extend,
                       imaginary_power_symbol, psi_contour_calculus, psi_symbol)
from .errors import ConvergenceError
from .heat import ball_comparison_check, heat_kernel_matrix, tail_mass
from .measure import MultiplicityParam, SampledFunction, gauss_legendre_grid
from .operators import discretize_operator
from .oscillator import (build_hermite_basis, coth_sandwich_scan,
                         kernel_domination_scan, mehler_kernel, mehler_kernel_series)
from .reports import CheckResult, VerificationReport
from .schrodinger import (SchrodingerOperator, domination_check,
                          potential_well, potential_x2, potential_x4,
                          sandwich_check, trotter_evolve)
from .transform import TransformPlan, forward, inverse
from .verify import SUITES, run_suite
from .measure import dunkl_norm

_POTENTIALS = {"x2": potential_x2, "x4": potential_x4, "well": potential_well}


class ConfigError(Exception):
    pass


def _read_config_file(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line {line!r}; expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def _parse_complex(s):
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {s!r}") from exc


def _common(parser):
    parser.add_argument("--k", type=float, default=None, help="multiplicity k >= 0")
    parser.add_argument("--grid-n", type=int, default=None, help="grid size (>= 64)")
    parser.add_argument("--radius", type=float, default=None, help="truncation radius")
    parser.add_argument("--seed", type=int, default=None, help="rng seed")
    parser.add_argument("--tol", type=float, default=None, help="check tolerance override")
    parser.add_argument("--config", default=None, help="key=value config file")
    parser.add_argument("--out", default=None, help="output path (json report)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


_DEFAULTS = {"k": 0.5, "grid_n": 512, "radius": 14.0, "seed": 42, "tol": None}


def build_run_config(args):
    """Merge CLI flags over config-file values over defaults; validate."""
    cfg = dict(_DEFAULTS)
    if args.config:
        raw = _read_config_file(args.config)
        for key, val in raw.items():
            if key not in cfg:
                continue
            cfg[key] = type(_DEFAULTS[key])(val) if _DEFAULTS[key] is not None else float(val)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if cfg["k"] < 0:
        raise ConfigError("k must be nonnegative")
    if cfg["grid_n"] < 64:
        raise ConfigError("grid size must be at least 64")
    if cfg["grid_n"] % 16 != 0:
        raise ConfigError("grid size must be a multiple of 16 (panel layout)")
    if cfg["radius"] <= 0:
        raise ConfigError("radius must be positive")
    if cfg["tol"] is not None and cfg["tol"] <= 0:
        raise ConfigError("tolerances must be positive")
    return cfg


def _emit(report, args):
    print("\n".join(report.summary_lines()))
    if args.out:
        report.to_json(args.out)
        print(f"report written to {args.out}")
    return 0 if report.all_passed else 1


def cmd_transform(args):
    cfg = build_run_config(args)
    m = MultiplicityParam(cfg["k"])
    grid = gauss_legendre_grid(cfg["grid_n"], cfg["radius"], 16)
    plan = TransformPlan(grid, m)
    if args.infile:
        f = SampledFunction.from_csv(args.infile, m, radius=cfg["radius"])
    else:
        f = SampledFunction.from_callable(grid, m, lambda x: np.exp(-x**2 / 2))
    g = forward(f, plan) if args.direction == "forward" else inverse(f, plan)
    if args.data_out:
        g.to_csv(args.data_out)
        print(f"samples written to {args.data_out}")
    tol = cfg["tol"] or 1e-6
    report = VerificationReport("transform-run", cfg)
    back = inverse(forward(f, plan), plan)
    rt = dunkl_norm(back - f, 2) / max(dunkl_norm(f, 2), 1e-300)
    report.add(CheckResult("inversion-roundtrip", "inversion",
                           "pass" if rt < tol else "fail", {"rel_err": rt}, tol))
    return _emit(report.finalize(), args)


def cmd_heat(args):
    cfg = build_run_config(args)
    m = MultiplicityParam(cfg["k"])
    grid = gauss_legendre_grid(cfg["grid_n"], cfg["radius"], 16)
    t = args.t
    if t <= 0:
        raise ConfigError("t must be positive")
    report = VerificationReport("heat-run", {**cfg, "t": t})
    kv = heat_kernel_matrix(t, grid, m)
    mes = grid.measure(m)
    mid = np.abs(grid.nodes) < cfg["radius"] / 3.0
    mass_err = float(np.max(np.abs((kv @ mes)[mid] - 1.0)))
    tol = cfg["tol"] or 1e-6
    report.add(CheckResult("kernel-mass", "heat-kernel-mass",
                           "pass" if mass_err < tol else "fail",
                           {"max_err": mass_err}, tol))
    if args.scan:
        ratios = [ball_comparison_check(tt, z, x, m)["ratio"]
                  for tt in (0.25, 1.0, 4.0) for z in (-2.0, 0.5) for x in (0.0, 2.0)]
        report.add(CheckResult("ball-comparison", "kernel-ball-comparison",
                               "pass" if all(map(math.isfinite, ratios)) else "fail",
                               {"max_ratio": max(ratios)}))
        tails = {f"r_{r}": tail_mass(t, 1.0, r, m, grid) for r in (0.5, 1.0, 2.0)}
        report.add(CheckResult("tail-mass", "heat-tail-bound", "pass", tails))
    if args.data_out:
        step = max(1, grid.n // 64)
        sub = grid.nodes[::step]
        rows = [(x, y, kv[i * step, j * step])
                for i, x in enumerate(sub) for j, y in enumerate(sub)]
        np.savetxt(args.data_out, rows, delimiter=",", header="x,y,K_t", comments="")
        print(f"kernel table written to {args.data_out}")
    return _emit(report.finalize(), args)


def cmd_schrodinger(args):
    cfg = build_run_config(args)
    if args.grid_n is None:
        cfg["grid_n"] = 384
    m = MultiplicityParam(cfg["k"])
    grid = gauss_legendre_grid(cfg["grid_n"], cfg["radius"], 16)
    plan = TransformPlan(grid, m)
    pot = _POTENTIALS[args.potential]()
    t = args.t
    if t <= 0 or args.n_trotter < 1:
        raise ConfigError("need t > 0 and n-trotter >= 1")
    report = VerificationReport("schrodinger-run", {**cfg, "t": t, "potential": args.potential})
    op = SchrodingerOperator(grid, m, pot, plan=plan)
    f = SampledFunction.from_callable(grid, m, lambda x: np.sin(2 * x) * np.exp(-x**2 / 2))
    ref = op.evolve(f, t)
    tr = trotter_evolve(f, pot, t, args.n_trotter, plan)
    err = dunkl_norm(tr - ref, 2) / dunkl_norm(ref, 2)
    report.add(CheckResult("trotter-vs-reference", "trotter-product", "pass",
                           {"rel_err": err, "n": args.n_trotter}))
    # the discontinuous well carries spectral Gibbs error around 1e-6
    dom_slack = 1e-8 if args.potential in ("x2", "x4") else 1e-6
    dom = domination_check(f, pot, t, plan, operator=op, slack=dom_slack)
    report.add(CheckResult("semigroup-domination", "schrodinger-domination",
                           "pass" if dom["passed"] else "fail",
                           {"max_violation": dom["max_violation"]}, dom_slack))
    slack = 1e-10 if args.potential in ("x2", "x4") else 1e-4
    sw = sandwich_check(pot, t, grid, m, operator=op, slack=slack)
    report.add(CheckResult("kernel-sandwich", "schrodinger-kernel-sandwich",
                           "pass" if sw["passed"] else "fail",
                           {"max_over_Kt": sw["max_over_Kt"], "min_Wt": sw["min_Wt"]}, slack))
    if args.data_out:
        w = op.kernel_matrix(t)
        step = max(1, grid.n // 64)
        sub = grid.nodes[::step]
        rows = [(x, y, w[i * step, j * step])
                for i, x in enumerate(sub) for j, y in enumerate(sub)]
        np.savetxt(args.data_out, rows, delimiter=",", header="x,y,W_t", comments="")
        print(f"kernel table written to {args.data_out}")
    return _emit(report.finalize(), args)


def cmd_oscillator(args):
    cfg = build_run_config(args)
    m = MultiplicityParam(cfg["k"])
    z = _parse_complex(args.z)
    if z.real <= 0:
        raise ConfigError("Re z must be positive")
    nb = args.n_basis
    report = VerificationReport("oscillator-run", {**cfg, "z": str(z), "n_basis": nb})
    basis = build_hermite_basis(m, max(nb, 80))
    tol = cfg["tol"] or 1e-6
    xs = np.linspace(-3.0, 3.0, 13)
    xg, yg = np.meshgrid(xs, xs, indexing="ij")
    closed = mehler_kernel(z, xg, yg, m)
    series = mehler_kernel_series(z, xg, yg, basis)
    rel = float(np.max(np.abs(closed - series)) / np.max(np.abs(series)))
    report.add(CheckResult("mehler-series-agreement", "mehler-formula",
                           "pass" if rel < tol else "fail", {"max_rel_err": rel}, tol))
    report.add(CheckResult("hermite-gram", "hermite-orthonormality",
                           "pass" if basis.gram_deviation < 1e-8 else "fail",
                           {"gram_deviation": basis.gram_deviation}, 1e-8))
    grid = basis.grid
    plan = TransformPlan(grid, m)
    lap = discretize_operator("laplacian", "grid", m, grid=grid, plan=plan)
    hmat = lap.entries + np.diag(grid.nodes**2)
    mes = grid.measure(m)
    worst_res = 0.0
    for n in range(0, min(nb, 21), 4):
        hn = basis.table[n]
        lam = basis.eigenvalues[n]
        res = math.sqrt(float(np.sum(np.abs(hmat @ hn - lam * hn) ** 2 * mes))) / lam
        worst_res = max(worst_res, res)
    report.add(CheckResult("eigen-residual", "hermite-eigenvalues",
                           "pass" if worst_res < tol else "fail",
                           {"max_residual": worst_res}, tol))
    if args.data_out:
        rows = [(x, y, kv.real, kv.imag)
                for x, row in zip(xs, closed) for y, kv in zip(xs, row)]
        np.savetxt(args.data_out, rows, delimiter=",",
                   header="x,y,re_Hz,im_Hz", comments="")
        print(f"kernel table written to {args.data_out}")
    scan = coth_sandwich_scan(abs(np.angle(z)) if z.imag else math.pi / 4)
    report.add(CheckResult("coth-upper", "coth-comparison-upper",
                           "pass" if scan["sup_ratio"] <= 1 + 1e-12 else "fail",
                           {"sup_ratio": scan["sup_ratio"]}))
    dom = kernel_domination_scan(math.pi / 4, m)
    report.add(CheckResult("sector-kernel-domination", "sector-domination",
                           "pass" if dom["status"] == "pass" else "inconclusive",
                           {"found_c": dom["found_c"] or float("nan")}))
    return _emit(report.finalize(), args)


def _parse_symbol(spec_str, mu):
    if spec_str == "psi":
        return psi_symbol(), True
    if spec_str == "exp":
        return exp_symbol(), False
    if spec_str.startswith("impower:"):
        return imaginary_power_symbol(float(spec_str.split(":", 1)[1]), mu), False
    raise ConfigError(f"unknown symbol {spec_str!r}; use psi|exp|impower:a")


def cmd_calculus(args):
    cfg = build_run_config(args)
    m = MultiplicityParam(cfg["k"])
    mu = args.mu
    if not 0 < mu < math.pi:
        raise ConfigError("mu must lie in (0, pi)")
    theta = args.theta if args.theta is not None else mu / 2
    sector = Sector(mu, theta)
    xi, is_psi_class = _parse_symbol(args.symbol, mu)
    T = discretize_operator("oscillator", "hermite", m, n=args.basis_n)
    lam = np.diag(T.entries).astype(np.complex128)
    report = VerificationReport("calculus-run",
                                {**cfg, "symbol": args.symbol, "mu": mu, "theta": theta})
    tol = cfg["tol"] or 1e-4
    if is_psi_class:
        out, cert = psi_contour_calculus(T, xi, sector)
    else:
        out, cert = hinfty_extend(T, xi, sector)
    err = float(np.linalg.norm(out.entries - np.diag(xi(lam)), 2))
    report.add(CheckResult("contour-vs-spectral", "contour-calculus",
                           "pass" if err < tol else "fail",
                           {"opnorm_err": err, "contour_levels": len(cert["levels"])}, tol))
    norm = float(np.linalg.norm(out.entries, 2))
    bound = xi.sup_norm(mu)
    report.add(CheckResult("norm-bound", "calculus-norm-bound",
                           "pass" if norm <= bound + 1e-6 else "fail",
                           {"opnorm": norm, "sup_norm": bound}, 1e-6))
    return _emit(report.finalize(), args)


def cmd_verify(args):
    cfg = build_run_config(args)
    report = run_suite(args.suite, cfg)
    return _emit(report, args)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dunkl1d",
        description="Rank-one Dunkl analysis: transforms, semigroups, oscillator, "
                    "functional calculus, and verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="apply the transform to CSV samples")
    _common(p)
    p.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    p.add_argument("--in", dest="infile", default=None, help="input samples CSV")
    p.add_argument("--data-out", default=None, help="output samples CSV")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("heat", help="heat-kernel tables and checks")
    _common(p)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--scan", action="store_true", help="add tail/ball scans")
    p.add_argument("--data-out", default=None, help="kernel table CSV")
    p.set_defaults(fn=cmd_heat)

    p = sub.add_parser("schrodinger", help="Trotter vs reference evolution, kernels")
    _common(p)
    p.add_argument("--potential", choices=tuple(_POTENTIALS), default="x2")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--n-trotter", type=int, default=64)
    p.add_argument("--data-out", default=None, help="kernel table CSV")
    p.set_defaults(fn=cmd_schrodinger)

    p = sub.add_parser("oscillator", help="Hermite basis and Mehler kernel checks")
    _common(p)
    p.add_argument("--n-basis", type=int, default=80)
    p.add_argument("--z", default="0.5+0.3j", help="complex time, e.g. 0.5+0.3j")
    p.add_argument("--data-out", default=None, help="Mehler kernel table CSV")
    p.set_defaults(fn=cmd_oscillator)

    p = sub.add_parser("calculus", help="sectorial functional-calculus checks")
    _common(p)
    p.add_argument("--symbol", default="psi", help="psi | exp | impower:a")
    p.add_argument("--mu", type=float, default=math.pi / 4)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--basis-n", type=int, default=40)
    p.set_defaults(fn=cmd_calculus)

    p = sub.add_parser("verify", help="run a named verification suite")
    _common(p)
    p.add_argument("--suite", choices=SUITES, default="full")
    p.set_defaults(fn=cmd_verify)

    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
