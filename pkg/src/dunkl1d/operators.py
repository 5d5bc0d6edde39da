"""The rank-one difference-differential operator T, the Dunkl Laplacian,
and their finite-dimensional sections.

T f(x) = f'(x) + k (f(x) - f(-x)) / x, with the removable singularity at 0
filled by (1 + 2k) f'(0).  All matrix sections represent the POSITIVE
operator -Delta_k (and its Schrodinger/oscillator variants), symmetric with
respect to the discrete Dunkl inner product diag(w_i w_k(x_i)).
"""

import struct

import numpy as np

from .measure import SampledFunction, weight


# -- differentiation helpers -------------------------------------------------

def _central_d1(fn, x, h):
    return (fn(x - 2 * h) - 8 * fn(x - h) + 8 * fn(x + h) - fn(x + 2 * h)) / (12 * h)


def _central_d2(fn, x, h):
    return (-fn(x - 2 * h) + 16 * fn(x - h) - 30 * fn(x)
            + 16 * fn(x + h) - fn(x + 2 * h)) / (12 * h * h)


def _richardson(stencil, fn, x, h):
    # one extrapolation step of the 4th-order stencils -> 6th order
    return (16.0 * stencil(fn, x, h / 2) - stencil(fn, x, h)) / 15.0


def fornberg_weights(x0, xs, der):
    """Finite-difference weights for derivative `der` at x0 on arbitrary nodes."""
    n = len(xs)
    c = np.zeros((n, der + 1))
    c1 = 1.0
    c4 = xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, der)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for s in range(mn, 0, -1):
                    c[i, s] = c1 * (s * c[i - 1, s - 1] - c5 * c[i - 1, s]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for s in range(mn, 0, -1):
                c[j, s] = (c4 * c[j, s] - s * c[j, s - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, der]


def derivative_matrix(grid, der=1, width=5):
    """Dense differentiation matrix on the (possibly nonuniform) grid nodes."""
    n = grid.n
    if n < width:
        raise ValueError(f"grid too small for a {width}-point stencil")
    half = width // 2
    mat = np.zeros((n, n))
    for i in range(n):
        lo = min(max(i - half, 0), n - width)
        sl = slice(lo, lo + width)
        mat[i, sl] = fornberg_weights(grid.nodes[i], grid.nodes[sl], der)
    return mat


# -- pointwise application ---------------------------------------------------

def apply_T(f, m, x=None, h=0.02):
    """T f at point(s) x for callable f, or on the whole grid for sampled f."""
    if isinstance(f, SampledFunction):
        tm = t_matrix(f.grid, f.multiplicity)
        return SampledFunction(f.grid, tm @ f.values, f.multiplicity)
    k = m.single
    x = np.asarray(x, dtype=np.float64)
    d1 = _richardson(_central_d1, f, x, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        diff = np.where(x != 0.0, (f(x) - f(-x)) / np.where(x != 0.0, x, 1.0), 0.0)
    out = d1 + k * diff
    return np.where(x == 0.0, (1.0 + 2.0 * k) * d1, out)


def apply_laplacian(f, m, x=None, h=0.02):
    """Delta_k f = f'' + (2k/x) f' - (k/x^2)(f(x) - f(-x)) at point(s) x."""
    if isinstance(f, SampledFunction):
        tm = t_matrix(f.grid, f.multiplicity)
        return SampledFunction(f.grid, tm @ (tm @ f.values), f.multiplicity)
    k = m.single
    x = np.asarray(x, dtype=np.float64)
    d1 = _richardson(_central_d1, f, x, h)
    d2 = _richardson(_central_d2, f, x, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = np.where(x != 0.0, x, 1.0)
        interior = d2 + (2.0 * k / xs) * d1 - (k / (xs * xs)) * (f(x) - f(-x))
    return np.where(x == 0.0, (1.0 + 2.0 * k) * d2, interior)


def t_matrix(grid, m):
    """Matrix of T on grid samples: Fornberg derivative plus exact reflection."""
    k = m.single
    d1 = derivative_matrix(grid, der=1)
    n = grid.n
    refl = np.zeros((n, n))
    inv_x = 1.0 / grid.nodes
    refl[np.arange(n), np.arange(n)] = k * inv_x
    refl[np.arange(n), np.arange(n)[::-1]] -= k * inv_x
    return d1 + refl


# -- matrix sections ----------------------------------------------------------

class OperatorMatrix:
    """Finite section of an operator, tagged with its representation basis."""

    __slots__ = ("entries", "basis_tag", "multiplicity", "grid", "eigenvalues")

    def __init__(self, entries, basis_tag, m, grid=None, eigenvalues=None):
        entries = np.asarray(entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("operator sections are square")
        self.entries = entries
        self.basis_tag = basis_tag
        self.multiplicity = m
        self.grid = grid
        self.eigenvalues = eigenvalues

    @property
    def dim(self):
        return self.entries.shape[0]

    def is_diagonal(self, tol=1e-12):
        off = self.entries - np.diag(np.diag(self.entries))
        return float(np.max(np.abs(off))) <= tol * max(1.0, float(np.max(np.abs(self.entries))))

    def symmetry_defect(self):
        """Relative asymmetry in the discrete Dunkl inner product."""
        if self.basis_tag == "hermite":
            d = np.ones(self.dim)
        else:
            d = self.grid.measure(self.multiplicity)
        dm = d[:, None] * self.entries
        return float(np.linalg.norm(dm - dm.T) / max(np.linalg.norm(dm), 1e-300))

    def save_binary(self, path):
        """Row-major float64/complex128 dump with a dims header."""
        cplx = np.iscomplexobj(self.entries)
        with open(path, "wb") as fh:
            fh.write(b"DOP1")
            fh.write(struct.pack("<BII", 1 if cplx else 0, *self.entries.shape))
            fh.write(np.ascontiguousarray(self.entries).tobytes())

    @classmethod
    def load_binary(cls, path, m, basis_tag="grid", grid=None):
        with open(path, "rb") as fh:
            if fh.read(4) != b"DOP1":
                raise ValueError("not an operator dump")
            cplx, rows, cols = struct.unpack("<BII", fh.read(9))
            dt = np.complex128 if cplx else np.float64
            entries = np.frombuffer(fh.read(), dtype=dt).reshape(rows, cols)
        return cls(entries, basis_tag, m, grid=grid)

    def save_csv(self, path):
        np.savetxt(path, self.entries.real if not np.iscomplexobj(self.entries)
                   else np.column_stack([self.entries.real, self.entries.imag]),
                   delimiter=",")


def _symmetrize_weighted(mat, mes, max_defect=0.05):
    dm = mes[:, None] * mat
    sym = 0.5 * (dm + dm.T)
    defect = float(np.linalg.norm(dm - sym) / max(np.linalg.norm(dm), 1e-300))
    if defect > max_defect:
        raise ValueError(f"operator section asymmetric beyond tolerance ({defect:.2e}); "
                         "stencil or weight bug")
    return sym / mes[:, None], defect


def hermite_position_matrix(m, n):
    """Tridiagonal position operator in the generalized Hermite basis."""
    from .oscillator import recurrence_coefficients

    b = recurrence_coefficients(m, n)
    x = np.zeros((n, n))
    idx = np.arange(n - 1)
    x[idx, idx + 1] = b[1:]
    x[idx + 1, idx] = b[1:]
    return x


def discretize_operator(op_kind, basis, m, grid=None, n=None, potential=None,
                        method="spectral", plan=None, stencil_width=5):
    """Finite section of -Delta_k, the oscillator, or a Schrodinger operator.

    basis "hermite" needs n; basis "grid" needs a grid.  method selects the
    grid-side Laplacian: "spectral" (transform multiplier, symmetrized in the
    discrete Dunkl inner product; the reference) or "stencil" (Fornberg
    differences of the expanded form, the cheap path).
    """
    if op_kind not in ("laplacian", "oscillator", "schrodinger"):
        raise ValueError(f"unknown operator kind {op_kind!r}")
    if op_kind == "schrodinger" and potential is None:
        raise ValueError("schrodinger sections need a potential")
    if basis == "hermite":
        if n is None:
            raise ValueError("hermite sections need a size n")
        lam = 2.0 * np.arange(n) + 2.0 * m.gamma + m.d
        if op_kind == "oscillator":
            return OperatorMatrix(np.diag(lam), "hermite", m, eigenvalues=lam)
        x = hermite_position_matrix(m, n)
        lap = np.diag(lam) - x @ x
        if op_kind == "laplacian":
            return OperatorMatrix(lap, "hermite", m)
        from .oscillator import build_hermite_basis

        basis_obj = build_hermite_basis(m, n, grid=grid)
        mes = basis_obj.grid.measure(m)
        vvals = _potential_values(potential, basis_obj.grid.nodes)
        vmat = basis_obj.table @ (basis_obj.table * (vvals * mes)).T
        return OperatorMatrix(lap + vmat, "hermite", m)
    if basis != "grid":
        raise ValueError(f"unknown basis {basis!r}")
    if grid is None:
        raise ValueError("grid sections need a grid")
    mes = grid.measure(m)
    if method == "spectral":
        from .transform import TransformPlan

        if plan is None:
            plan = TransformPlan(grid, m)
        xi2 = plan.frequencies**2
        lap = np.real(plan._inv @ (xi2[:, None] * plan._fwd))
        # grid modes invisible to the discrete transform would otherwise get
        # eigenvalue ~0 (the section annihilates them); park them at the
        # band edge xi_max^2 where the true Laplacian exceeds that anyway
        proj = np.real(plan._inv @ plan._fwd)
        lap += float(np.max(xi2)) * (np.eye(grid.n) - proj)
        lap, _ = _symmetrize_weighted(lap, mes)
    elif method == "stencil":
        # expanded form -(f'' + (2k/x) f' - (k/x^2)(f - f(-x))); one-sided
        # boundary rows break exact symmetry, as stencils do
        k = m.single
        d1 = derivative_matrix(grid, der=1, width=stencil_width)
        d2 = derivative_matrix(grid, der=2, width=stencil_width)
        n_pts = grid.n
        refl = np.zeros((n_pts, n_pts))
        inv_x2 = 1.0 / grid.nodes**2
        refl[np.arange(n_pts), np.arange(n_pts)] = k * inv_x2
        refl[np.arange(n_pts), np.arange(n_pts)[::-1]] -= k * inv_x2
        lap = -(d2 + (2.0 * k / grid.nodes)[:, None] * d1 - refl)
    else:
        raise ValueError(f"unknown method {method!r}")
    if op_kind == "laplacian":
        return OperatorMatrix(lap, "grid", m, grid=grid)
    if op_kind == "oscillator":
        return OperatorMatrix(lap + np.diag(grid.nodes**2), "grid", m, grid=grid)
    vvals = _potential_values(potential, grid.nodes)
    if np.any(vvals < 0):
        raise ValueError("potential must be nonnegative")
    return OperatorMatrix(lap + np.diag(vvals), "grid", m, grid=grid)


def _potential_values(potential, nodes):
    if callable(potential):
        return np.asarray(potential(nodes), dtype=np.float64)
    vals = np.asarray(potential, dtype=np.float64)
    if vals.shape != nodes.shape:
        raise ValueError("potential samples must match the grid")
    return vals
