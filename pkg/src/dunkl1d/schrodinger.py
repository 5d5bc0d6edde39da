"""The Schrodinger semigroup e^{-tL}, L = A + V, via Trotter splitting and
a dense spectral reference, with positivity/domination/sandwich checks.

The reference operator discretizes A through the transform multiplier (so the
Trotter product converges to exactly this generator), adds diag(V), and
eigendecomposes in the frame symmetrized by the discrete Dunkl measure.
"""

import numpy as np

from .measure import SampledFunction, dunkl_norm
from .operators import discretize_operator
from .heat import heat_apply, heat_kernel_matrix


class Potential:
    """Nonnegative potential with a label; callable on node arrays."""

    __slots__ = ("fn", "label")

    def __init__(self, fn, label="V"):
        self.fn = fn
        self.label = label

    def __call__(self, x):
        v = np.asarray(self.fn(np.asarray(x, dtype=np.float64)), dtype=np.float64)
        if np.any(v < 0):
            raise ValueError(f"potential {self.label!r} is negative somewhere")
        return v


def potential_x2():
    return Potential(lambda x: x * x, "x2")


def potential_x4():
    return Potential(lambda x: x**4, "x4")


def potential_well(height=25.0, half_width=2.0):
    """Flat well at the origin: 0 inside |x| <= a, `height` outside."""
    return Potential(lambda x: np.where(np.abs(x) <= half_width, 0.0, height), "well")


class SchrodingerOperator:
    """Dense spectral section of L = A + V with its eigendecomposition."""

    __slots__ = ("grid", "multiplicity", "potential", "mes", "eigs", "vecs")

    def __init__(self, grid, m, potential, plan=None):
        op = discretize_operator("schrodinger", "grid", m, grid=grid,
                                 potential=potential, method="spectral", plan=plan)
        self.grid = grid
        self.multiplicity = m
        self.potential = potential
        self.mes = grid.measure(m)
        root = np.sqrt(self.mes)
        sym = root[:, None] * op.entries / root[None, :]
        sym = 0.5 * (sym + sym.T)
        self.eigs, self.vecs = np.linalg.eigh(sym)

    def evolve(self, f, t):
        """e^{-tL} f by the eigendecomposition (exact for the section)."""
        root = np.sqrt(self.mes)
        coef = self.vecs.T @ (root * f.values)
        out = (self.vecs @ (np.exp(-t * self.eigs) * coef)) / root
        return SampledFunction(self.grid, out, self.multiplicity)

    def kernel_matrix(self, t):
        """W_t(x_i, y_j) against w_k(y) dy."""
        core = (self.vecs * np.exp(-t * self.eigs)) @ self.vecs.T
        root = np.sqrt(self.mes)
        return core / root[:, None] / root[None, :]


def schrodinger_kernel(potential, t, grid, m, operator=None, negativity_floor=-1e-10):
    """W_t matrix for L = A + V; entries below the floor indicate a bug.

    For smooth potentials the default -1e-10 floor holds; discontinuous ones
    (e.g. the truncated well) carry spectral Gibbs error around 1e-6 and need
    a matching floor.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if operator is None:
        operator = SchrodingerOperator(grid, m, potential)
    w = operator.kernel_matrix(t)
    floor = float(np.min(w))
    if floor < negativity_floor:
        raise AssertionError(f"Schrodinger kernel entry {floor} below "
                             f"{negativity_floor}: discretization bug")
    return w


def trotter_evolve(f, potential, t, n, plan, growth_tol=1e-8):
    """(e^{-tA/n} e^{-tV/n})^n f, alternating multiplier and pointwise factors.

    Both factors contract L^2_k, so intermediate norms must not grow; growth
    beyond growth_tol raises.
    """
    if n < 1 or not t > 0:
        raise ValueError("need n >= 1 and t > 0")
    vfac = np.exp(-(t / n) * potential(f.grid.nodes))
    cur = f
    prev_norm = dunkl_norm(cur, 2)
    for _ in range(n):
        cur = heat_apply(cur, t / n, plan)
        cur = SampledFunction(f.grid, cur.values * vfac, f.multiplicity)
        nn = dunkl_norm(cur, 2)
        if nn > prev_norm * (1.0 + growth_tol):
            raise RuntimeError(f"Trotter step grew the L2 norm {prev_norm} -> {nn}; "
                               "the split factors must contract")
        prev_norm = nn
    return cur


def domination_check(f, potential, t, plan, operator=None, slack=1e-8):
    """Pointwise |e^{-tL} f| <= e^{-tA}|f| + slack, reported with constants."""
    if operator is None:
        operator = SchrodingerOperator(f.grid, f.multiplicity, potential, plan=plan)
    lhs = np.abs(operator.evolve(f, t).values)
    rhs = np.real(heat_apply(abs(f), t, plan).values)
    worst = float(np.max(lhs - rhs))
    linf = float(np.max(lhs))
    l2in = dunkl_norm(f, 2)
    return {
        "t": float(t),
        "potential": potential.label,
        "max_violation": worst,
        "passed": bool(worst <= slack),
        "linf_out_over_l2_in": linf / l2in if l2in > 0 else 0.0,
    }


def sandwich_check(potential, t, grid, m, operator=None, slack=1e-10):
    """0 <= W_t <= K_t + slack pointwise on the grid."""
    w = schrodinger_kernel(potential, t, grid, m, operator=operator,
                           negativity_floor=-max(slack, 1e-10))
    k = heat_kernel_matrix(t, grid, m)
    over = float(np.max(w - k))
    under = float(np.min(w))
    return {
        "t": float(t),
        "potential": potential.label,
        "max_over_Kt": over,
        "min_Wt": under,
        "passed": bool(over <= slack and under >= -slack),
    }
