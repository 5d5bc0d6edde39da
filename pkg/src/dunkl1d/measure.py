"""Reflection-group weights, quadrature grids, and weighted norms.

Everything downstream integrates against the measure w_k(x) dx with
w_k(x) = prod_j |x_j|^(2 k_j).  Grids are symmetric about 0 so that the
reflection x -> -x is an exact index reversal.
"""

import json
import math
import warnings

import numpy as np


class TruncationLossWarning(UserWarning):
    """Grid truncation radius is losing more mass than the declared tolerance."""


class MultiplicityParam:
    """Deformation parameter(s) k >= 0 with the derived index gamma = sum(k).

    Rank one is a single k; the product case takes one k per coordinate.
    """

    __slots__ = ("k",)

    def __init__(self, k):
        if np.isscalar(k):
            k = (float(k),)
        else:
            k = tuple(float(v) for v in k)
        if not k:
            raise ValueError("at least one multiplicity required")
        if any(v < 0 for v in k):
            raise ValueError(f"multiplicities must be nonnegative, got {k}")
        object.__setattr__(self, "k", k)

    @property
    def gamma(self):
        return float(sum(self.k))

    @property
    def d(self):
        return len(self.k)

    @property
    def single(self):
        """The rank-one multiplicity; errors in the product case."""
        if self.d != 1:
            raise ValueError("rank-one multiplicity requested from a product parameter")
        return self.k[0]

    def gaussian_mass(self):
        """The normalization constant int exp(-|x|^2/2) w_k(x) dx (closed form)."""
        return float(np.prod([2.0 ** (kj + 0.5) * math.gamma(kj + 0.5) for kj in self.k]))

    def __repr__(self):
        return f"MultiplicityParam(k={self.k[0] if self.d == 1 else self.k})"

    def __eq__(self, other):
        return isinstance(other, MultiplicityParam) and self.k == other.k

    def __hash__(self):
        return hash(self.k)


def weight(x, m):
    """Dunkl weight prod_j |x_j|^(2 k_j).

    For rank one, x is a scalar or array of points; in the product case the
    last axis of x indexes coordinates.
    """
    x = np.asarray(x, dtype=np.float64)
    if m.d == 1:
        k = m.k[0]
        if k == 0.0:
            return np.ones_like(x)
        return np.abs(x) ** (2.0 * k)
    if x.shape[-1] != m.d:
        raise ValueError(f"expected last axis of size {m.d}, got shape {x.shape}")
    out = np.ones(x.shape[:-1], dtype=np.float64)
    for j, kj in enumerate(m.k):
        if kj != 0.0:
            out = out * np.abs(x[..., j]) ** (2.0 * kj)
    return out


def _gl_rule(n):
    nodes, wts = np.polynomial.legendre.leggauss(n)
    return nodes, wts


class QuadratureGrid:
    """Symmetric quadrature grid on [-R, R].

    nodes are ascending and exactly mirror-symmetric (nodes[::-1] == -nodes),
    weights are the plain quadrature weights (the Dunkl weight is applied
    separately).
    """

    __slots__ = ("nodes", "weights", "truncation_radius", "_meta")

    def __init__(self, nodes, weights, truncation_radius, meta=None):
        nodes = np.asarray(nodes, dtype=np.float64)
        weights = np.asarray(weights, dtype=np.float64)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes/weights must be matching 1-d arrays")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if not np.array_equal(nodes[::-1], -nodes):
            raise ValueError("grid nodes must be exactly symmetric about 0")
        self.nodes = nodes
        self.weights = weights
        self.truncation_radius = float(truncation_radius)
        self._meta = dict(meta or {})

    @property
    def n(self):
        return self.nodes.shape[0]

    def measure(self, m):
        """Discrete Dunkl measure weights w_i * w_k(x_i)."""
        return self.weights * weight(self.nodes, m)

    def reflect(self, values):
        """Values of x -> f(-x) on the grid (exact index reversal)."""
        return np.asarray(values)[::-1]

    def refine(self, factor=2):
        """Same family of grid with `factor` times the panel/node count."""
        kind = self._meta.get("kind")
        if kind == "gauss-legendre":
            return gauss_legendre_grid(
                n=self.n * factor,
                radius=self.truncation_radius,
                n_panels=self._meta["n_panels"] * factor,
            )
        if kind == "uniform":
            return uniform_grid(self.n * factor, self.truncation_radius)
        raise ValueError("cannot refine a grid of unknown construction")

    def to_csv(self, path):
        arr = np.column_stack([self.nodes, self.weights])
        np.savetxt(path, arr, delimiter=",", header="node,weight", comments="")

    def to_json(self):
        return {
            "radius": self.truncation_radius,
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
        }

    def __repr__(self):
        return f"QuadratureGrid(n={self.n}, R={self.truncation_radius})"


def gauss_legendre_grid(n=512, radius=14.0, n_panels=16):
    """Composite Gauss-Legendre panels on [-R, R].

    n_panels must be even (so 0 is a panel boundary: the weight |x|^{2k} is
    then smooth inside every panel for integer 2k) and divide n.
    """
    if n_panels % 2 != 0:
        raise ValueError("n_panels must be even so that 0 is a panel edge")
    if n % n_panels != 0:
        raise ValueError("n must be divisible by n_panels")
    per = n // n_panels
    half = n_panels // 2
    base_x, base_w = _gl_rule(per)
    edges = np.linspace(0.0, radius, half + 1)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        c, h = 0.5 * (a + b), 0.5 * (b - a)
        xs.append(c + h * base_x)
        ws.append(h * base_w)
    right_x = np.concatenate(xs)
    right_w = np.concatenate(ws)
    nodes = np.concatenate([-right_x[::-1], right_x])
    weights = np.concatenate([right_w[::-1], right_w])
    return QuadratureGrid(nodes, weights, radius,
                          meta={"kind": "gauss-legendre", "n_panels": n_panels})


def uniform_grid(n, radius=14.0):
    """Midpoint-rule grid (uniform spacing, no node at 0 for even n)."""
    if n % 2 != 0:
        raise ValueError("n must be even for a symmetric midpoint grid")
    h = 2.0 * radius / n
    right = (np.arange(n // 2) + 0.5) * h
    nodes = np.concatenate([-right[::-1], right])
    weights = np.full(n, h)
    return QuadratureGrid(nodes, weights, radius, meta={"kind": "uniform"})


class SampledFunction:
    """A function sampled on a grid, carrying its multiplicity parameter."""

    __slots__ = ("grid", "values", "multiplicity")

    def __init__(self, grid, values, multiplicity):
        values = np.asarray(values)
        if not np.iscomplexobj(values):
            values = values.astype(np.complex128)
        if values.shape != grid.nodes.shape:
            raise ValueError("values must match the grid nodes")
        self.grid = grid
        self.values = values
        self.multiplicity = multiplicity

    @classmethod
    def from_callable(cls, grid, m, fn):
        # vectorized call first, fall back to a scalar loop
        try:
            vals = np.asarray(fn(grid.nodes))
            if vals.shape != grid.nodes.shape:
                raise ValueError
        except Exception:
            vals = np.array([fn(x) for x in grid.nodes])
        return cls(grid, vals, m)

    def reflect(self):
        return SampledFunction(self.grid, self.values[::-1], self.multiplicity)

    def norm(self, p):
        return dunkl_norm(self, p)

    def __add__(self, other):
        return SampledFunction(self.grid, self.values + other.values, self.multiplicity)

    def __sub__(self, other):
        return SampledFunction(self.grid, self.values - other.values, self.multiplicity)

    def __mul__(self, c):
        return SampledFunction(self.grid, self.values * c, self.multiplicity)

    __rmul__ = __mul__

    def __abs__(self):
        return SampledFunction(self.grid, np.abs(self.values), self.multiplicity)

    def to_csv(self, path):
        arr = np.column_stack([self.grid.nodes, self.grid.weights,
                               self.values.real, self.values.imag])
        np.savetxt(path, arr, delimiter=",", header="node,weight,re,im", comments="")

    @classmethod
    def from_csv(cls, path, m, radius=None):
        arr = np.loadtxt(path, delimiter=",", skiprows=1)
        nodes, wts = arr[:, 0], arr[:, 1]
        r = radius if radius is not None else float(np.max(np.abs(nodes)))
        grid = QuadratureGrid(nodes, wts, r)
        return cls(grid, arr[:, 2] + 1j * arr[:, 3], m)

    def to_json(self):
        return {
            "grid": self.grid.to_json(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
            "k": list(self.multiplicity.k),
        }


def truncation_loss(f, p=2):
    """Fraction of the L^p_k mass carried by the outermost panel's worth of nodes."""
    mes = f.grid.measure(f.multiplicity)
    a = np.abs(f.values) ** p * mes
    total = float(np.sum(a))
    if total == 0.0:
        return 0.0
    edge = f.grid.n // 16 + 1
    return float((np.sum(a[:edge]) + np.sum(a[-edge:])) / total)


def edge_decay_ratio(f):
    """max |f| on the outermost nodes relative to the global max."""
    a = np.abs(f.values)
    peak = float(np.max(a))
    if peak == 0.0:
        return 0.0
    edge = max(2, f.grid.n // 64)
    return float(max(np.max(a[:edge]), np.max(a[-edge:])) / peak)


def dunkl_norm(f, p, warn_tol=None):
    """Weighted L^p norm (int |f|^p w_k dx)^(1/p); max of |f| for p = inf.

    Pass warn_tol to get a TruncationLossWarning when the function has not
    decayed below warn_tol (relative) at the grid edge.
    """
    if p != np.inf and p < 1:
        raise ValueError("p must be >= 1")
    if warn_tol is not None and edge_decay_ratio(f) > warn_tol:
        warnings.warn(
            f"function has only decayed to {edge_decay_ratio(f):.2e} of its peak "
            f"at the truncation radius (tol {warn_tol:.1e})",
            TruncationLossWarning,
        )
    if p == np.inf:
        return float(np.max(np.abs(f.values)))
    mes = f.grid.measure(f.multiplicity)
    return float(np.sum(np.abs(f.values) ** p * mes) ** (1.0 / p))


def weighted_inner(f, g):
    """Discrete Dunkl inner product <f, g>_k on a shared grid."""
    mes = f.grid.measure(f.multiplicity)
    return complex(np.sum(np.conj(g.values) * f.values * mes))


def ball_measure(center, r, m, n=64):
    """mu_k(B(center, r)) in rank one by composite Gauss-Legendre quadrature.

    The interval is split at 0 and panels are geometrically graded toward the
    weight kink there (|x|^{2k} has unbounded derivatives for non-integer 2k).
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if m.d != 1:
        raise ValueError("ball_measure is rank-one only")
    lo, hi = center - r, center + r
    base_x, base_w = _gl_rule(n)

    def piece(a, b):
        # [a, b] with 0 <= a < b or a < b <= 0
        c, h = 0.5 * (a + b), 0.5 * (b - a)
        x = c + h * base_x
        return h * float(np.sum(base_w * weight(x, m)))

    def graded_from_zero(b):
        # mu_k([0, |b|]) == mu_k([-|b|, 0]) since the weight is even
        ab = abs(b)
        edges = [0.0] + [ab * 0.25**j for j in range(8, -1, -1)]
        return sum(piece(a, c) for a, c in zip(edges[:-1], edges[1:]))

    if lo < 0.0 < hi:
        return graded_from_zero(lo) + graded_from_zero(hi)
    return piece(lo, hi)


def doubling_constant_scan(m, centers=None, radii=None, n=96):
    """sup over a scan of mu_k(B(x0,2r)) / mu_k(B(x0,r)); finite for any k >= 0."""
    if centers is None:
        centers = np.linspace(-10.0, 10.0, 41)
    if radii is None:
        radii = 2.0 ** np.arange(-6, 5).astype(np.float64)
    worst = 0.0
    for x0 in centers:
        for r in radii:
            ratio = ball_measure(x0, 2.0 * r, m, n=n) / ball_measure(x0, r, m, n=n)
            worst = max(worst, ratio)
    return worst
