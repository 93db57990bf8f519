"""Discrete stand-ins for functions on the open orthant (0, inf)^n.

A grid is a tensor product of stretched Gauss-Legendre axes. Each axis maps
Legendre nodes ``t`` to ``x = L * ((1 + t) / 2) ** stretch``; the power
stretch clusters nodes at the origin, where the weights ``x^(2mu+1)`` and
``x^(-mu-1/2)`` make integrands non-smooth.
"""
from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .special import DomainError, gamma

DEFAULT_L = 12.0
DEFAULT_NODES = {1: 128, 2: 64, 3: 48}
# 3-D grids are kept coarse; 48 nodes cannot resolve the Gaussian family
# out to 12, while at 9 both truncation and quadrature error stay near 1e-8
DEFAULT_L_BY_DIM = {1: 12.0, 2: 12.0, 3: 9.0}


def default_stretch(nodes):
    # fewer nodes cannot afford the resolution lost at the far end
    return 2.0 if nodes >= 96 else 1.5


@dataclass(frozen=True)
class MuVector:
    """Order vector; every component must exceed -1/2."""

    mu: tuple

    def __post_init__(self):
        mu = tuple(float(m) for m in np.atleast_1d(self.mu))
        if not mu:
            raise DomainError("mu must have at least one component")
        for m in mu:
            if not m > -0.5 or not math.isfinite(m):
                raise DomainError(f"every mu_i must exceed -1/2, got {m}")
        object.__setattr__(self, "mu", mu)

    @property
    def n(self):
        return len(self.mu)

    @cached_property
    def array(self):
        return np.array(self.mu)

    @cached_property
    def C(self):
        """``prod 2^mu_i Gamma(mu_i + 1)``."""
        return float(np.prod([2.0 ** m * gamma(m + 1.0) for m in self.mu]))

    @property
    def kappa(self):
        """``|mu + 1| = sum(mu_i + 1)``."""
        return float(sum(m + 1.0 for m in self.mu))

    def __iter__(self):
        return iter(self.mu)

    def __len__(self):
        return len(self.mu)


@dataclass(frozen=True, eq=False)
class Axis:
    nodes: np.ndarray
    weights: np.ndarray
    L: float = math.nan
    stretch: float = math.nan
    u: np.ndarray | None = None  # Legendre parameter in (0, 1), when the axis came from gauss_axis

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise DomainError("axis nodes and weights must be 1-D arrays of equal length")
        if nodes.size < 8:
            raise DomainError("an axis needs at least 8 nodes")
        if nodes[0] <= 0 or np.any(np.diff(nodes) <= 0):
            raise DomainError("axis nodes must be positive and strictly increasing")
        if np.any(weights <= 0):
            raise DomainError("quadrature weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    @cached_property
    def bary(self):
        """Barycentric weights for interpolation in the Legendre parameter."""
        if self.u is None:
            x = self.nodes
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, 1.0)
            w = 1.0 / np.prod(diff / np.abs(diff).max(), axis=1)
            return w
        t = 2.0 * self.u - 1.0
        _, lw = np.polynomial.legendre.leggauss(self.nodes.size)
        sign = (-1.0) ** np.arange(self.nodes.size)
        return sign * np.sqrt((1.0 - t * t) * lw)

    def to_param(self, x):
        """Map physical coordinates to the interpolation variable."""
        if self.u is None:
            return np.asarray(x, dtype=float)
        return (np.asarray(x, dtype=float) / self.L) ** (1.0 / self.stretch)

    @property
    def param_nodes(self):
        return self.nodes if self.u is None else self.u


def gauss_axis(nodes, L=DEFAULT_L, stretch=None):
    """Stretched Gauss-Legendre rule for integrals over ``(0, L]``."""
    if stretch is None:
        stretch = default_stretch(nodes)
    if L <= 0:
        raise DomainError("L must be positive")
    t, w = np.polynomial.legendre.leggauss(int(nodes))
    u = 0.5 * (1.0 + t)
    x = L * u ** stretch
    wx = 0.5 * w * L * stretch * u ** (stretch - 1.0)
    return Axis(x, wx, float(L), float(stretch), u)


@dataclass(frozen=True, eq=False)
class TensorGrid:
    axes: tuple

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not self.axes:
            raise DomainError("grid needs at least one axis")

    @property
    def n(self):
        return len(self.axes)

    @property
    def shape(self):
        return tuple(len(a) for a in self.axes)

    @property
    def size(self):
        return int(np.prod(self.shape))

    @cached_property
    def coords(self):
        """Per-axis node arrays broadcast to the grid shape (views)."""
        out = []
        for i, a in enumerate(self.axes):
            sh = [1] * self.n
            sh[i] = len(a)
            out.append(np.broadcast_to(a.nodes.reshape(sh), self.shape))
        return tuple(out)

    @cached_property
    def cell_weights(self):
        w = np.ones(())
        for a in self.axes:
            w = np.multiply.outer(w, a.weights)
        return w

    @cached_property
    def norm2(self):
        return sum(c * c for c in self.coords)

    def power(self, beta):
        """``x^beta`` in the product sense, ``beta`` one exponent per axis."""
        beta = np.broadcast_to(np.asarray(beta, dtype=float), (self.n,))
        out = np.ones(self.shape)
        for c, b in zip(self.coords, beta):
            out = out * c ** b
        return out

    def points(self):
        """``(size, n)`` array of nodes, row-major over axes."""
        return np.stack([c.ravel() for c in self.coords], axis=-1)

    def integrate(self, values):
        return np.sum(values * self.cell_weights)

    def fingerprint(self):
        h = hashlib.sha256()
        for a in self.axes:
            h.update(a.nodes.tobytes())
            h.update(a.weights.tobytes())
        return h.hexdigest()[:16]

    def check_mu(self, mu):
        if mu.n != self.n:
            raise DomainError(f"grid has {self.n} axes but mu has {mu.n} components")


def default_grid(n, L=None, nodes=None, stretch=None):
    nodes = DEFAULT_NODES.get(n, 32) if nodes is None else nodes
    L = DEFAULT_L_BY_DIM.get(n, 7.0) if L is None else L
    ax = gauss_axis(nodes, L, stretch)
    return TensorGrid((ax,) * n)


@dataclass(frozen=True, eq=False)
class SampledFn:
    """Complex samples on a grid, optionally with tensor-product factors."""

    grid: TensorGrid
    values: np.ndarray
    factors: tuple | None = field(default=None)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.size != self.grid.size:
            raise DomainError(f"expected {self.grid.size} values, got {vals.size}")
        vals = vals.reshape(self.grid.shape)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.factors is not None:
            facs = tuple(np.asarray(f, dtype=complex) for f in self.factors)
            if len(facs) != self.grid.n or any(f.shape != (len(a),) for f, a in zip(facs, self.grid.axes)):
                raise DomainError("separable factors must match the grid axes")
            object.__setattr__(self, "factors", facs)

    @classmethod
    def from_factors(cls, grid, factors):
        vals = np.ones((), dtype=complex)
        for f in factors:
            vals = np.multiply.outer(vals, np.asarray(f, dtype=complex))
        return cls(grid, vals, tuple(factors))

    @classmethod
    def from_callable(cls, grid, fn):
        """Sample ``fn(*coords)``; ``fn`` receives broadcast coordinate arrays."""
        return cls(grid, np.broadcast_to(fn(*grid.coords), grid.shape))

    @classmethod
    def zeros(cls, grid):
        return cls.from_factors(grid, [np.zeros(len(a)) for a in grid.axes])

    @property
    def separable(self):
        return self.factors is not None

    def with_values(self, values):
        return SampledFn(self.grid, values)

    def scaled(self, c):
        facs = None
        if self.factors is not None:
            facs = (self.factors[0] * c,) + self.factors[1:]
        return SampledFn(self.grid, self.values * c, facs)

    def times_power(self, beta):
        """Multiply by ``x^beta``; keeps separability."""
        beta = np.broadcast_to(np.asarray(beta, dtype=float), (self.grid.n,))
        facs = None
        if self.factors is not None:
            facs = tuple(f * a.nodes ** b for f, a, b in zip(self.factors, self.grid.axes, beta))
        return SampledFn(self.grid, self.values * self.grid.power(beta), facs)

    def __add__(self, other):
        if isinstance(other, SampledFn):
            if other.grid is not self.grid:
                raise DomainError("functions live on different grids")
            return SampledFn(self.grid, self.values + other.values)
        return NotImplemented

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def __mul__(self, c):
        if np.isscalar(c):
            return self.scaled(c)
        return NotImplemented

    __rmul__ = __mul__

    def sup_distance(self, other, mask=None):
        d = np.abs(self.values - other.values)
        if mask is not None:
            d = d[mask]
        return float(d.max()) if d.size else 0.0

    def factors_reproduce(self, tol=1e-13):
        if self.factors is None:
            return True
        prod = SampledFn.from_factors(self.grid, self.factors).values
        scale = max(1.0, float(np.abs(self.values).max()))
        return float(np.abs(prod - self.values).max()) <= tol * scale


# ---------------------------------------------------------------------------
# weights and norms
# ---------------------------------------------------------------------------

def _as_point(mu, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (mu.n,) and not (mu.n == 1 and x.ndim == 0):
        raise DomainError("point dimension does not match mu")
    x = x.reshape(x.shape if x.ndim else (1,))
    if np.any(x <= 0):
        raise DomainError("points must lie in the open positive orthant")
    return x


def weight_s(mu, x):
    """``x^(2mu+1) / C_mu`` at a point (or stack of points, last axis n)."""
    x = _as_point(mu, x)
    return np.prod(x ** (2.0 * mu.array + 1.0), axis=-1) / mu.C


def weight_r(mu, x):
    x = _as_point(mu, x)
    return np.prod(x ** (-mu.array - 0.5), axis=-1)


def grid_s(mu, grid):
    return grid.power(2.0 * mu.array + 1.0) / mu.C


def grid_r(mu, grid):
    return grid.power(-mu.array - 0.5)


def norm_weighted_lp(f, mu, p):
    """``(integral |f|^p s r^p)^(1/p)`` by grid quadrature."""
    if not p >= 1:
        raise DomainError("p must be at least 1")
    f.grid.check_mu(mu)
    dens = np.abs(f.values) ** p * grid_s(mu, f.grid) * grid_r(mu, f.grid) ** p
    return float(f.grid.integrate(dens) ** (1.0 / p))


def norm_weighted_linf(f, mu):
    """Grid maximum of ``|r f|``; a stand-in for the essential supremum."""
    f.grid.check_mu(mu)
    return float(np.abs(grid_r(mu, f.grid) * f.values).max())


def norm_Y(f, mu):
    return max(norm_weighted_lp(f, mu, 1), norm_weighted_linf(f, mu))


def norm_Z(f, mu):
    l1 = float(f.grid.integrate(np.abs(f.values) * grid_s(mu, f.grid)))
    return max(l1, float(np.abs(f.values).max()))


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def fd_weights(x0, xs, order):
    """Weights ``c`` with ``sum c_j f(xs_j) ~ f^(order)(x0)`` (Fornberg)."""
    n = len(xs)
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def diff_matrix(nodes, order, width):
    """Banded local-polynomial differentiation matrix on arbitrary nodes."""
    n = len(nodes)
    if n < 5:
        raise DomainError("finite differences need at least 5 nodes on the axis")
    width = min(width, n)
    half = width // 2
    D = np.zeros((n, n))
    for i in range(n):
        lo = min(max(i - half, 0), n - width)
        idx = np.arange(lo, lo + width)
        D[i, idx] = fd_weights(nodes[i], nodes[idx], order)
    return D


def _uniform(nodes):
    d = np.diff(nodes)
    return np.allclose(d, d[0], rtol=1e-10)


def _apply_along(mat, values, axis):
    return np.moveaxis(np.tensordot(mat, values, axes=([1], [axis])), 0, axis)


def apply_T(f, j, width=None):
    """``x_j^-1 d/dx_j`` by finite differences along axis ``j``.

    Uniform axes use the 5-point (order 4) stencil; otherwise a local
    polynomial of degree ``width - 1`` (default 7 nodes).
    """
    ax = f.grid.axes[j]
    if len(ax) < 5:
        raise DomainError("finite differences need at least 5 nodes on the axis")
    if width is None:
        width = 5 if _uniform(ax.nodes) else 7
    D = diff_matrix(ax.nodes, 1, width)
    vals = _apply_along(D, f.values, j) / f.grid.coords[j]
    return SampledFn(f.grid, vals)


def apply_T_multi(f, k, width=None):
    """``T^k`` for a multi-index ``k`` (axis 0 applied first)."""
    out = f
    for j, kj in enumerate(k):
        for _ in range(int(kj)):
            out = apply_T(out, j, width)
    return out


def seminorm_gamma(f, mu, m, k, width=None):
    """Grid sup of ``|x^m T^k (r f)|``."""
    k = tuple(int(v) for v in k)
    m = tuple(float(v) for v in m)
    if sum(k) > 4:
        raise DomainError("seminorm derivative order above 4 is not supported")
    rf = SampledFn(f.grid, grid_r(mu, f.grid) * f.values)
    g = apply_T_multi(rf, k, width) if sum(k) else rf
    return float(np.abs(f.grid.power(m) * g.values).max())


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def grid_to_json(grid, mu):
    axes = []
    for a in grid.axes:
        entry = {"nodes": a.nodes.tolist(), "weights": a.weights.tolist()}
        if a.u is not None:
            entry["L"] = a.L
            entry["stretch"] = a.stretch
        axes.append(entry)
    return {"n": grid.n, "mu": list(mu.mu), "axes": axes}


def grid_from_json(meta):
    axes = []
    for entry in meta["axes"]:
        nodes = np.asarray(entry["nodes"], dtype=float)
        weights = np.asarray(entry["weights"], dtype=float)
        if "L" in entry:
            ref = gauss_axis(nodes.size, entry["L"], entry["stretch"])
            if np.allclose(ref.nodes, nodes, rtol=1e-14, atol=0) and np.allclose(ref.weights, weights, rtol=1e-14, atol=0):
                axes.append(ref)
                continue
        axes.append(Axis(nodes, weights))
    grid = TensorGrid(tuple(axes))
    if meta.get("n", grid.n) != grid.n:
        raise DomainError("sidecar n does not match its axes")
    return grid, MuVector(tuple(meta["mu"]))


def save_sampled(f, mu, csv_path):
    """Write ``x_1..x_n,Re,Im`` rows plus a ``.json`` sidecar next to the CSV."""
    csv_path = str(csv_path)
    pts = f.grid.points()
    vals = f.values.ravel()
    data = np.column_stack([pts, vals.real, vals.imag])
    header = ",".join([f"x_{i + 1}" for i in range(f.grid.n)] + ["re", "im"])
    np.savetxt(csv_path, data, delimiter=",", header=header, comments="", fmt="%.17g")
    with open(sidecar_path(csv_path), "w") as fh:
        json.dump(grid_to_json(f.grid, mu), fh)


def sidecar_path(csv_path):
    csv_path = str(csv_path)
    base = csv_path[:-4] if csv_path.endswith(".csv") else csv_path
    return base + ".json"


def load_sampled(csv_path):
    """Inverse of :func:`save_sampled`; returns ``(SampledFn, MuVector)``."""
    with open(sidecar_path(csv_path)) as fh:
        meta = json.load(fh)
    grid, mu = grid_from_json(meta)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # empty files are reported below
        data = np.loadtxt(str(csv_path), delimiter=",", skiprows=1, ndmin=2)
    if data.shape != (grid.size, grid.n + 2):
        raise DomainError(f"CSV has shape {data.shape}, expected {(grid.size, grid.n + 2)}")
    if not np.allclose(data[:, :grid.n], grid.points(), rtol=1e-12, atol=0):
        raise DomainError("CSV coordinates do not match the sidecar grid")
    return SampledFn(grid, data[:, grid.n] + 1j * data[:, grid.n + 1]), mu
