"""Delsarte kernels and the two Hankel convolutions built from them.

Both convolutions reduce to one generalized translation per axis. With
``F = w^(a+1/2) G`` the inner integral of the ``D`` kernel becomes, after
``w = sqrt(u^2 + v^2 - 2uv t)``,

    int D(u, v, w) F(w) dw = (uv)^(a+1/2) * tau_u G(v),
    tau_u G(v) = c_a * int_{-1}^{1} G(w(t)) (1 - t^2)^(a - 1/2) dt,

with ``c_a = Gamma(a+1) / (Gamma(a+1/2) sqrt(pi))``, so that ``tau 1 = 1``.
The ``(1 - t^2)^(a-1/2)`` factor is handled by a Gauss-Jacobi rule; ``G`` is
interpolated between grid nodes.
"""
import math

import numpy as np
from scipy.special import roots_jacobi

from . import kernels
from .grids import SampledFn, grid_r, grid_s, norm_weighted_linf, norm_weighted_lp
from .hankel import hankel_z
from .special import DomainError, bessel_j_scaled, gamma

DEFAULT_JACOBI_NODES = 48


def triangle_area(u, v, w):
    """Heron's formula in side lengths; zero when no triangle exists."""
    u, v, w = (np.asarray(a, dtype=float) for a in (u, v, w))
    q = ((u + v) ** 2 - w * w) * (w * w - (u - v) ** 2)
    out = 0.25 * np.sqrt(np.where(q > 0, q, 0.0))
    return out if out.ndim else float(out)


def _support(u, v, w):
    return (np.abs(u - v) < w) & (w < u + v)


def kernel_D(alpha, u, v, w):
    """``2^(a-1) (uvw)^(1/2-a) A^(2a-1) / (Gamma(a+1/2) sqrt(pi))``.

    Returns ``inf`` exactly on the triangle boundary when ``a < 1/2``.
    """
    if not alpha > -0.5:
        raise DomainError("alpha must exceed -1/2")
    u, v, w = (np.asarray(a, dtype=float) for a in (u, v, w))
    A = triangle_area(u, v, w)
    inside = _support(u, v, w)
    edge = (w == np.abs(u - v)) | (w == u + v)
    with np.errstate(divide="ignore"):
        val = (2.0 ** (alpha - 1.0) * (u * v * w) ** (0.5 - alpha) * np.asarray(A) ** (2 * alpha - 1)
               / (gamma(alpha + 0.5) * math.sqrt(math.pi)))
    val = np.where(inside, val, 0.0)
    if alpha < 0.5:
        val = np.where(edge, np.inf, val)
    return val if val.ndim else float(val)


def kernel_frakD(alpha, u, v, w):
    """``2^(3a-1) Gamma(a+1)^2 / (Gamma(a+1/2) sqrt(pi)) (uvw)^(-2a) A^(2a-1)``."""
    if not alpha > -0.5:
        raise DomainError("alpha must exceed -1/2")
    u, v, w = (np.asarray(a, dtype=float) for a in (u, v, w))
    A = triangle_area(u, v, w)
    inside = _support(u, v, w)
    edge = (w == np.abs(u - v)) | (w == u + v)
    const = 2.0 ** (3 * alpha - 1.0) * gamma(alpha + 1.0) ** 2 / (gamma(alpha + 0.5) * math.sqrt(math.pi))
    with np.errstate(divide="ignore"):
        val = const * (u * v * w) ** (-2 * alpha) * np.asarray(A) ** (2 * alpha - 1)
    val = np.where(inside, val, 0.0)
    if alpha < 0.5:
        val = np.where(edge, np.inf, val)
    return val if val.ndim else float(val)


def translation_constant(alpha):
    return gamma(alpha + 1.0) / (gamma(alpha + 0.5) * math.sqrt(math.pi))


def jacobi_rule(alpha, nodes=DEFAULT_JACOBI_NODES):
    """Gauss-Jacobi rule for weight ``(1-t)^(a-1/2) (1+t)^(a-1/2)`` on [-1, 1]."""
    if not alpha > -0.5:
        raise DomainError("Jacobi exponent alpha - 1/2 must exceed -1")
    t, w = roots_jacobi(int(nodes), alpha - 0.5, alpha - 0.5)
    return t, w


# ---------------------------------------------------------------------------
# kernel identities in the raw w variable
# ---------------------------------------------------------------------------

def _w_integral(alpha, u, v, full, nodes):
    """Jacobi quadrature of ``full`` over ``(|u-v|, u+v)``.

    The rule absorbs ``(hi-w)^(a-1/2)`` and either ``(w-lo)^(a-1/2)`` or, when
    ``u == v`` puts the lower end at 0, ``w^(2a)``: the whole endpoint power
    of every integrand used here.
    """
    lo, hi = abs(u - v), u + v
    p = alpha - 0.5
    q = alpha - 0.5 if lo > 0 else 2.0 * alpha
    t, om = roots_jacobi(int(nodes), p, q)
    half = 0.5 * (hi - lo)
    w = lo + half * (1.0 + t)
    weight = (hi - w) ** p * (w - lo) ** q
    return half * np.sum(om * half ** (p + q) * full(w) / weight)


def integrate_against_D(alpha, u, v, fn, nodes=DEFAULT_JACOBI_NODES):
    """``int D(u, v, w) fn(w) dw`` by Jacobi quadrature on the triangle support."""
    return _w_integral(alpha, u, v, lambda w: kernel_D(alpha, u, v, w) * fn(w), nodes)


def integrate_against_frakD(alpha, u, v, fn, nodes=DEFAULT_JACOBI_NODES):
    return _w_integral(alpha, u, v, lambda w: kernel_frakD(alpha, u, v, w) * fn(w), nodes)


def delsarte_moment(alpha, u, v, nodes=DEFAULT_JACOBI_NODES):
    """``int w^(a+1/2) D(u, v, w) dw``; equals ``(uv)^(a+1/2) / C_a``."""
    return integrate_against_D(alpha, u, v, lambda w: w ** (alpha + 0.5), nodes)


def frakD_normalization(alpha, u, v, nodes=DEFAULT_JACOBI_NODES):
    """``int frakD(u, v, w) s(w) dw``; equals 1."""
    c = 2.0 ** alpha * gamma(alpha + 1.0)
    return integrate_against_frakD(alpha, u, v, lambda w: w ** (2 * alpha + 1) / c, nodes)


def product_formula_lhs(alpha, u, v, t, nodes=DEFAULT_JACOBI_NODES):
    """``int D(u, v, w) sqrt(wt) J_a(wt) dw``."""
    def fn(w):
        return (w * t) ** (alpha + 0.5) * bessel_j_scaled(alpha, w * t)

    return integrate_against_D(alpha, u, v, fn, nodes)


def product_formula_rhs(alpha, u, v, t):
    """``t^(-a-1/2) sqrt(ut) J_a(ut) sqrt(vt) J_a(vt)``."""
    return (t ** (-alpha - 0.5) * (u * t) ** (alpha + 0.5) * bessel_j_scaled(alpha, u * t)
            * (v * t) ** (alpha + 0.5) * bessel_j_scaled(alpha, v * t))


# ---------------------------------------------------------------------------
# convolutions on a grid
# ---------------------------------------------------------------------------

class ConvPlan:
    """Per-axis translation tensors ``W[a, b, c]`` for one grid.

    ``(tau_{x_a} G)(y_b) ~ sum_c W[a, b, c] G(x_c)`` with ``G`` taken as zero
    beyond the last node.
    """

    def __init__(self, mu, grid, jacobi_nodes=DEFAULT_JACOBI_NODES):
        grid.check_mu(mu)
        self.mu = mu
        self.grid = grid
        self.jacobi_nodes = int(jacobi_nodes)
        self.W = []
        cache = {}
        for m, ax in zip(mu.mu, grid.axes):
            key = (m, id(ax))
            if key not in cache:
                t, om = jacobi_rule(m, self.jacobi_nodes)
                if ax.u is None:
                    L, inv_q = ax.nodes[-1], 1.0
                else:
                    L, inv_q = ax.L, 1.0 / ax.stretch
                W = kernels.translation_tensor(ax.nodes, t, om, ax.param_nodes, ax.bary,
                                               L, inv_q, translation_constant(m))
                W.setflags(write=False)
                cache[key] = W
            self.W.append(cache[key])

    def translate_contract(self, F, G):
        """``out[a] = sum_b F[b] sum_c W[a,b,c] G[c]`` over every axis."""
        n = self.grid.n
        if n == 3:
            return self._contract3(F, G)
        letters = "abcdefghi"
        ops, subs = [], []
        for i in range(n):
            a, b, c = letters[3 * i: 3 * i + 3]
            ops.append(self.W[i])
            subs.append(a + b + c)
        subs.append("".join(letters[3 * i + 1] for i in range(n)))
        subs.append("".join(letters[3 * i + 2] for i in range(n)))
        out = "".join(letters[3 * i] for i in range(n))
        expr = ",".join(subs) + "->" + out
        return np.einsum(expr, *ops, F, G, optimize=True)

    def _contract3(self, F, G):
        # einsum's path search gives up on this network; sweep the first axis by hand
        W0, W1, W2 = self.W
        F = np.asarray(F)
        G = np.asarray(G)
        dtype = np.result_type(F, G, W0)
        out = np.empty((W0.shape[0], W1.shape[0], W2.shape[0]), dtype=dtype)
        for a in range(W0.shape[0]):
            H = np.tensordot(W0[a], G, axes=([1], [0]))          # b f i
            P = np.tensordot(F, H, axes=([0], [0]))               # e h f i
            Q = np.tensordot(W1, P, axes=([1, 2], [0, 2]))       # d h i
            out[a] = np.tensordot(Q, W2, axes=([1, 2], [1, 2]))  # d g
        return out

    def translate(self, g):
        """``tau_x g(y)`` as an array over (x, y) pairs, 1-D grids only."""
        if self.grid.n != 1:
            raise DomainError("explicit translation tables are only built in 1-D")
        return self.W[0] @ g.values


def _check(plan, *fs):
    for f in fs:
        if f.grid is not plan.grid:
            raise DomainError("function is not sampled on the plan's grid")


def conv_hash(f, g, plan):
    """``int f(y) s(y) tau_x g(y) dy``; ``g`` is interpolated, ``f`` only sampled."""
    _check(plan, f, g)
    grid = plan.grid
    if f.factors is not None:
        f_w = [fi * ax.nodes ** (2 * m + 1) * ax.weights / (2.0 ** m * gamma(m + 1.0))
               for fi, ax, m in zip(f.factors, grid.axes, plan.mu.mu)]
        if g.factors is not None:
            facs = [np.einsum("abc,b,c->a", W, Fi, gi) for W, Fi, gi in zip(plan.W, f_w, g.factors)]
            return SampledFn.from_factors(grid, facs)
        mats = [np.einsum("abc,b->ac", W, Fi) for W, Fi in zip(plan.W, f_w)]
        return SampledFn(grid, _sweep(mats, g.values))
    F = f.values * grid_s(plan.mu, grid) * grid.cell_weights
    if g.factors is not None:
        mats = [W @ gi for W, gi in zip(plan.W, g.factors)]
        return SampledFn(grid, _sweep(mats, F))
    return SampledFn(grid, plan.translate_contract(F, g.values))


def _sweep(mats, vals):
    for i, M in enumerate(mats):
        vals = np.moveaxis(np.tensordot(M, vals, axes=([1], [i])), 0, i)
    return vals


def conv_sharp(f, g, plan):
    """``r^-1 ((r f) # (r g))``, i.e. the convolution with the ``D`` kernel."""
    _check(plan, f, g)
    beta = -plan.mu.array - 0.5
    out = conv_hash(f.times_power(beta), g.times_power(beta), plan)
    return out.times_power(-beta)


def conv_sharp_spectral(f, g, tplan):
    """Oracle route: ``h(r * hf * hg)``."""
    hf = hankel_z(tplan, f)
    hg = hankel_z(tplan, g)
    prod = SampledFn(tplan.out_grid, grid_r(tplan.mu, tplan.out_grid) * hf.values * hg.values)
    return hankel_z(tplan.inverse(), prod)


# ---------------------------------------------------------------------------
# mollifiers
# ---------------------------------------------------------------------------

def approx_identity(m, grid, mu):
    """``m^|mu+1| exp(-m |x|^2 / 2)``, unit mass in L^1(s)."""
    if not m >= 1:
        raise DomainError("m must be a positive integer")
    facs = [m ** (mi + 1.0) * np.exp(-0.5 * m * ax.nodes ** 2) for mi, ax in zip(mu.mu, grid.axes)]
    return SampledFn.from_factors(grid, facs)


def approx_identity_sr(m, grid, mu):
    """``x^(mu+1/2)`` times :func:`approx_identity`; unit mass in L^1(sr)."""
    return approx_identity(m, grid, mu).times_power(mu.array + 0.5)


def approx_identity_convergence(f, m_list, plan):
    """``||f # phi_m - f||_{L^1(s)}`` for each ``m``."""
    errs = []
    s = grid_s(plan.mu, plan.grid)
    for m in m_list:
        phi = approx_identity(m, plan.grid, plan.mu)
        conv = conv_hash(phi, f, plan)
        errs.append(float(plan.grid.integrate(np.abs(conv.values - f.values) * s)))
    return errs


def approx_identity_pointwise(f, m_list, plan, x0_index):
    """``|f sharp phi~_m (x0) - f(x0)|`` with ``x0`` a grid index tuple."""
    out = []
    for m in m_list:
        phi = approx_identity_sr(m, plan.grid, plan.mu)
        conv = conv_sharp(phi, f, plan)
        out.append(float(abs(conv.values[x0_index] - f.values[x0_index])))
    return out


def young_bound_check(f, g, p, plan):
    """``(||f sharp g||_p, ||f||_1 ||g||_p)``; ``p = inf`` means the L^inf(r) variant."""
    mu = plan.mu
    fg = conv_sharp(f, g, plan)
    f1 = norm_weighted_lp(f, mu, 1)
    if p == math.inf or p == "inf":
        return norm_weighted_linf(fg, mu), f1 * norm_weighted_linf(g, mu)
    return norm_weighted_lp(fg, mu, p), f1 * norm_weighted_lp(g, mu, p)
