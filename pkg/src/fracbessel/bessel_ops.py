"""The Bessel operators and the resolvent of ``S_mu``.

Sign convention: ``S_mu = sum d^2/dx_i^2 - (4 mu_i^2 - 1) / (4 x_i^2)``, the
choice under which ``h_mu`` diagonalizes ``S_mu`` with symbol ``-|y|^2``.
``Delta_mu = sum d^2/dx_i^2 + (2 mu_i + 1) x_i^-1 d/dx_i`` is conjugate to it:
``S_mu = x^(mu+1/2) Delta_mu x^(-mu-1/2)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .delsarte import conv_sharp
from .grids import SampledFn, diff_matrix, grid_r, grid_s
from .hankel import hankel_z
from .special import DomainError

FD_WIDTH = 9
SCRIPT_N_NODES = 200
_LOG_DROP = 45.0  # log-integrand drop that sets the quadrature window


def _log_integrand(u, nu, w):
    return -np.exp(u) - 0.25 * w * w * np.exp(-u) - nu * u


def script_N(nu, w, nodes=SCRIPT_N_NODES):
    """``int_0^inf exp(-t - w^2/(4t)) t^(-nu-1) dt`` for ``w > 0``.

    After ``t = e^u`` the integrand decays doubly exponentially in both
    directions, so the trapezoidal rule on a window around the (unique,
    log-concave) peak converges geometrically.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w <= 0):
        raise DomainError("script_N needs w > 0")
    wf = np.atleast_1d(w).ravel()
    root = np.sqrt(nu * nu + wf * wf)
    # positive root of x^2 + nu x - w^2/4, in the form without cancellation
    xpk = 0.5 * wf * wf / (nu + root) if nu > 0 else 0.5 * (root - nu)
    upk = np.log(xpk)
    top = _log_integrand(upk, nu, wf)
    ends = []
    for sign in (-1.0, 1.0):
        near = upk.copy()
        step = np.ones_like(upk)
        far = upk + sign * step
        for _ in range(64):
            low = _log_integrand(far, nu, wf) < top - _LOG_DROP
            if low.all():
                break
            step = np.where(low, step, 2.0 * step)
            far = np.where(low, far, upk + sign * step)
        else:
            raise DomainError("script_N: integration window search failed")
        for _ in range(60):
            mid = 0.5 * (near + far)
            low = _log_integrand(mid, nu, wf) < top - _LOG_DROP
            far = np.where(low, mid, far)
            near = np.where(low, near, mid)
        ends.append(far)
    s = np.linspace(0.0, 1.0, nodes)
    u = ends[0][:, None] + (ends[1] - ends[0])[:, None] * s[None, :]
    h = (ends[1] - ends[0]) / (nodes - 1)
    vals = np.exp(_log_integrand(u, nu, wf[:, None]) - top[:, None])
    out = np.exp(top) * h * (vals.sum(axis=1) - 0.5 * (vals[:, 0] + vals[:, -1]))
    return out.reshape(w.shape) if w.ndim else float(out[0])


@dataclass(frozen=True, eq=False)
class ResolventKernel:
    lam: float
    mu: object
    values: SampledFn


def resolvent_kernel(lam, mu, grid):
    """``N_lam(x) = 2^-|mu+1| x^(mu+1/2) lam^nu script_N(nu, sqrt(lam)|x|)``, ``nu = |mu+1| - 1``."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    grid.check_mu(mu)
    nu = mu.kappa - 1.0
    vals = (2.0 ** (-mu.kappa) * grid.power(mu.array + 0.5) * lam ** nu
            * script_N(nu, math.sqrt(lam) * np.sqrt(grid.norm2)))
    return ResolventKernel(float(lam), mu, SampledFn(grid, vals))


def _symbol(plan):
    return plan.out_grid.norm2


def apply_S_spectral(f, plan):
    hf = hankel_z(plan, f)
    return hankel_z(plan.inverse(), hf.with_values(-_symbol(plan) * hf.values))


def _second_derivs(f, width, order):
    mats = [diff_matrix(ax.nodes, order, width) for ax in f.grid.axes]
    out = []
    for i, D in enumerate(mats):
        out.append(np.moveaxis(np.tensordot(D, f.values, axes=([1], [i])), 0, i))
    return out


def apply_S_fd(f, mu, width=FD_WIDTH):
    """Finite-difference ``S_mu`` with local polynomial stencils of ``width`` nodes."""
    f.grid.check_mu(mu)
    d2 = _second_derivs(f, width, 2)
    vals = sum(d2)
    for m, c in zip(mu.mu, f.grid.coords):
        vals = vals - (4.0 * m * m - 1.0) / (4.0 * c * c) * f.values
    return SampledFn(f.grid, vals)


def apply_Delta(f, plan):
    """``Delta_mu f = r S_mu (r^-1 f)``, spectral ``S_mu``."""
    r = grid_r(plan.mu, f.grid)
    return SampledFn(f.grid, r * apply_S_spectral(f.with_values(f.values / r), plan).values)


def apply_Delta_fd(f, mu, width=FD_WIDTH):
    f.grid.check_mu(mu)
    d2 = _second_derivs(f, width, 2)
    d1 = _second_derivs(f, width, 1)
    vals = sum(d2)
    for m, c, g in zip(mu.mu, f.grid.coords, d1):
        vals = vals + (2.0 * m + 1.0) / c * g
    return SampledFn(f.grid, vals)


def apply_Delta_transpose(f, mu, width=FD_WIDTH):
    """Formal transpose ``x^(mu+1/2) S_mu (x^(-mu-1/2) f)`` of ``Delta_mu`` (FD).

    This, not ``Delta_mu`` itself, annihilates ``x^(2mu+1)``.
    """
    beta = mu.array + 0.5
    return apply_S_fd(f.times_power(-beta), mu, width).times_power(beta)


# Stencils reaching toward the origin see x^(mu+1/2), which no polynomial
# fits; on the clustered grids three times the first node is still ~1e-7.
FD_FLOOR = 1.0


def interior_mask(grid, factor=3.0, floor=FD_FLOOR):
    """Nodes with every ``x_i >= max(factor * first node, floor)``."""
    mask = np.ones(grid.shape, dtype=bool)
    for ax, c in zip(grid.axes, grid.coords):
        mask &= c >= max(factor * ax.nodes[0], floor)
    return mask


def resolvent_apply_conv(lam, f, cplan, kernel=None):
    """``N_lam sharp f``; ``kernel`` may carry a precomputed :class:`ResolventKernel`."""
    if kernel is None:
        kernel = resolvent_kernel(lam, cplan.mu, cplan.grid)
    return conv_sharp(kernel.values, f, cplan)


def resolvent_apply_spectral(lam, f, plan, m=1):
    """``h[(lam + |y|^2)^-m h f]``."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    hf = hankel_z(plan, f)
    mult = (lam + _symbol(plan)) ** (-float(m))
    return hankel_z(plan.inverse(), hf.with_values(mult * hf.values))


def l1_sr_norm(f, mu):
    return float(f.grid.integrate(np.abs(f.values) * grid_s(mu, f.grid) * grid_r(mu, f.grid)))


# ---------------------------------------------------------------------------
# closed forms on the family x^(mu+1/2) p(|x|^2) exp(-|x|^2/2)
# ---------------------------------------------------------------------------

def S_on_gaussian_family(mu, coeffs):
    """Coefficients of ``q`` with ``S(x^(mu+1/2) p e^(-rho/2)) = x^(mu+1/2) q e^(-rho/2)``.

    ``p`` and ``q`` are polynomials in ``rho = |x|^2`` (ascending coefficients).
    On ``G(rho)`` the operator acts as ``4 rho G'' + 4 kappa G'``.
    """
    P = np.polynomial.Polynomial(coeffs)
    rho = np.polynomial.Polynomial([0.0, 1.0])
    k = mu.kappa
    q = 4 * rho * P.deriv(2) - 4 * rho * P.deriv(1) + rho * P + 4 * k * P.deriv(1) - 2 * k * P
    return q.coef


def gaussian_family(mu, grid, coeffs, a=1.0):
    """Sample ``x^(mu+1/2) p(|x|^2) exp(-a |x|^2 / 2)``; separable when ``p`` is constant."""
    if len(coeffs) == 1:
        facs = [ax.nodes ** (m + 0.5) * np.exp(-0.5 * a * ax.nodes ** 2) for m, ax in zip(mu.mu, grid.axes)]
        facs[0] = facs[0] * complex(coeffs[0])
        return SampledFn.from_factors(grid, facs)
    p = np.polynomial.polynomial.polyval(grid.norm2, np.asarray(coeffs, dtype=complex))
    return SampledFn(grid, grid.power(mu.array + 0.5) * p * np.exp(-0.5 * a * grid.norm2))


def neg_S_power_coeffs(mu, N):
    """``(-S)^N e_mu`` in the family above; its transform is ``|y|^(2N) e_mu``."""
    c = np.array([1.0])
    for _ in range(N):
        c = -S_on_gaussian_family(mu, c)
    return c
