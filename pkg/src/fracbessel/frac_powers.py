"""Fractional powers of ``-S_mu`` and ``-Delta_mu`` and the Liouville pairings.

The primary route is the multiplier ``|y|^(2 alpha)`` between two ``h_mu``
transforms. The Balakrishnan route reaches the same multiplier through the
resolvent powers ``|y|^(2m) (lam + |y|^2)^-m`` integrated against
``lam^(alpha-1)``; pairings are bilinear, never conjugated.
"""
import math
from dataclasses import dataclass

import numpy as np

from .grids import SampledFn, seminorm_gamma
from .hankel import hankel_z
from .special import DomainError, gamma

BALAKRISHNAN_PANELS = 200
_PANEL_NODES = 8
_TAIL_DECADES = 8.0


@dataclass(frozen=True)
class FracOrder:
    alpha: complex
    m: int | None = None

    def __post_init__(self):
        a = complex(self.alpha)
        if not a.real > 0:
            raise DomainError("fractional order needs Re(alpha) > 0")
        m = math.floor(a.real) + 1 if self.m is None else int(self.m)
        if not m > a.real:
            raise DomainError("Balakrishnan exponent m must exceed Re(alpha)")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "m", m)

    @property
    def is_real(self):
        return self.alpha.imag == 0.0


def _as_order(alpha):
    return alpha if isinstance(alpha, FracOrder) else FracOrder(alpha)


@dataclass(frozen=True)
class WeightedPolynomial:
    """``x^w * sum c_k |x|^(2k)`` with ``w = mu + 1/2`` or ``2 mu + 1``."""

    mu: object
    coeffs: tuple
    weight_mode: str = "zemanian"

    def __post_init__(self):
        if self.weight_mode not in ("zemanian", "hirschman"):
            raise DomainError("weight_mode is 'zemanian' or 'hirschman'")
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) > 5:
            raise DomainError("weighted polynomials are limited to degree 4")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def exponent(self):
        a = self.mu.array
        return a + 0.5 if self.weight_mode == "zemanian" else 2.0 * a + 1.0

    def sample(self, grid):
        p = np.polynomial.polynomial.polyval(grid.norm2, np.array(self.coeffs or (0.0,)))
        return SampledFn(grid, grid.power(self.exponent) * p)

    def to_zemanian(self):
        """``x^(-mu-1/2) u`` for a hirschman-mode ``u``."""
        if self.weight_mode != "hirschman":
            raise DomainError("already in zemanian mode")
        return WeightedPolynomial(self.mu, self.coeffs, "zemanian")


def _power_symbol(alpha, rho):
    return np.exp(alpha * np.log(rho))


def _multiply(plan, f, mult):
    hf = hankel_z(plan, f)
    return hankel_z(plan.inverse(), hf.with_values(mult * hf.values))


def frac_power_spectral(alpha, f, plan):
    """``h[|y|^(2 alpha) h f]``."""
    order = _as_order(alpha)
    return _multiply(plan, f, _power_symbol(order.alpha, plan.out_grid.norm2))


def balakrishnan_prefactor(order):
    a, m = order.alpha, order.m
    return gamma(float(m)) / (gamma(a) * gamma(m - a))


def balakrishnan_multiplier(order, rho):
    """Multiplier of the Balakrishnan integral at frequencies ``rho = |y|^2``.

    With ``lam = rho e^t`` the integral becomes
    ``rho^alpha * int e^(alpha t) (1 + e^t)^-m dt = rho^alpha B(alpha, m - alpha)``.
    """
    order = _as_order(order)
    a, m = order.alpha, order.m
    beta = gamma(a) * gamma(m - a) / gamma(float(m))
    return balakrishnan_prefactor(order) * beta * _power_symbol(a, np.asarray(rho, dtype=float))


def balakrishnan_multiplier_quadrature(order, rho, panels=BALAKRISHNAN_PANELS):
    """Direct ``lam`` quadrature of the same multiplier on a log grid.

    Gauss-Legendre panels in ``log lam`` cover ``tail`` decades beyond the
    extreme frequencies; the two tails use their leading-order closed forms.
    """
    order = _as_order(order)
    a, m = order.alpha, order.m
    rho = np.asarray(rho, dtype=float)
    flat = rho.ravel()
    tail = _TAIL_DECADES * math.log(10.0)
    s_lo = math.log(flat.min()) - tail
    s_hi = math.log(flat.max()) + tail
    edges = np.linspace(s_lo, s_hi, panels + 1)
    t, w = np.polynomial.legendre.leggauss(_PANEL_NODES)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    s = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    lam = np.exp(s)
    # lam^(alpha-1) dlam = lam^alpha ds
    out = np.empty(flat.shape, dtype=complex)
    for i0 in range(0, flat.size, 512):
        r = flat[i0:i0 + 512, None]
        integrand = np.exp(a * s)[None, :] * (r / (lam[None, :] + r)) ** m
        body = integrand @ ws
        lo_l, hi_l = math.exp(s_lo), math.exp(s_hi)
        left = lo_l ** a / a
        right = r[:, 0] ** m * hi_l ** (a - m) / (m - a)
        out[i0:i0 + 512] = body + left + right
    return (balakrishnan_prefactor(order) * out).reshape(rho.shape)


def frac_power_balakrishnan(alpha, f, plan, method="beta"):
    order = _as_order(alpha)
    rho = plan.out_grid.norm2
    if method == "beta":
        mult = balakrishnan_multiplier(order, rho)
    elif method == "quadrature":
        mult = balakrishnan_multiplier_quadrature(order, rho)
    else:
        raise DomainError(f"unknown method {method!r}")
    return _multiply(plan, f, mult)


def frac_power_delta(alpha, f, plan):
    """``r (-S)^alpha (r^-1 f)`` with ``r = x^(-mu-1/2)``."""
    beta = plan.mu.array + 0.5
    return frac_power_spectral(alpha, f.times_power(beta), plan).times_power(-beta)


def _pair(a, b, grid):
    return complex(np.sum((a * b * grid.cell_weights).ravel()))


def liouville_pairing(u, alpha, phi, plan, return_scale=False):
    """``int u (-S)^alpha phi dx``; with ``return_scale`` also ``int |u| |(-S)^alpha phi|``."""
    if u.weight_mode != "zemanian":
        raise DomainError("use liouville_pairing_delta for hirschman-mode polynomials")
    grid = phi.grid
    uv = u.sample(grid).values
    psi = frac_power_spectral(alpha, phi, plan).values
    val = _pair(uv, psi, grid)
    if return_scale:
        return val, float(np.sum((np.abs(uv) * np.abs(psi) * grid.cell_weights).ravel()))
    return val


def liouville_pairing_delta(u, alpha, phi, plan, return_scale=False):
    """``int u (-Delta)^alpha phi``, moved onto the zemanian side by the weights."""
    if u.weight_mode != "hirschman":
        raise DomainError("liouville_pairing_delta expects a hirschman-mode polynomial")
    return liouville_pairing(u.to_zemanian(), alpha, phi.times_power(plan.mu.array + 0.5), plan, return_scale)


def liouville_pairing_delta_direct(u, alpha, phi, plan):
    """Same pairing evaluated without the weight transfer."""
    grid = phi.grid
    return _pair(u.sample(grid).values, frac_power_delta(alpha, phi, plan).values, grid)


CUTOFF_INDICES = (
    ((0,), (0,)), ((1,), (0,)), ((2,), (0,)), ((0,), (1,)), ((1,), (1,)), ((0,), (2,)),
)


def multiplier_cutoff_check(alpha, psi, a, mu, indices=None):
    """Seminorms of ``|x|^(-2 alpha) psi`` for ``psi`` vanishing on ``|x| < a``."""
    if not a > 0:
        raise DomainError("cutoff radius must be positive")
    order = _as_order(alpha)
    grid = psi.grid
    inner = np.sqrt(grid.norm2) < a
    if np.any(np.abs(psi.values[inner]) > 1e-14):
        raise DomainError("psi does not vanish inside the cutoff radius")
    g = SampledFn(grid, _power_symbol(-order.alpha, grid.norm2) * psi.values)
    if indices is None:
        indices = [(m * grid.n, k + (0,) * (grid.n - 1)) for m, k in CUTOFF_INDICES]
    return {(tuple(m), tuple(k)): seminorm_gamma(g, mu, m, k) for m, k in indices}
