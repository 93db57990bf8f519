"""Gamma, Bessel J and the closed-form integrals used as oracles elsewhere."""
import cmath
import math

import numpy as np
from scipy import integrate

from . import kernels

# Lanczos g=7, n=9; ~1e-15 relative in the right half plane.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Orders outside this window are accepted but not validated.
VALIDATED_ORDER_RANGE = (-0.49, 10.0)


class DomainError(ValueError):
    """Argument outside the domain of a special function or operator."""


def _is_pole(z):
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _gamma_right(z):
    z = z - 1.0
    acc = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return cmath.exp(0.5 * math.log(2.0 * math.pi) + (z + 0.5) * cmath.log(t) - t) * acc


def gamma(z):
    """Gamma function for complex ``z``; real input gives a real result.

    Uses the reflection formula for ``Re z < 1/2``.
    """
    is_real = not isinstance(z, complex) and np.isrealobj(z)
    zc = complex(z)
    if _is_pole(zc):
        raise DomainError(f"gamma has a pole at {z}")
    if zc.real < 0.5:
        val = math.pi / (cmath.sin(math.pi * zc) * _gamma_right(1.0 - zc))
    else:
        val = _gamma_right(zc)
    return val.real if is_real else val


def _check_order(alpha):
    if not alpha > -1.0:
        raise DomainError(f"Bessel order must exceed -1, got {alpha}")


def bessel_j_scaled(alpha, z):
    """``z**-alpha * J_alpha(z)`` for real ``z >= 0``, finite at ``z = 0``.

    At the origin this equals ``1 / (2**alpha * Gamma(alpha + 1))``.
    """
    _check_order(alpha)
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("bessel_j is implemented for z >= 0 only")
    out = kernels.jv_scaled(float(alpha), np.atleast_1d(z), gamma(float(alpha) + 1.0))
    return out.reshape(z.shape) if z.ndim else float(out[0])


def bessel_j(alpha, z):
    """Bessel function of the first kind, real order ``alpha > -1``, ``z >= 0``."""
    z = np.asarray(z, dtype=float)
    scaled = bessel_j_scaled(alpha, z)
    with np.errstate(divide="ignore"):
        val = scaled * np.power(z, alpha)
    return val if z.ndim else float(val)


def bessel_bound_constant(alpha):
    """``C_alpha = 2**alpha * Gamma(alpha + 1)``."""
    return 2.0 ** alpha * gamma(alpha + 1.0)


def gaussian_hankel_pair(alpha, a, r):
    """Closed form of the integral of ``exp(-a y^2/2) J_alpha(r y) y^(alpha+1)`` over ``(0, inf)``."""
    if not alpha > -1.0 or not a > 0:
        raise DomainError("need alpha > -1 and a > 0")
    r = np.asarray(r, dtype=float)
    return r ** alpha * a ** (-alpha - 1.0) * np.exp(-r * r / (2.0 * a))


def gaussian_moment(mu_i, a):
    """``2^mu Gamma(mu+1) a^(mu+1)``: the integral of ``exp(-x^2/(2a)) x^(2mu+1)`` over ``(0, inf)``."""
    if not mu_i > -1.0 or not a > 0:
        raise DomainError("need mu_i > -1 and a > 0")
    return 2.0 ** mu_i * gamma(mu_i + 1.0) * a ** (mu_i + 1.0)


def sin_power_integral(r):
    """Integral of ``sin(theta)^(2r)`` over ``(0, pi/2)``."""
    if not r > -0.5:
        raise DomainError("need r > -1/2")
    return math.sqrt(math.pi) * gamma(r + 0.5) / (2.0 * gamma(r + 1.0))


def gaussian_cutoff(a, floor=1e-16):
    """Point beyond which ``exp(-a y^2 / 2)`` is below ``floor``."""
    return math.sqrt(-2.0 * math.log(floor) / a)


def panel_quad(fn, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=400, points=None):
    """Adaptive Gauss-Kronrod integral of a real scalar function on ``[lo, hi]``.

    Thin wrapper over QUADPACK; ``limit`` caps the number of panels.
    """
    val, _err = integrate.quad(fn, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit, points=points)
    return val


def gaussian_hankel_pair_quad(alpha, a, r, panel_nodes=40):
    """Quadrature oracle for :func:`gaussian_hankel_pair`.

    Gauss-Legendre panels no longer than half an oscillation period, with all
    nodes passed to the Bessel kernel in a single call; the first panel is
    graded towards the origin.
    """
    upper = gaussian_cutoff(a)
    cg = gamma(alpha + 1.0)
    npanel = max(8, int(math.ceil(upper * r / math.pi)))
    edges = np.linspace(0.0, upper, npanel + 1)
    t, w = np.polynomial.legendre.leggauss(panel_nodes)
    half = 0.5 * np.diff(edges)
    y = 0.5 * (edges[1:] + edges[:-1])[:, None] + half[:, None] * t
    wy = half[:, None] * w
    # y = e1 u^8 on the first panel smooths the y^(2 alpha + 1) endpoint
    u = 0.5 * (t + 1.0)
    y[0] = edges[1] * u ** 8
    wy[0] = 0.5 * w * 8.0 * edges[1] * u ** 7
    y, wy = y.ravel(), wy.ravel()
    f = np.exp(-0.5 * a * y * y) * kernels.jv_scaled(alpha, r * y, cg) * y ** (2 * alpha + 1)
    return float(r ** alpha * (f @ wy))


def product_formula_lhs(alpha, y, z, epsabs=1e-13):
    """Quadrature over ``phi in (0, pi)`` of the Bessel addition integrand.

    The closed form of this integral is :func:`product_formula_rhs`.
    """
    cg = gamma(alpha + 1.0)

    def integrand(phi):
        w2 = y * y + z * z - 2.0 * y * z * math.cos(phi)
        w = math.sqrt(max(w2, 0.0))
        return float(kernels.jv_scaled(alpha, np.array([w]), cg)[0]) * math.sin(phi) ** (2.0 * alpha)

    return panel_quad(integrand, 0.0, math.pi, epsabs=epsabs)


def product_formula_rhs(alpha, y, z):
    return (2.0 ** alpha * gamma(alpha + 0.5) * math.sqrt(math.pi)
            * bessel_j_scaled(alpha, y) * bessel_j_scaled(alpha, z))
