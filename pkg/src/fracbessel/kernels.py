"""Hot numeric loops, each with a numba kernel and a pure-numpy twin.

The public entry points at the bottom dispatch on ``_jit.USE_NUMBA``; the
``*_numpy`` functions are always importable so the benchmark and the tests
can compare both paths inside one process.
"""
import math

import numpy as np

from . import _jit
from ._jit import njit

# Below this argument the ascending series is used; above it, Miller's
# backward recurrence normalised by the Neumann sum. Chosen by comparison
# with 50-digit mpmath values (see tests/test_special.py).
Z_SWITCH = 8.0

_SERIES_TOL = 1e-17


def _miller_start(z):
    return int(z + 8.0 * z ** (1.0 / 3.0) + 30.0) | 1  # odd so J at alpha+N+1 is even-indexed


# --------------------------------------------------------------------------
# numba kernels
# --------------------------------------------------------------------------

@njit
def _scaled_series_nb(alpha, z, inv_gamma_ap1):
    # 2^alpha * z^-alpha J_alpha(z)
    q = -0.25 * z * z
    term = inv_gamma_ap1
    total = term
    n = 0
    while True:
        n += 1
        term *= q / (n * (alpha + n))
        total += term
        if abs(term) <= _SERIES_TOL * abs(total) and n > 2:
            break
        if n > 400:
            break
    return total


@njit
def _miller_nb(alpha, z, gamma_ap1):
    nstart = int(z + 8.0 * z ** (1.0 / 3.0) + 30.0) | 1
    half = nstart // 2 + 2
    lam = np.empty(half)
    lam[0] = gamma_ap1
    r = gamma_ap1
    for j in range(1, half):
        if j > 1:
            r = r * (alpha + j - 1) / j
        lam[j] = (alpha + 2 * j) * r
    fp1 = 0.0
    f = 1e-30
    s = 0.0
    if nstart % 2 == 0:
        s += lam[nstart // 2] * f
    for k in range(nstart, 0, -1):
        fm1 = 2.0 * (alpha + k) / z * f - fp1
        fp1 = f
        f = fm1
        if (k - 1) % 2 == 0:
            s += lam[(k - 1) // 2] * f
        if abs(f) > 1e250:
            f *= 1e-250
            fp1 *= 1e-250
            s *= 1e-250
    return f / s * (0.5 * z) ** alpha


@njit
def _jv_scaled_array_nb(alpha, z, gamma_ap1, zswitch):
    # z^-alpha J_alpha(z), elementwise
    out = np.empty(z.shape[0])
    inv_g = 1.0 / gamma_ap1
    pref = 2.0 ** (-alpha)
    for i in range(z.shape[0]):
        zi = z[i]
        if zi <= zswitch:
            out[i] = pref * _scaled_series_nb(alpha, zi, inv_g)
        else:
            out[i] = _miller_nb(alpha, zi, gamma_ap1) * zi ** (-alpha)
    return out


# --------------------------------------------------------------------------
# numpy twins
# --------------------------------------------------------------------------

def _scaled_series_numpy(alpha, z, inv_gamma_ap1):
    q = -0.25 * z * z
    term = np.full_like(z, inv_gamma_ap1)
    total = term.copy()
    n = 0
    while True:
        n += 1
        term = term * (q / (n * (alpha + n)))
        total += term
        if n > 2 and np.all(np.abs(term) <= _SERIES_TOL * np.abs(total)):
            break
        if n > 400:
            break
    return total


def _miller_numpy(alpha, z, gamma_ap1):
    nstart = _miller_start(float(np.max(z)))
    half = nstart // 2 + 2
    lam = np.empty(half)
    lam[0] = gamma_ap1
    r = gamma_ap1
    for j in range(1, half):
        if j > 1:
            r = r * (alpha + j - 1) / j
        lam[j] = (alpha + 2 * j) * r
    fp1 = np.zeros_like(z)
    f = np.full_like(z, 1e-30)
    s = np.zeros_like(z)
    if nstart % 2 == 0:
        s += lam[nstart // 2] * f
    for k in range(nstart, 0, -1):
        fm1 = 2.0 * (alpha + k) / z * f - fp1
        fp1 = f
        f = fm1
        if (k - 1) % 2 == 0:
            s += lam[(k - 1) // 2] * f
        big = np.abs(f) > 1e250
        if big.any():
            f = np.where(big, f * 1e-250, f)
            fp1 = np.where(big, fp1 * 1e-250, fp1)
            s = np.where(big, s * 1e-250, s)
    return f / s * (0.5 * z) ** alpha


def jv_scaled_numpy(alpha, z, gamma_ap1, zswitch=Z_SWITCH):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    lo = z <= zswitch
    if lo.any():
        out[lo] = 2.0 ** (-alpha) * _scaled_series_numpy(alpha, z[lo], 1.0 / gamma_ap1)
    hi = ~lo
    if hi.any():
        zh = z[hi]
        out[hi] = _miller_numpy(alpha, zh, gamma_ap1) * zh ** (-alpha)
    return out


def jv_scaled_numba(alpha, z, gamma_ap1, zswitch=Z_SWITCH):
    z = np.ascontiguousarray(z, dtype=float)
    flat = _jv_scaled_array_nb(float(alpha), z.ravel(), float(gamma_ap1), float(zswitch))
    return flat.reshape(z.shape)


def jv_scaled(alpha, z, gamma_ap1, zswitch=Z_SWITCH):
    """``z**-alpha * J_alpha(z)`` for ``z >= 0``; caller supplies Gamma(alpha+1)."""
    if _jit.USE_NUMBA:
        return jv_scaled_numba(alpha, z, gamma_ap1, zswitch)
    return jv_scaled_numpy(alpha, z, gamma_ap1, zswitch)


# --------------------------------------------------------------------------
# generalized translation tensor
# --------------------------------------------------------------------------
#
# W[a, b, c] = coef * sum_k omega_k * ell_c(p(w_abk)),
# w_abk = sqrt(x_a^2 + y_b^2 - 2 x_a y_b t_k), p(w) = (w / L)^(1/stretch) and
# ell_c the barycentric Lagrange basis on the parameter nodes. Points with
# w > L are dropped.

@njit
def _translation_tensor_nb(x, t, omega, pnodes, bary, L, inv_stretch, coef):
    n = x.shape[0]
    m = t.shape[0]
    nc = pnodes.shape[0]
    W = np.zeros((n, n, nc))
    ell = np.empty(nc)
    for a in range(n):
        for b in range(n):
            for k in range(m):
                w2 = x[a] * x[a] + x[b] * x[b] - 2.0 * x[a] * x[b] * t[k]
                if w2 < 0.0:
                    w2 = 0.0
                w = math.sqrt(w2)
                if w > L:
                    continue
                p = (w / L) ** inv_stretch
                hit = -1
                denom = 0.0
                for c in range(nc):
                    d = p - pnodes[c]
                    if d == 0.0:
                        hit = c
                        break
                    ell[c] = bary[c] / d
                    denom += ell[c]
                wk = coef * omega[k]
                if hit >= 0:
                    W[a, b, hit] += wk
                else:
                    scale = wk / denom
                    for c in range(nc):
                        W[a, b, c] += ell[c] * scale
    return W


def translation_tensor_numpy(x, t, omega, pnodes, bary, L, inv_stretch, coef):
    n = x.size
    W = np.zeros((n, n, pnodes.size))
    for a in range(n):
        w2 = x[a] ** 2 + x[:, None] ** 2 - 2.0 * x[a] * x[:, None] * t[None, :]
        w = np.sqrt(np.maximum(w2, 0.0))
        keep = w <= L
        p = (np.where(keep, w, 0.0) / L) ** inv_stretch
        d = p[..., None] - pnodes
        hit = d == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            ell = bary / d
            ell = ell / ell.sum(axis=-1, keepdims=True)
        rows = hit.any(axis=-1)
        ell[rows] = hit[rows].astype(float)
        ell *= (coef * omega * keep)[..., None]
        W[a] = ell.sum(axis=1)
    return W


def translation_tensor_numba(x, t, omega, pnodes, bary, L, inv_stretch, coef):
    return _translation_tensor_nb(
        np.ascontiguousarray(x, dtype=float), np.ascontiguousarray(t, dtype=float),
        np.ascontiguousarray(omega, dtype=float), np.ascontiguousarray(pnodes, dtype=float),
        np.ascontiguousarray(bary, dtype=float), float(L), float(inv_stretch), float(coef))


def translation_tensor(x, t, omega, pnodes, bary, L, inv_stretch, coef):
    if _jit.USE_NUMBA:
        return translation_tensor_numba(x, t, omega, pnodes, bary, L, inv_stretch, coef)
    return translation_tensor_numpy(x, t, omega, pnodes, bary, L, inv_stretch, coef)
