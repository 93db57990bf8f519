"""Verification suites run by the command-line front end.

Each suite appends :class:`Check` records to a :class:`Report` and may emit
plot-ready CSV curves. Everything here is deterministic given the config.
"""
from __future__ import annotations

import csv
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .bessel_ops import (
    apply_Delta,
    apply_Delta_fd,
    apply_S_fd,
    apply_S_spectral,
    gaussian_family,
    interior_mask,
    l1_sr_norm,
    neg_S_power_coeffs,
    resolvent_apply_conv,
    resolvent_apply_spectral,
    resolvent_kernel,
    S_on_gaussian_family,
)
from .delsarte import (
    ConvPlan,
    approx_identity_convergence,
    conv_hash,
    conv_sharp,
    delsarte_moment,
    frakD_normalization,
    product_formula_lhs,
    product_formula_rhs,
    young_bound_check,
)
from .frac_powers import (
    FracOrder,
    WeightedPolynomial,
    balakrishnan_multiplier,
    balakrishnan_multiplier_quadrature,
    frac_power_balakrishnan,
    frac_power_delta,
    frac_power_spectral,
    liouville_pairing,
    liouville_pairing_delta,
    liouville_pairing_delta_direct,
)
from .grids import (
    MuVector,
    SampledFn,
    TensorGrid,
    default_grid,
    gauss_axis,
    grid_r,
    grid_s,
    norm_weighted_linf,
    norm_weighted_lp,
    save_sampled,
)
from .hankel import TransformPlan, check_inversion_h, check_inversion_z, hankel_h, hankel_z, parseval_pairing_z
from .special import (
    bessel_j_scaled,
    gamma,
    gaussian_hankel_pair,
    gaussian_hankel_pair_quad,
)

SUITE_ORDER = ("special", "hankel", "delsarte", "resolvent", "power", "liouville")

# grid for the resolvent kernel: it decays only like exp(-sqrt(lam)|x|)
RESOLVENT_L = 40.0
RESOLVENT_NODES = 128
LIOUVILLE_TEST_ORDER = 5


@dataclass
class Check:
    name: str
    identity: str
    computed: float
    expected: float
    tolerance: float
    metric: str = "abs"  # "abs": |computed - expected| <= tol; "le": computed <= expected + tol
    passed: bool = field(init=False)

    def __post_init__(self):
        self.computed = float(self.computed)
        self.expected = float(self.expected)
        self.tolerance = float(self.tolerance)
        if not math.isfinite(self.computed):
            self.passed = False
        elif self.metric == "le":
            self.passed = self.computed <= self.expected + self.tolerance
        else:
            self.passed = abs(self.computed - self.expected) <= self.tolerance


@dataclass
class Report:
    config: dict
    checks: list = field(default_factory=list)
    fingerprint: dict = field(default_factory=dict)

    def add(self, name, identity, computed, expected, tolerance, metric="abs", tol_overrides=None):
        if tol_overrides and name in tol_overrides:
            tolerance = tol_overrides[name]
        chk = Check(name, identity, computed, expected, tolerance, metric)
        self.checks.append(chk)
        return chk

    def fail(self, name, identity, message):
        chk = Check(name, identity, math.nan, 0.0, 0.0)
        self.checks.append(chk)
        self.fingerprint.setdefault("errors", {})[name] = message

    @property
    def summary(self):
        n_pass = sum(c.passed for c in self.checks)
        return {"total": len(self.checks), "passed": n_pass, "failed": len(self.checks) - n_pass}

    def to_dict(self):
        return {
            "config": self.config,
            "summary": self.summary,
            "environment": dict(self.fingerprint, version=__version__),
            "checks": [asdict(c) for c in self.checks],
        }


@dataclass
class SuiteContext:
    mu: MuVector
    L: float | None
    nodes: int | None
    alpha: complex | None
    lam: float | None
    seed: int
    tol: dict
    out_dir: str
    report: Report

    def add(self, *args, **kwargs):
        return self.report.add(*args, tol_overrides=self.tol, **kwargs)

    @property
    def grid(self):
        return default_grid(self.mu.n, L=self.L, nodes=self.nodes)

    def curve(self, name, header, rows):
        path = os.path.join(self.out_dir, "curves", name + ".csv")
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for r in rows:
                w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])

    def field(self, name, f):
        path = os.path.join(self.out_dir, "fields", name + ".csv")
        os.makedirs(os.path.dirname(path), exist_ok=True)
        save_sampled(f, self.mu, path)


def _gauss(grid, a=1.0):
    return SampledFn.from_factors(grid, [np.exp(-0.5 * a * ax.nodes ** 2) for ax in grid.axes])


def _e_mu(mu, grid):
    return gaussian_family(mu, grid, [1.0])


# ---------------------------------------------------------------------------

def suite_special(ctx):
    rng = np.random.default_rng(ctx.seed)
    alphas = np.linspace(-0.49, 10.0, 50)
    zs = np.linspace(0.0, 60.0, 200)
    worst = 0.0
    for a in alphas:
        val = 2.0 ** a * gamma(a + 1.0) * np.abs(bessel_j_scaled(a, zs))
        worst = max(worst, float(val.max()))
    ctx.add("bessel_bound", "|2^a Gamma(a+1) z^-a J_a(z)| <= 1", worst, 1.0, 1e-12, "le")

    # r stays where exp(-r^2/2a) is not swamped by cancellation in double precision
    worst = 0.0
    for a in np.linspace(-0.4, 5.0, 5):
        for s in np.linspace(0.5, 4.0, 5):
            for r in np.linspace(0.1, 3.0, 5):
                exact = gaussian_hankel_pair(a, s, r)
                worst = max(worst, abs(gaussian_hankel_pair_quad(a, s, r) - exact) / abs(exact))
    ctx.add("gaussian_hankel_pair", "Gaussian-Bessel integral closed form", worst, 0.0, 1e-9)

    import math as _m
    pts = rng.uniform(0.1, 20.0, 32)
    err = max(abs(gamma(p) / _m.gamma(p) - 1.0) for p in pts)
    ctx.add("gamma_real", "gamma vs math.gamma", err, 0.0, 1e-13)


def suite_hankel(ctx):
    mu, grid = ctx.mu, ctx.grid
    plan = TransformPlan(mu, grid)
    e = _e_mu(mu, grid)
    he = hankel_z(plan, e)
    ctx.field("e_mu", e)
    ctx.field("h_e_mu", he)
    ctx.add("fixed_point_z", "h_mu e_mu = e_mu", e.sup_distance(he), 0.0, 1e-8)
    g = _gauss(grid)
    ctx.add("fixed_point_h", "H_mu exp(-|x|^2/2) = exp(-|x|^2/2)", g.sup_distance(hankel_h(plan, g)), 0.0, 1e-8)
    ctx.add("inversion_z", "h_mu h_mu f = f", check_inversion_z(e, plan), 0.0, 1e-7)
    f2 = gaussian_family(mu, grid, [1.0], a=2.0)
    ctx.add("inversion_z_narrow", "h_mu h_mu f = f", check_inversion_z(f2, plan), 0.0, 1e-6)
    ctx.add("inversion_h", "H_mu H_mu f = f", check_inversion_h(g, plan), 0.0, 1e-7)
    g4 = _gauss(grid, 0.5)
    ctx.add("inversion_h_wide", "H_mu H_mu f = f", check_inversion_h(g4, plan), 0.0, 1e-6)
    r = grid_r(mu, grid)
    lhs = r * hankel_z(plan, f2).values
    rhs = hankel_h(plan, f2.with_values(r * f2.values)).values
    ctx.add("z_h_consistency", "r h_mu f = H_mu (r f)", float(np.abs(lhs - rhs).max()), 0.0, 1e-9)
    ctx.add("parseval", "int (h f) g = int f (h g)", abs(parseval_pairing_z(e, f2, plan)), 0.0, 1e-8)
    bound = norm_weighted_linf(hankel_z(plan, f2), mu) - norm_weighted_lp(f2, mu, 1)
    ctx.add("boundedness", "|h f|_inf(r) <= |f|_1(sr)", bound, 0.0, 1e-8, "le")

    rows = []
    for nodes in (32, 64, 128):
        gr = default_grid(mu.n, L=ctx.L, nodes=nodes)
        err = check_inversion_z(_e_mu(mu, gr), TransformPlan(mu, gr))
        rows.append((nodes, err))
    ctx.curve("inversion_error", ["nodes_per_axis", "sup_error"], rows)
    mono = all(b[1] < a[1] for a, b in zip(rows, rows[1:]))
    ctx.add("inversion_refinement_monotone", "inversion error decreases with nodes", float(not mono), 0.0, 0.0)


def suite_delsarte(ctx):
    mu = ctx.mu
    rng = np.random.default_rng(ctx.seed + 1)
    uv = rng.uniform(0.2, 5.0, size=(4, 2))
    ts = rng.uniform(0.2, 4.0, size=4)
    worst_m = worst_n = worst_p = 0.0
    for a in sorted(set(mu.mu) | {0.0, 0.3, 1.2}):
        c = 2.0 ** a * gamma(a + 1.0)
        for u in uv[:, 0]:
            for v in uv[:, 1]:
                worst_m = max(worst_m, abs(delsarte_moment(a, u, v) * c / (u * v) ** (a + 0.5) - 1.0))
                worst_n = max(worst_n, abs(frakD_normalization(a, u, v) - 1.0))
                for t in ts:
                    worst_p = max(worst_p, abs(product_formula_lhs(a, u, v, t) - product_formula_rhs(a, u, v, t)))
    ctx.add("delsarte_third_moment", "int w^(a+1/2) D dw = (uv)^(a+1/2)/C_a", worst_m, 0.0, 1e-7)
    ctx.add("frakD_normalization", "int frakD s dw = 1", worst_n, 0.0, 1e-6)
    ctx.add("product_formula", "int D sqrt(wt)J(wt) dw = product of kernels", worst_p, 0.0, 1e-6)

    grid = ctx.grid
    cplan = ConvPlan(mu, grid)
    tplan = TransformPlan(mu, grid)
    e = _e_mu(mu, grid)
    f2 = gaussian_family(mu, grid, [1.0], a=2.0)
    ee = conv_sharp(e, e, cplan)
    law = hankel_z(tplan, ee).values - grid_r(mu, grid) * hankel_z(tplan, e).values ** 2
    ctx.add("convolution_theorem", "h(f # g) = r h f h g", float(np.abs(law).max()), 0.0, 1e-5)
    ctx.add("commutativity", "f # g = g # f", conv_sharp(e, f2, cplan).sup_distance(conv_sharp(f2, e, cplan)), 0.0, 1e-10)
    gh = _gauss(grid)
    hh = hankel_h(tplan, conv_hash(gh, gh, cplan)).values - hankel_h(tplan, gh).values ** 2
    ctx.add("hash_transform_law", "H(f # g) = H f H g", float(np.abs(hh).max()), 0.0, 1e-5)
    for p in (1, 2, "inf"):
        for f, g, tag in ((e, e, "ee"), (e, f2, "ef")):
            lhs, rhs = young_bound_check(f, g, p, cplan)
            ctx.add(f"young_p{p}_{tag}", "|f # g|_p <= |f|_1 |g|_p", lhs - rhs, 0.0, 1e-6, "le")

    ms = [1, 4, 16, 64]
    errs = approx_identity_convergence(gh, ms, cplan)
    s = grid_s(mu, grid)
    closed = []
    for m in ms:
        c = (1.0 + 1.0 / m) ** (-mu.kappa) * np.exp(-0.5 * grid.norm2 / (1.0 + 1.0 / m))
        closed.append(float(grid.integrate(np.abs(c - gh.values) * s)))
    ctx.curve("approx_identity", ["m", "l1s_error", "closed_form"], list(zip(ms, errs, closed)))
    ctx.add("approx_identity_decreasing", "|f # phi_m - f| decreasing in m",
            float(not all(b < a for a, b in zip(errs, errs[1:]))), 0.0, 0.0)
    ctx.add("approx_identity_closed_form", "f # phi_m matches its closed form",
            max(abs(a - b) for a, b in zip(errs, closed)), 0.0, 1e-6)


def _resolvent_grid(mu):
    ax = gauss_axis(RESOLVENT_NODES, RESOLVENT_L, 2.0)
    return TensorGrid((ax,) * mu.n)


def _window(grid, upper=6.0):
    mask = interior_mask(grid)
    for c in grid.coords:
        mask &= c <= upper
    return mask


def suite_resolvent(ctx):
    mu = ctx.mu
    lams = (ctx.lam,) if ctx.lam else (0.5, 1.0, 4.0)
    if mu.n <= 2:
        rgrid = _resolvent_grid(mu)
        ygrid = TensorGrid((gauss_axis(64, 8.0),) * mu.n)
        tp = TransformPlan(mu, rgrid, ygrid)
        rows = []
        for lam in lams:
            K = resolvent_kernel(lam, mu, rgrid).values
            nrm = l1_sr_norm(K, mu)
            ex = ygrid.power(mu.array + 0.5) / (lam + ygrid.norm2)
            rel = float(np.max(np.abs(hankel_z(tp, K).values - ex) / np.abs(ex)))
            rows.append((lam, nrm, rel))
            ctx.add(f"resolvent_norm_lam{lam:g}", "|N_lam|_1(sr) = 1/lam", abs(nrm * lam - 1.0), 0.0, 1e-6)
            ctx.add(f"resolvent_transform_lam{lam:g}", "h N_lam = y^(mu+1/2)/(lam+|y|^2)", rel, 0.0, 1e-5)
        ctx.curve("resolvent_kernel", ["lambda", "l1sr_norm", "transform_rel_error"], rows)

    grid = ctx.grid
    tp = TransformPlan(mu, grid)
    cp = ConvPlan(mu, grid)
    e = _e_mu(mu, grid)
    win = _window(grid)
    lams = (ctx.lam,) if ctx.lam else (0.25, 1.0, 4.0, 16.0)
    for lam in lams:
        gc = resolvent_apply_conv(lam, e, cp)
        gs = resolvent_apply_spectral(lam, e, tp)
        ident = np.abs(lam * gc.values - apply_S_fd(gc, mu).values - e.values)[win].max()
        ctx.add(f"resolvent_identity_lam{lam:g}", "(lam - S) N_lam # f = f", float(ident), 0.0, 1e-4)
        ctx.add(f"resolvent_routes_lam{lam:g}", "convolution and spectral resolvents agree",
                float(np.abs(gc.values - gs.values)[win].max()), 0.0, 1e-4)
        ratio = lam * norm_weighted_linf(gc, mu) / norm_weighted_linf(e, mu)
        ctx.add(f"resolvent_contraction_lam{lam:g}", "|lam R f|_inf(r) <= |f|_inf(r)", ratio, 1.0, 1e-6, "le")
    ctx.field("resolvent_e_mu", resolvent_apply_spectral(1.0, e, tp))

    Sa = gaussian_family(mu, grid, S_on_gaussian_family(mu, [1.0]))
    mask = interior_mask(grid)
    ctx.add("S_spectral_closed_form", "S e_mu closed form", Sa.sup_distance(apply_S_spectral(e, tp)), 0.0, 1e-6)
    ctx.add("S_fd_vs_spectral", "FD and spectral S agree",
            float(np.abs(apply_S_fd(e, mu).values - apply_S_spectral(e, tp).values)[mask].max()), 0.0, 1e-4)
    r = grid_r(mu, grid)
    sim = r ** -1 * apply_Delta_fd(e.with_values(r * e.values), mu).values
    ctx.add("similarity", "S = x^(mu+1/2) Delta x^(-mu-1/2)",
            float(np.abs(sim - apply_S_fd(e, mu).values)[mask].max()), 0.0, 1e-4)


def suite_power(ctx):
    mu, grid = ctx.mu, ctx.grid
    tp = TransformPlan(mu, grid)
    e = _e_mu(mu, grid)
    alphas = [ctx.alpha] if ctx.alpha is not None else [0.3, 0.5, 1.5, 0.5 + 0.5j]
    for a in alphas:
        order = FracOrder(a)
        tag = f"{complex(a).real:g}{complex(a).imag:+g}i"
        sp = frac_power_spectral(order, e, tp)
        bb = frac_power_balakrishnan(order, e, tp, method="quadrature")
        ctx.add(f"balakrishnan_vs_spectral_{tag}", "Balakrishnan and multiplier routes agree", sp.sup_distance(bb), 0.0, 1e-4)
        rho = np.logspace(-6.0, 3.0, 400)
        mb = balakrishnan_multiplier(order, rho)
        mq = balakrishnan_multiplier_quadrature(order, rho)
        ctx.add(f"balakrishnan_multiplier_{tag}", "Beta reduction vs direct lambda quadrature",
                float(np.max(np.abs(mb - mq) / np.abs(mb))), 0.0, 1e-9)
    phi = gaussian_family(mu, grid, neg_S_power_coeffs(mu, 2))
    comp = frac_power_spectral(0.4, frac_power_spectral(0.6, phi, tp), tp)
    one = frac_power_spectral(1.0, phi, tp)
    ctx.add("semigroup", "(-S)^0.4 (-S)^0.6 = -S (relative sup)",
            comp.sup_distance(one) / float(np.abs(one.values).max()), 0.0, 1e-5)
    mask = interior_mask(grid)
    neg_s = frac_power_spectral(1.0, e, tp).values
    ctx.add("power_one_vs_fd", "(-S)^1 = -S", float(np.abs(neg_s + apply_S_fd(e, mu).values)[mask].max()), 0.0, 1e-4)
    beta = mu.array + 0.5
    fh = e.times_power(-beta)
    lhs = frac_power_delta(0.7, fh, tp).values
    rhs = frac_power_spectral(0.7, e, tp).times_power(-beta).values
    ctx.add("delta_weight_algebra", "(-Delta)^a (r^-1 f) = r^-1 (-S)^a f", float(np.abs(lhs - rhs).max()), 0.0, 1e-12)
    d1 = frac_power_delta(1.0, _gauss(grid), tp)
    dfd = apply_Delta_fd(_gauss(grid), mu)
    ctx.add("delta_power_one_vs_fd", "(-Delta)^1 = -Delta", float(np.abs(d1.values + dfd.values)[mask].max()), 0.0, 1e-4)


def liouville_residuals(mu, alpha, nodes, L, test_order=LIOUVILLE_TEST_ORDER):
    """Scale-free pairing residuals ``|<u, (-S)^a phi>| / <|u|, |(-S)^a phi|>``.

    Returns a dict with one entry per kernel polynomial plus ``control``.
    """
    grid = default_grid(mu.n, L=L, nodes=nodes)
    tp = TransformPlan(mu, grid)
    coeffs = neg_S_power_coeffs(mu, test_order)
    phi = gaussian_family(mu, grid, coeffs)
    out = {}
    for k in range(3):
        v, s = liouville_pairing(WeightedPolynomial(mu, (0.0,) * k + (1.0,)), alpha, phi, tp, True)
        out[f"zemanian_k{k}"] = abs(v) / s
    phi_h = SampledFn(grid, np.polynomial.polynomial.polyval(grid.norm2, coeffs) * np.exp(-0.5 * grid.norm2))
    for k in range(2):
        u = WeightedPolynomial(mu, (0.0,) * k + (1.0,), "hirschman")
        v, s = liouville_pairing_delta(u, alpha, phi_h, tp, True)
        out[f"hirschman_k{k}"] = abs(v) / s
        out[f"hirschman_k{k}_transfer"] = abs(v - liouville_pairing_delta_direct(u, alpha, phi_h, tp))
    psi = frac_power_spectral(alpha, phi, tp).values
    uc = grid.power(mu.array + 0.5) * np.exp(-0.25 * grid.norm2)
    w = grid.cell_weights
    out["control"] = abs(np.sum(uc * psi * w)) / np.sum(np.abs(uc * psi) * w)
    return out


def suite_liouville(ctx):
    mu = ctx.mu
    alpha = ctx.alpha if ctx.alpha is not None else 0.5
    L_fine = ctx.L or 12.0
    levels = [(64, L_fine / math.sqrt(2.0)), (128, L_fine)]
    res = [liouville_residuals(mu, alpha, n, L) for n, L in levels]
    keys = [k for k in res[0] if k.startswith(("zemanian", "hirschman")) and not k.endswith("transfer")]
    rows = [(n, L, *[r[k] for k in keys], r["control"]) for (n, L), r in zip(levels, res)]
    ctx.curve("liouville", ["nodes", "L", *keys, "control"], rows)
    fine = res[-1]
    worst = max(fine[k] for k in keys)
    sep = fine["control"] / worst
    ctx.add("liouville_separation", "kernel pairings >= 100x below the control", -sep, -100.0, 0.0, "le")
    for k in keys:
        ctx.add(f"liouville_refinement_{k}", "kernel pairing decreases under refinement", res[1][k], res[0][k], 0.0, "le")
        if k.startswith("hirschman"):
            ctx.add(f"liouville_transfer_{k}", "weight transfer of the pairing", fine[k + "_transfer"], 0.0, 1e-10)


SUITES = {
    "special": suite_special,
    "hankel": suite_hankel,
    "delsarte": suite_delsarte,
    "resolvent": suite_resolvent,
    "power": suite_power,
    "liouville": suite_liouville,
}


def run_suites(names, ctx):
    for name in SUITE_ORDER:
        if name not in names:
            continue
        try:
            SUITES[name](ctx)
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            ctx.report.fail(f"{name}_suite", name, f"{type(exc).__name__}: {exc}")
    return ctx.report
