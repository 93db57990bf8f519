"""Command-line front end.

Exit codes: 0 success, 1 a numerical check failed, 2 invalid configuration
or domain error, 3 unreadable or malformed input.
"""
import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, kernels
from ._jit import USE_NUMBA
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
)
from .grids import MuVector, default_grid, load_sampled, save_sampled
from .hankel import TransformPlan, hankel_h, hankel_z
from .special import DomainError
from .suites import SUITE_ORDER, Report, SuiteContext, run_suites

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _parse_tol(items):
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep or not name:
            raise DomainError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(val)
        except ValueError:
            raise DomainError(f"bad tolerance value in {item!r}") from None
        if not out[name] >= 0:
            raise DomainError(f"tolerance must be non-negative: {item!r}")
    return out


def _alpha(re, im):
    if re is None:
        if im:
            raise DomainError("--alpha-im given without --alpha")
        return None
    return complex(re, im or 0.0)


def _mu_from_args(args):
    mu = MuVector(tuple(args.mu))
    if args.n is not None and args.n != mu.n:
        raise DomainError(f"--n {args.n} does not match {mu.n} mu components")
    return mu


def _read_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise InputError("config must be a JSON object")
    return cfg


def _apply_config(args):
    """Values from ``--config`` fill in anything not given on the command line."""
    if not args.config:
        return
    cfg = _read_config(args.config)
    known = {"mu", "n", "grid_nodes", "grid_L", "alpha", "alpha_im", "lam", "seed", "suite", "tol"}
    unknown = set(cfg) - known
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    for key, val in cfg.items():
        if key == "tol":
            args.tol = [f"{k}={v}" for k, v in val.items()] + (args.tol or [])
        elif getattr(args, key, None) in (None, []):
            setattr(args, key, val)


def cmd_run(args):
    _apply_config(args)
    if not args.mu:
        raise DomainError("mu is required (--mu or config)")
    mu = _mu_from_args(args)
    if mu.n > 3:
        raise DomainError("grids are implemented for n <= 3")
    if args.grid_nodes is not None and args.grid_nodes < 16:
        raise DomainError("--grid-nodes must be at least 16")
    if args.grid_L is not None and not args.grid_L > 0:
        raise DomainError("--grid-L must be positive")
    if args.lam is not None and not args.lam > 0:
        raise DomainError("--lambda must be positive")
    alpha = _alpha(args.alpha, args.alpha_im)
    if alpha is not None:
        FracOrder(alpha)
    suite = args.suite or "all"
    names = SUITE_ORDER if suite == "all" else (suite,)
    if suite != "all" and suite not in SUITE_ORDER:
        raise DomainError(f"unknown suite {suite!r}")
    tol = _parse_tol(args.tol)
    seed = 0 if args.seed is None else int(args.seed)
    os.makedirs(args.out, exist_ok=True)

    config = {
        "suite": suite, "mu": list(mu.mu), "n": mu.n, "grid_nodes": args.grid_nodes,
        "grid_L": args.grid_L, "alpha": None if alpha is None else [alpha.real, alpha.imag],
        "lambda": args.lam, "seed": seed, "tol": tol,
    }
    report = Report(config)
    grid = default_grid(mu.n, L=args.grid_L, nodes=args.grid_nodes)
    report.fingerprint = {"grid_hash": grid.fingerprint(), "numba": bool(USE_NUMBA),
                          "bessel_switch": kernels.Z_SWITCH}
    ctx = SuiteContext(mu, args.grid_L, args.grid_nodes, alpha, args.lam, seed, tol, args.out, report)
    run_suites(names, ctx)

    doc = report.to_dict()
    doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    with open(os.path.join(args.out, "report.json"), "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
    for c in report.checks:
        flag = "PASS" if c.passed else "FAIL"
        print(f"{flag}  {c.name:<40s} {c.computed:.3e}  (tol {c.tolerance:.1e})")
    s = report.summary
    print(f"{s['passed']}/{s['total']} checks passed")
    return EXIT_OK if s["failed"] == 0 else EXIT_CHECK


def _load_input(path):
    if not os.path.exists(path):
        raise InputError(f"no such file: {path}")
    if os.path.getsize(path) == 0:
        raise InputError(f"empty input: {path}")
    try:
        return load_sampled(path)
    except DomainError as exc:
        raise InputError(str(exc)) from None
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse {path}: {exc}") from None


def _read_params(path):
    if path is None:
        return {}
    p = _read_config(path)
    unknown = set(p) - {"alpha_re", "alpha_im", "m", "mu"}
    if unknown:
        raise DomainError(f"unknown parameter keys: {sorted(unknown)}")
    return p


def _order_from(args, params, mu):
    if "mu" in params and MuVector(tuple(np.atleast_1d(params["mu"]))) != mu:
        raise DomainError("parameter mu does not match the input sidecar")
    re = params.get("alpha_re", args.alpha)
    im = params.get("alpha_im", args.alpha_im)
    if re is None:
        raise DomainError("alpha is required")
    return FracOrder(complex(re, im or 0.0), params.get("m", args.m))


def _check_mu_arg(args, mu):
    if args.mu and MuVector(tuple(args.mu)) != mu:
        raise DomainError("--mu does not match the input sidecar")


def cmd_transform(args):
    f, mu = _load_input(args.input)
    _check_mu_arg(args, mu)
    plan = TransformPlan(mu, f.grid)
    out = hankel_z(plan, f) if args.kind == "z" else hankel_h(plan, f)
    save_sampled(out, mu, args.output)
    return EXIT_OK


def cmd_power(args):
    f, mu = _load_input(args.input)
    _check_mu_arg(args, mu)
    order = _order_from(args, _read_params(args.params), mu)
    plan = TransformPlan(mu, f.grid)
    if args.operator == "S":
        out = frac_power_spectral(order, f, plan)
    else:
        out = frac_power_delta(order, f, plan)
    save_sampled(out, mu, args.output)
    return EXIT_OK


def cmd_pairing(args):
    phi, mu = _load_input(args.input)
    _check_mu_arg(args, mu)
    order = _order_from(args, _read_params(args.params), mu)
    plan = TransformPlan(mu, phi.grid)
    u = WeightedPolynomial(mu, tuple(args.coeffs), args.weight)
    if args.weight == "zemanian":
        val, scale = liouville_pairing(u, order, phi, plan, True)
    else:
        val, scale = liouville_pairing_delta(u, order, phi, plan, True)
    print(json.dumps({"re": val.real, "im": val.imag, "scale": scale,
                      "relative": abs(val) / scale if scale else None}))
    return EXIT_OK


def cmd_balakrishnan(args):
    f, mu = _load_input(args.input)
    order = _order_from(args, _read_params(args.params), mu)
    plan = TransformPlan(mu, f.grid)
    rho = plan.out_grid.norm2
    mb = balakrishnan_multiplier(order, rho)
    mq = balakrishnan_multiplier_quadrature(order, rho)
    mult_err = float(np.max(np.abs(mb - mq) / np.abs(mb)))
    sp = frac_power_spectral(order, f, plan)
    route_err = sp.sup_distance(frac_power_balakrishnan(order, f, plan, method="quadrature"))
    scale = max(float(np.abs(sp.values).max()), 1e-300)
    ok = mult_err <= args.tol and route_err <= args.tol * scale
    print(json.dumps({"multiplier_rel_error": mult_err, "route_sup_error": route_err,
                      "route_scale": scale, "pass": ok}))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_sample(args):
    mu = MuVector(tuple(args.mu))
    grid = default_grid(mu.n, L=args.grid_L, nodes=args.grid_nodes)
    vals = grid.power(mu.array + 0.5) * np.exp(-0.5 * grid.norm2)
    from .grids import SampledFn
    save_sampled(SampledFn(grid, vals), mu, args.output)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="fracbessel", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run verification suites and write a report")
    r.add_argument("--suite", choices=("all",) + SUITE_ORDER, default=None)
    r.add_argument("--mu", type=float, nargs="+", action="extend")
    r.add_argument("--n", type=int)
    r.add_argument("--grid-nodes", type=int)
    r.add_argument("--grid-L", type=float)
    r.add_argument("--alpha", type=float)
    r.add_argument("--alpha-im", type=float)
    r.add_argument("--lambda", dest="lam", type=float)
    r.add_argument("--seed", type=int)
    r.add_argument("--tol", action="append", metavar="NAME=VALUE")
    r.add_argument("--config", help="JSON file with any of the options above")
    r.add_argument("--out", default="out")
    r.set_defaults(func=cmd_run)

    def io_args(sp, with_order=True):
        sp.add_argument("input", help="CSV with a JSON grid sidecar")
        sp.add_argument("--mu", type=float, nargs="+")
        if with_order:
            sp.add_argument("--alpha", type=float)
            sp.add_argument("--alpha-im", type=float)
            sp.add_argument("--m", type=int)
            sp.add_argument("--params", help="JSON {alpha_re, alpha_im, m, mu}")

    t = sub.add_parser("transform", help="apply h_mu or H_mu to a sampled function")
    io_args(t, with_order=False)
    t.add_argument("--kind", choices=("z", "h"), default="z")
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_transform)

    pw = sub.add_parser("power", help="fractional power of -S_mu or -Delta_mu")
    io_args(pw)
    pw.add_argument("--operator", choices=("S", "Delta"), default="S")
    pw.add_argument("-o", "--output", required=True)
    pw.set_defaults(func=cmd_power)

    pr = sub.add_parser("pairing", help="pair a weighted polynomial with (-S)^alpha phi")
    io_args(pr)
    pr.add_argument("--coeffs", type=float, nargs="+", default=[1.0],
                    help="ascending coefficients in |x|^2")
    pr.add_argument("--weight", choices=("zemanian", "hirschman"), default="zemanian")
    pr.set_defaults(func=cmd_pairing)

    b = sub.add_parser("balakrishnan-check", help="compare the two fractional-power routes")
    io_args(b)
    b.add_argument("--tol", type=float, default=1e-8)
    b.set_defaults(func=cmd_balakrishnan)

    s = sub.add_parser("sample", help="write x^(mu+1/2) exp(-|x|^2/2) on a default grid")
    s.add_argument("--mu", type=float, nargs="+", required=True)
    s.add_argument("--grid-nodes", type=int)
    s.add_argument("--grid-L", type=float)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
