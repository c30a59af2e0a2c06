"""Command-line front end.

Usage::

    lqlab survival kind=brownian sigma=1 --t 1 --u 0,0.5,1 --method closed
    lqlab validate kind=cpp lambda=1 mu=1 --paths 100000 --output out.csv
    lqlab asymp-light kind=brownian --regime proportional --A 1 --T 4

Every command writes CSV with the header
``model,command,method,t,u,x,q,value,stderr,flags``.  Arguments may also be
read from a file with ``@args.txt`` (one token per line).

Exit status: 0 on success, 1 when ``validate`` finds a failing check, 2 for
malformed requests, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from typing import List, Optional

from . import closedform, fluctuation, inversion, mcsim, tail_heavy, tail_light
from .errors import (
    AssumptionError,
    ClassificationError,
    DomainError,
    LqlabError,
    ModelSpecError,
    NumericalError,
    UnsupportedModelError,
)
from .models import BrownianDrift, model_spec, parse_model

HEADER = ["model", "command", "method", "t", "u", "x", "q", "value", "stderr", "flags"]
EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

INVERSION_TOL = 5e-3
FALLBACK_TOL = 1e-2
MC_SIGMAS = 3.0


class RequestError(Exception):
    """Malformed or inapplicable request (exit status 2)."""


class GridPointError(Exception):
    """Numerical failure at an identified grid point (exit status 3)."""


def _prob(v):
    return format(v, ".9g")


def _rate(v):
    return format(v, ".12g")


def _coord(v):
    return "" if v is None else format(v, ".12g")


class Table:
    def __init__(self, model, command):
        self.spec = model_spec(model)
        self.command = command
        self.rows = []

    def add(self, method, value, *, t=None, u=None, x=None, q=None, stderr=None,
            flags=(), fmt=_prob):
        if not math.isfinite(value) or (stderr is not None and not math.isfinite(stderr)):
            raise GridPointError(f"non-finite result for method {method} at "
                                 f"{_point(t=t, u=u, x=x, q=q)}")
        self.rows.append([self.spec, self.command, method, _coord(t), _coord(u), _coord(x),
                          _coord(q), fmt(value), "" if stderr is None else _prob(stderr),
                          ";".join(flags)])

    def render(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(self.rows)
        return buf.getvalue()


def _point(**coords):
    return ", ".join(f"{k}={v:g}" for k, v in coords.items() if v is not None)


def _float_list(text, name):
    values = []
    col = 1
    for item in text.split(","):
        try:
            values.append(float(item))
        except ValueError:
            raise RequestError(f"--{name}: column {col}: not a number: {item!r}") from None
        col += len(item) + 1
    return values


def _build_parser():
    parser = argparse.ArgumentParser(prog="lqlab", fromfile_prefix_chars="@",
                                     description="Minimum workload of Levy-driven queues.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("model", nargs="+", help="model tokens, e.g. kind=cpp lambda=1 mu=1")
        p.add_argument("--output", "-o", default="-", help="CSV path ('-' for stdout)")
        p.add_argument("--terms", type=int, default=16, help="Gaver-Stehfest terms")
        p.add_argument("--mode", choices=("standard", "extended"), default="standard")
        p.add_argument("--paths", type=int, default=100_000)
        p.add_argument("--dt", type=float, default=0.01)
        p.add_argument("--seed", type=int, default=20240611)
        p.add_argument("--workers", type=int, default=None,
                       help="parallel MC lanes (default: $LQLAB_THREADS or 1)")
        p.add_argument("--no-bridge", action="store_true", help="disable Brownian-bridge minima")
        p.add_argument("--burn-in", type=float, default=50.0)
        return p

    p = common(sub.add_parser("survival", help="P{M(t) > u}"))
    p.add_argument("--t", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--method", default=None, help="comma list of closed,invert,mc")

    p = common(sub.add_parser("transform", help="exponential-clock transforms"))
    p.add_argument("--x", required=True)
    p.add_argument("--q", default=None)
    p.add_argument("--kind", default="L,K,Qe,Ymax")
    p.add_argument("--side", choices=("sn", "sp"), default=None)

    p = common(sub.add_parser("mgf", help="E exp(-x M(t))"))
    p.add_argument("--x", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--method", default="invert,mc")

    for name in ("asymp-heavy", "asymp-light"):
        p = common(sub.add_parser(name, help="tail asymptotics"))
        p.add_argument("--u", default=None)
        p.add_argument("--T", default=None)
        p.add_argument("--regime", choices=tail_heavy.REGIMES, default=None)
        p.add_argument("--A", type=float, default=None)

    p = common(sub.add_parser("simulate", help="Monte Carlo estimates only"))
    p.add_argument("--t", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--x", default=None)

    p = common(sub.add_parser("validate", help="closed form vs inversion vs Monte Carlo"))
    p.add_argument("--t", default="0.5,1,2")
    p.add_argument("--u", default="0,0.25,0.5,1")
    return parser


def _mc_config(args):
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("LQLAB_THREADS", "1"))
    return mcsim.McConfig(paths=args.paths, dt=args.dt, seed=args.seed, workers=workers,
                          bridge=not args.no_bridge, burn_in=args.burn_in)


def _inv_config(args):
    return inversion.InversionConfig(terms=args.terms, mode=args.mode)


def _has_closed(model):
    return isinstance(model, BrownianDrift) and model.sigma == 1.0


def _one_sided(model):
    try:
        fluctuation.resolve_side(model)
        return True
    except UnsupportedModelError:
        return False


def _guard(fn, **coords):
    try:
        return fn()
    except (NumericalError, AssumptionError) as exc:
        raise GridPointError(f"{exc} at {_point(**coords)}") from exc


# ---------------------------------------------------------------------------
# commands


def _cmd_survival(model, args, table):
    ts, us = _float_list(args.t, "t"), _float_list(args.u, "u")
    available = [m for m, ok in (("closed", _has_closed(model)),
                                 ("invert", _one_sided(model)),
                                 ("mc", True)) if ok]
    methods = available if args.method is None else args.method.split(",")
    for m in methods:
        if m not in ("closed", "invert", "mc"):
            raise RequestError(f"unknown method {m!r}")
        if m not in available:
            raise RequestError(f"method {m!r} is not available for {model_spec(model)}")
    icfg, mcfg = _inv_config(args), _mc_config(args)
    for t in ts:
        if "closed" in methods:
            for u in us:
                table.add("closed", _guard(lambda: closedform.survival_brownian(t, u), t=t, u=u),
                          t=t, u=u)
        if "invert" in methods:
            for u in us:
                est = _guard(lambda: inversion.survival(model, t, u, icfg), t=t, u=u)
                table.add(est.method, est.value, t=t, u=u, flags=est.flags)
        if "mc" in methods:
            for u, est in zip(us, mcsim.estimate_survival_grid(model, t, us, mcfg)):
                table.add(est.method, est.mean, t=t, u=u, stderr=est.stderr, flags=est.flags)


def _cmd_transform(model, args, table):
    xs = _float_list(args.x, "x")
    qs = _float_list(args.q, "q") if args.q else []
    kinds = args.kind.split(",")
    for k in kinds:
        if k not in ("L", "K", "Qe", "Ymax"):
            raise RequestError(f"unknown transform kind {k!r}")
    if any(k != "Qe" for k in kinds) and not qs:
        raise RequestError("--q is required for transform kinds L, K, Ymax")
    funcs = {"L": fluctuation.transform, "K": fluctuation.k_transform,
             "Ymax": fluctuation.ymax_transform}
    for x in xs:
        if "Qe" in kinds:
            tv = _guard(lambda: fluctuation.qe_transform(model, x, args.side), x=x)
            table.add("transform-Qe", tv.value, x=x)
        for q in qs:
            for k in kinds:
                if k == "Qe":
                    continue
                tv = _guard(lambda: funcs[k](model, x, q, args.side), x=x, q=q)
                table.add(f"transform-{k}", tv.value, x=x, q=q)


def _cmd_mgf(model, args, table):
    xs, ts = _float_list(args.x, "x"), _float_list(args.t, "t")
    methods = args.method.split(",")
    icfg, mcfg = _inv_config(args), _mc_config(args)
    for t in ts:
        if "invert" in methods:
            for x in xs:
                v = _guard(lambda: inversion.mgf_of_M(model, x, t, icfg), t=t, x=x)
                table.add("invert-mgf", v, t=t, x=x)
        if "mc" in methods:
            for x, est in zip(xs, mcsim.estimate_mgf_grid(model, xs, t, mcfg)):
                table.add(est.method, est.mean, t=t, x=x, stderr=est.stderr, flags=est.flags)


def _asymp_points(args):
    us = _float_list(args.u, "u") if args.u else None
    Ts = _float_list(args.T, "T") if args.T else None
    if args.regime is None:
        if us is None or Ts is None:
            raise RequestError("without --regime both --u and --T are required")
        return None, [(u, T) for u in us for T in Ts]
    try:
        regime = tail_heavy.RegimeSpec(args.regime, args.A)
    except DomainError as exc:
        raise RequestError(str(exc)) from None
    if args.regime == "T_small":
        if us is None:
            raise RequestError("regime T_small takes its argument from --u")
        return regime, [(u, None) for u in us]
    if Ts is None:
        raise RequestError(f"regime {args.regime} takes its argument from --T")
    return regime, [(None, T) for T in Ts]


def _cmd_asymp_heavy(model, args, table):
    regime, points = _asymp_points(args)
    for u, T in points:
        if regime is None:
            res = _guard(lambda: tail_heavy.asymp_heavy(model, u, T), u=u, t=T)
        else:
            res = _guard(lambda: tail_heavy.asymp_heavy_regime(model, regime, u if T is None else T),
                         u=u, t=T)
        table.add(f"asymp-heavy-{res.formula}", res.value, t=T, u=u, flags=("asymptotic",))


def _cmd_asymp_light(model, args, table):
    regime, points = _asymp_points(args)
    for u, T in points:
        if regime is None:
            v = _guard(lambda: tail_light.decay_rate_light(model, u, T), u=u, t=T)
            method = "decay-window"
        else:
            v = _guard(lambda: tail_light.decay_rate_regime(model, regime, u if T is None else T),
                       u=u, t=T)
            method = f"decay-{regime.kind}"
        table.add(method, v, t=T, u=u, flags=("asymptotic",), fmt=_rate)


def _cmd_simulate(model, args, table):
    ts, us = _float_list(args.t, "t"), _float_list(args.u, "u")
    xs = _float_list(args.x, "x") if args.x else []
    mcfg = _mc_config(args)
    for t in ts:
        for u, est in zip(us, mcsim.estimate_survival_grid(model, t, us, mcfg)):
            table.add(est.method, est.mean, t=t, u=u, stderr=est.stderr, flags=est.flags)
        for x, est in zip(xs, mcsim.estimate_mgf_grid(model, xs, t, mcfg)):
            table.add(est.method, est.mean, t=t, x=x, stderr=est.stderr, flags=est.flags)


def _cmd_validate(model, args, table):
    """Cross-method comparison; returns the summary rows."""
    if not _one_sided(model):
        raise RequestError(f"validate needs a spectrally one-sided model, got {model_spec(model)}")
    ts, us = _float_list(args.t, "t"), _float_list(args.u, "u")
    icfg, mcfg = _inv_config(args), _mc_config(args)
    closed = _has_closed(model)
    # check name -> [max discrepancy, max allowed slack at that point, pass]
    checks = {}

    def record(name, diff, allowed):
        worst = checks.setdefault(name, [0.0, 0.0, True])
        if diff > worst[0]:
            worst[0], worst[1] = diff, allowed
        worst[2] = worst[2] and diff <= allowed

    for t in ts:
        mc = mcsim.estimate_survival_grid(model, t, us, mcfg)
        for u, est in zip(us, mc):
            ref = None
            if closed:
                ref = closedform.survival_brownian(t, u)
                table.add("closed", ref, t=t, u=u)
            inv = None
            if u > 0 or fluctuation.has_closed_qe_tail(model):
                inv = _guard(lambda: inversion.survival(model, t, u, icfg), t=t, u=u)
                table.add(inv.method, inv.value, t=t, u=u, flags=inv.flags)
            table.add(est.method, est.mean, t=t, u=u, stderr=est.stderr, flags=est.flags)
            if ref is not None:
                record("closed-vs-invert", abs(ref - inv.value), INVERSION_TOL)
                record("closed-vs-mc", abs(ref - est.mean), MC_SIGMAS * est.stderr)
            elif inv is not None:
                tol = FALLBACK_TOL if "fallback-inversion" in inv.flags else INVERSION_TOL
                record("invert-vs-mc", abs(inv.value - est.mean), MC_SIGMAS * est.stderr + tol)
    return [[name, _rate(d), _rate(a), "pass" if ok else "fail"]
            for name, (d, a, ok) in checks.items()]


COMMANDS = {
    "survival": _cmd_survival,
    "transform": _cmd_transform,
    "mgf": _cmd_mgf,
    "asymp-heavy": _cmd_asymp_heavy,
    "asymp-light": _cmd_asymp_light,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
}


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on malformed flags
    try:
        model = parse_model(" ".join(args.model))
        table = Table(model, args.command)
        summary = COMMANDS[args.command](model, args, table)
    except ModelSpecError as exc:
        print(f"lqlab: model specification: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RequestError, ClassificationError, UnsupportedModelError, DomainError) as exc:
        print(f"lqlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GridPointError as exc:
        print(f"lqlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except LqlabError as exc:
        print(f"lqlab: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    _write(args.output, table.render())
    if summary is None:
        return EXIT_OK

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "max_discrepancy", "allowed", "status"])
    writer.writerows(summary)
    sys.stderr.write(buf.getvalue())
    if args.output != "-":
        _write(args.output + ".summary.csv", buf.getvalue())
    return EXIT_OK if all(row[3] == "pass" for row in summary) else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
