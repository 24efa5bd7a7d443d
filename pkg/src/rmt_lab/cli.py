"""Command-line front end: ``rmt-lab <subcommand> ...``.

Single values print as plain text by default and tables as CSV; ``--format
json`` gives a machine-readable record. The resolved configuration of each
run is echoed to standard error as one JSON line. Exit codes: 0 success,
1 failed check, 2 usage error, 3 numerical failure (diagnostics as JSON).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from ._util import NumericalError, dumps, format_rational, to_jsonable, write_csv


class UsageError(Exception):
    pass


# -- output ----------------------------------------------------------------------------

def _grid(spec: str) -> np.ndarray:
    try:
        a, b, step = (float(v) for v in spec.split(":"))
    except ValueError as exc:
        raise UsageError(f"--grid expects a:b:step, got {spec!r}") from exc
    if step <= 0 or b < a:
        raise UsageError("--grid needs a <= b and step > 0")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(count)


def _fmt_value(v: Any) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if type(v).__module__.startswith("mpmath"):
        return repr(float(v))
    return str(v)


def _emit_value(args, name: str, value: Any, extra: dict | None = None) -> str:
    if args.format == "json":
        return dumps({"quantity": name, "value": value, **(extra or {})})
    if args.format == "csv":
        rows = [[name, _fmt_value(value)]] + [[k, _fmt_value(v)] for k, v in (extra or {}).items()]
        return write_csv(["quantity", "value"], rows).rstrip("\n")
    return _fmt_value(value)


def _emit_table(args, header: Sequence[str], rows: list[Sequence[Any]]) -> str:
    if args.format == "json":
        return dumps([dict(zip(header, r)) for r in rows])
    rows = [[_fmt_value(v) for v in r] for r in rows]
    return write_csv(header, rows).rstrip("\n")


# -- subcommands ------------------------------------------------------------------------

def _cmd_exact(args) -> str:
    from . import exact_laws as ex
    from .partitions import dim_semistandard, dim_standard

    if args.what == "perm-lis":
        if args.k is None:
            t = ex.perm_lis_table(args.n)
            return _emit_table(args, ["k", "cdf"], list(zip(t.support, t.values)))
        return _emit_value(args, "P(L<=k)", ex.perm_lis_cdf(args.n, args.k), {"n": args.n, "k": args.k})
    if args.what == "word-lis":
        if args.k is None:
            t = ex.word_lis_table(args.n, args.q)
            return _emit_table(args, ["k", "cdf"], list(zip(t.support, t.values)))
        return _emit_value(args, "P(L<=k)", ex.word_lis_cdf(args.n, args.q, args.k),
                           {"n": args.n, "q": args.q, "k": args.k})
    if args.what == "geometric":
        if args.ell is None:
            vals = ex.geometric_lpp_cdf_table(args.p, args.q, args.xi, args.ell_max)
            return _emit_table(args, ["ell", "cdf"], [(i, float(v)) for i, v in enumerate(vals)])
        return _emit_value(args, "P(L<=ell)", float(ex.geometric_lpp_cdf(args.p, args.q, args.xi, args.ell)),
                           {"p": args.p, "q": args.q, "xi": args.xi, "ell": args.ell})
    if args.what == "walks":
        return _emit_value(args, "P(return)", ex.walk_return_probability(args.m, args.n),
                           {"m": args.m, "n": args.n})
    if args.what == "poissonized":
        return _emit_value(args, "P(L<=k)", float(ex.poissonized_plancherel_cdf(args.xi, k=args.k)),
                           {"xi": args.xi, "k": args.k})
    if args.what == "dim":
        lam = [int(v) for v in args.shape.split(",") if v.strip()]
        extra = {"shape": lam}
        if args.q is not None:
            extra["semistandard"] = dim_semistandard(lam, args.q)
        return _emit_value(args, "f^lambda", dim_standard(lam), extra)
    raise UsageError(f"unknown exact quantity {args.what!r}")


def _cmd_toeplitz(args) -> str:
    from . import kernels as kn

    if args.symbol == "gessel":
        sigma = kn.gessel_symbol(args.xi)
        scale = math.exp(-args.xi)
    elif args.symbol == "charlier":
        sigma = kn.charlier_symbol(args.xi, args.p)
        scale = math.exp(-args.p * args.xi)
    else:
        sigma = kn.meixner_symbol(args.xi, args.p, args.q)
        scale = (1 - args.xi) ** (args.p * args.q)
    val, diag = kn.toeplitz_det(sigma, args.n, return_diagnostics=True)
    return _emit_value(args, "det", scale * val, {"symbol": args.symbol, "n": args.n,
                                                  "diagnostics": to_jsonable(diag)})


def _cmd_fredholm(args) -> str:
    from . import kernels as kn

    K = kn.bessel_kernel(args.xi, form=args.form)
    val, diag = kn.discrete_fredholm_det(K, args.n, tol=args.tol, return_diagnostics=True)
    return _emit_value(args, "det", val, {"kernel": "bessel", "xi": args.xi, "s": args.n,
                                          "diagnostics": to_jsonable(diag)})


def _cmd_tw(args) -> str:
    from . import tracy_widom as tw

    if args.moments:
        m, s = tw.tw_moments("painleve" if args.method == "both" else args.method)
        return _emit_table(args, ["statistic", "value"], [("mean", m), ("std", s)])
    if args.tails:
        rep = tw.tail_checks()
        keys = ["right_ratio_at_5", "left_cubic_coefficient", "left_max_rel_deviation", "F_at_4"]
        return _emit_table(args, ["statistic", "value"], [(k, rep[k]) for k in keys])
    if args.grid:
        grid = _grid(args.grid)
        method = "painleve" if args.method == "both" else args.method
        t = tw.tw_table(grid, method)
        if args.format == "json":
            return dumps({"x": t.x, "F": t.F, "density": t.density, "method": t.method})
        return t.to_csv().rstrip("\n")
    if args.x is None:
        raise UsageError("tw needs --x, --grid, --moments or --tails")
    out = {}
    if args.method in ("fredholm", "both"):
        out["fredholm"] = tw.tw_cdf_fredholm(args.x, tol=min(args.tol, 1e-10))
    if args.method in ("painleve", "both"):
        out["painleve"] = tw.tw_cdf_painleve(args.x)
    if args.format == "json":
        return dumps({"x": args.x, **out})
    return _emit_table(args, ["method", "F"], list(out.items()))


def _cmd_gap(args) -> str:
    from . import kernels as kn

    if args.x is not None:
        hi = {"hermite": math.inf, "laguerre": math.inf, "jacobi": 1.0}[args.family]
        E = [(args.x, hi)]
    elif args.E:
        E = []
        for piece in args.E:
            lo, hi = piece.split(":")
            E.append((float(lo), float(hi)))
    else:
        raise UsageError("gap needs --x or --E")
    val, diag = kn.gap_probability(args.family, args.n, E, args.a, args.b, method=args.method,
                                   tol=args.tol, return_diagnostics=True)
    return _emit_value(args, "P(no eigenvalue in E)", val,
                       {"family": args.family, "n": args.n, "E": E, "diagnostics": to_jsonable(diag)})


def _cmd_simulate(args) -> str:
    from . import simulate as sm
    from .tracy_widom import default_table

    cfg = sm.RngConfig(args.seed, args.stream)
    params: dict = {}
    if args.model == "lis":
        vals = sm.lis_samples(args.n, args.samples, cfg)
        params = {"n": args.n}
    elif args.model == "word-lis":
        vals = sm.word_lis_samples(args.n, args.q, args.samples, cfg)
        params = {"n": args.n, "q": args.q}
    elif args.model == "lpp":
        vals = sm.lpp_samples(args.p, args.q, args.xi, args.samples, cfg)
        params = {"p": args.p, "q": args.q, "xi": args.xi}
    elif args.model == "gue-edge":
        vals = sm.gue_edge_samples(args.n, args.samples, cfg)
        params = {"n": args.n}
    elif args.model == "shape":
        dev = sm.shape_deviation(args.n, args.samples, cfg)
        return _emit_value(args, "shape_deviation", dev, {"n": args.n, "samples": args.samples, "seed": args.seed})
    else:
        raise UsageError(f"unknown model {args.model!r}")
    summary = sm.summarize(args.model, params, args.seed, vals)
    if args.model == "gue-edge":
        summary.statistics["ks_tracy_widom"] = sm.EmpiricalCdf(vals).ks_distance(default_table().cdf)
    if args.format == "csv":
        return sm.EmpiricalCdf(vals).to_csv().rstrip("\n")
    return summary.to_json()


def _cmd_residual(args) -> str:
    from . import integrable as ig

    if args.kind == "painleve":
        grid = _grid(args.grid) if args.grid else None
        if grid is None:
            raise UsageError("painleve residual needs --grid")
        rep = ig.painleve_residual(args.family, args.n, grid, args.a, args.b)
    else:
        E = []
        for piece in args.E or []:
            lo, hi = piece.split(":")
            E.append((float(lo), float(hi)))
        ctx = ig.TauContext.make(args.family, args.n, E or None, a=args.a, b=args.b)
        rep = ig.kp_residual(ctx) if args.kind == "kp" else ig.virasoro_residual(ctx, args.k)
    return rep.to_json()


def _cmd_check(args) -> str:
    from .checks import run_checks

    results = run_checks(args.suite)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results]
    args._failed = any(not ok for _, ok, _ in results)
    return "\n".join(lines)


# -- parser --------------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["text", "csv", "json"], default=None,
                   help="output format (default: text for single values, csv for tables)")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed for random streams (default 0)")
    p.add_argument("--tol", type=float, default=1e-10, help="numerical tolerance (default 1e-10)")
    p.add_argument("--grid", default=None, help='evaluation grid "a:b:step"')
    p.add_argument("--out", default=None, help="write output to FILE instead of standard output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="rmt-lab",
        description="Random permutations, random matrices, Tracy-Widom laws and integrable identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("exact", parents=[common],
                        help="exact finite-n laws from Young-diagram sums",
                        description="Exact laws: LIS of permutations and words, geometric last passage, "
                                    "non-intersecting walkers, dimension counts.")
    ex.add_argument("what", choices=["perm-lis", "word-lis", "geometric", "walks", "poissonized", "dim"])
    ex.add_argument("--n", type=int, default=None)
    ex.add_argument("--k", type=int, default=None)
    ex.add_argument("--q", type=int, default=None)
    ex.add_argument("--p", type=int, default=None)
    ex.add_argument("--m", type=int, default=None)
    ex.add_argument("--xi", type=float, default=None)
    ex.add_argument("--ell", type=int, default=None)
    ex.add_argument("--ell-max", type=int, default=20)
    ex.add_argument("--shape", default=None, help="partition as comma-separated parts")
    ex.set_defaults(func=_cmd_exact, table=False)

    tp = sub.add_parser("toeplitz", parents=[common],
                        help="Toeplitz determinants of the LIS generating symbols",
                        description="Normalised n x n Toeplitz determinant of exp(sqrt(xi)(z+1/z)) (gessel), "
                                    "exp(xi/z)(1+z)^p (charlier) or (1+sqrt(xi)z)^q(1+sqrt(xi)/z)^p (meixner); "
                                    "the normalisation makes each value a probability.")
    tp.add_argument("--symbol", choices=["gessel", "charlier", "meixner"], default="gessel")
    tp.add_argument("--xi", type=float, required=True)
    tp.add_argument("--n", type=int, required=True)
    tp.add_argument("--p", type=int, default=1)
    tp.add_argument("--q", type=int, default=1)
    tp.set_defaults(func=_cmd_toeplitz)

    fr = sub.add_parser("fredholm", parents=[common],
                        help="discrete Bessel-kernel Fredholm determinant",
                        description="det(I - K) for the discrete Bessel kernel restricted to {n, n+1, ...}.")
    fr.add_argument("--xi", type=float, required=True)
    fr.add_argument("--n", type=int, required=True)
    fr.add_argument("--form", choices=["sum", "cd"], default="sum")
    fr.set_defaults(func=_cmd_fredholm)

    tw = sub.add_parser("tw", parents=[common],
                        help="Tracy-Widom GUE edge distribution",
                        description="Largest-eigenvalue edge law by the Airy-kernel determinant (fredholm) "
                                    "or the Hastings-McLeod Painleve II solution (painleve).")
    tw.add_argument("--x", type=float, default=None)
    tw.add_argument("--method", choices=["fredholm", "painleve", "both"], default="painleve")
    tw.add_argument("--moments", action="store_true", help="mean and standard deviation")
    tw.add_argument("--tails", action="store_true", help="tail asymptotic checks")
    tw.set_defaults(func=_cmd_tw)

    gp = sub.add_parser("gap", parents=[common],
                        help="gap probabilities of Hermite/Laguerre/Jacobi ensembles",
                        description="Probability that no eigenvalue of the n-point ensemble lies in E.")
    gp.add_argument("--family", choices=["hermite", "laguerre", "jacobi"], default="hermite")
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--a", type=float, default=0.0)
    gp.add_argument("--b", type=float, default=0.0)
    gp.add_argument("--x", type=float, default=None, help="E = (x, right end of the support)")
    gp.add_argument("--E", action="append", default=None, help='interval "lo:hi" (repeatable)')
    gp.add_argument("--method", choices=["nystrom", "hankel", "both"], default="nystrom")
    gp.set_defaults(func=_cmd_gap)

    sm = sub.add_parser("simulate", parents=[common],
                        help="seeded Monte-Carlo samplers",
                        description="Monte-Carlo for LIS of permutations and words, geometric last passage, "
                                    "GUE edge, and the limit shape of RSK diagrams.")
    sm.add_argument("model", choices=["lis", "word-lis", "lpp", "gue-edge", "shape"])
    sm.add_argument("--n", type=int, default=10)
    sm.add_argument("--q", type=int, default=2)
    sm.add_argument("--p", type=int, default=2)
    sm.add_argument("--xi", type=float, default=0.5)
    sm.add_argument("--samples", type=int, default=1000)
    sm.add_argument("--stream", type=int, default=0)
    sm.set_defaults(func=_cmd_simulate)

    rs = sub.add_parser("residual", parents=[common],
                        help="KP, Virasoro and Painleve residuals of tau-functions",
                        description="Residuals of the KP equation and boundary Virasoro constraints for "
                                    "deformed moment determinants, and of the largest-eigenvalue ODEs.")
    rs.add_argument("kind", choices=["kp", "virasoro", "painleve"])
    rs.add_argument("--family", choices=["hermite", "laguerre", "jacobi"], default="hermite")
    rs.add_argument("--n", type=int, default=2)
    rs.add_argument("--a", type=float, default=0.0)
    rs.add_argument("--b", type=float, default=0.0)
    rs.add_argument("--k", type=int, choices=[-1, 0, 1], default=-1)
    rs.add_argument("--E", action="append", default=None, help='interval "lo:hi" (repeatable)')
    rs.set_defaults(func=_cmd_residual)

    ck = sub.add_parser("check", parents=[common],
                        help="run invariant suites; nonzero exit on failure",
                        description="Quick invariant checks across all modules.")
    ck.add_argument("--suite", choices=["all", "exact", "rsk", "kernels", "tw", "integrable", "simulate"],
                    default="all")
    ck.set_defaults(func=_cmd_check)
    return parser


_REQUIRED = {
    ("exact", "perm-lis"): ["n"],
    ("exact", "word-lis"): ["n", "q"],
    ("exact", "geometric"): ["p", "q", "xi"],
    ("exact", "walks"): ["m", "n"],
    ("exact", "poissonized"): ["xi", "k"],
    ("exact", "dim"): ["shape"],
}


def _resolved_config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",) and not k.startswith("_")}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    key = (args.command, getattr(args, "what", None))
    missing = [f"--{k.replace('_', '-')}" for k in _REQUIRED.get(key, []) if getattr(args, k) is None]
    if missing:
        parser.error(f"{args.command} {key[1]} requires {', '.join(missing)}")
    if args.format is None:
        args.format = "text"
    print(json.dumps(to_jsonable(_resolved_config(args)), sort_keys=True), file=sys.stderr)
    try:
        out = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except NumericalError as exc:
        print(dumps({"error": str(exc), "diagnostics": exc.diagnostics}))
        return 3
    except (ValueError, TypeError) as exc:
        parser.error(str(exc))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 1 if getattr(args, "_failed", False) else 0


if __name__ == "__main__":
    sys.exit(main())
