"""Command-line front end.

Machine-readable JSON lines go to stdout (floats carry 17 significant
digits so every value round-trips); a short human summary with timing goes
to stderr.  Exit codes: 0 the check holds / command succeeded, 1 a class
check failed (witness included in the results), 2 usage or domain error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import __version__, classify, constants, expr, ode, verify
from .errors import ExprSyntaxError, SchwarzianLabError
from .grids import GridSpec

DEFAULT_GRID = "0.001:0.99:64:256"


# --- serialization ---------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj) -> str:
    """JSON with deterministic key order and 17-significant-digit floats."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --- argument plumbing -------------------------------------------------------

def _parse_param(text: str) -> tuple[str, complex]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"parameter {text!r} is not name=value")
    fn = expr.parse(value)
    if fn.params or _mentions_z(fn.root):
        raise argparse.ArgumentTypeError(f"parameter value {value!r} must be constant")
    return name.strip(), expr.eval_jet(fn, 0.0, {}).d0


def _mentions_z(node) -> bool:
    if isinstance(node, expr.Var):
        return True
    for attr in ("arg", "lhs", "rhs", "base"):
        child = getattr(node, attr, None)
        if child is not None and _mentions_z(child):
            return True
    return False


def _env_from(args) -> dict[str, complex]:
    return dict(args.param or [])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schwarzian-lab",
        description="Schwarzian-derivative bounds, disk-class checks, and "
                    "radial ODE constructions.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="critical bounds and admissible parameters")
    p.add_argument("--alpha", type=float, help="convexity order in [0, 1)")
    p.add_argument("--beta", type=str, help="band parameter >= 1.5, or 'inf'")
    p.add_argument("--eta", type=float, help="second-coefficient bound (with --beta)")
    p.set_defaults(handler=cmd_constants)

    p = sub.add_parser("classify", help="disk-grid membership check")
    p.add_argument("--function", required=True, help="expression in z (see README grammar)")
    p.add_argument("--param", action="append", type=_parse_param, metavar="NAME=VALUE")
    p.add_argument("--class", dest="klass", required=True,
                   choices=["merom-convex", "merom-starlike", "convex",
                            "starlike", "cbeta", "kaplan"])
    p.add_argument("--order", type=float, default=0.0, help="order for the order classes")
    p.add_argument("--beta", type=str, help="band parameter for --class cbeta")
    p.add_argument("--grid", type=str, default=DEFAULT_GRID, metavar="RMIN:RMAX:NR:NTHETA")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("witness", help="sharpness witness for an inadmissible bound")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--c", type=float, required=True, help="Schwarzian half-bound > c_alpha")
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("ode", help="integrate w'' + p w = 0 along a ray, dump CSV")
    p.add_argument("--p-const", type=float, help="constant coefficient value")
    p.add_argument("--p-expr", type=str, help="coefficient expression in z")
    p.add_argument("--param", action="append", type=_parse_param, metavar="NAME=VALUE")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--rmax", type=float, default=0.95)
    p.add_argument("--steps", type=int, default=1024)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(handler=cmd_ode)

    p = sub.add_parser("region", help="sweep the admissible (eta, delta_max) boundary")
    p.add_argument("--beta", type=str, required=True)
    p.add_argument("--eta-steps", type=int, default=40)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(handler=cmd_region)

    p = sub.add_parser("verify-suite", help="run the acceptance battery")
    tier = p.add_mutually_exclusive_group()
    tier.add_argument("--fast", action="store_true", default=True)
    tier.add_argument("--full", action="store_true")
    p.set_defaults(handler=cmd_verify_suite)

    p = sub.add_parser("report", help="render figures and tables to a directory")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--dpi", type=int, default=150)
    p.set_defaults(handler=cmd_report)

    return parser


# --- handlers: return (exit_code, inputs, results, extra_stdout_lines) --------

def cmd_constants(args):
    if (args.alpha is None) == (args.beta is None):
        raise SchwarzianLabError("give exactly one of --alpha or --beta")
    if args.eta is not None and args.beta is None:
        raise SchwarzianLabError("--eta needs --beta")
    if args.alpha is not None:
        inputs = {"alpha": args.alpha}
        results = {"alpha": args.alpha, "c_alpha": constants.c_alpha(args.alpha)}
        return 0, inputs, results, []
    beta = constants.parse_beta(args.beta)
    phi, psi = constants.phi_psi(beta)
    inputs = {"beta": args.beta}
    results = {"beta": "inf" if math.isinf(beta) else beta, "phi": phi, "psi": psi}
    if args.eta is not None:
        inputs["eta"] = args.eta
        results["delta_max"] = constants.delta_max(args.eta, beta)
    return 0, inputs, results, []


def cmd_classify(args):
    env = _env_from(args)
    fn = expr.parse(args.function)
    grid = GridSpec.parse(args.grid)
    inputs = {
        "function": args.function,
        "params": {k: [v.real, v.imag] for k, v in env.items()},
        "class": args.klass,
        "grid": args.grid,
    }
    if args.klass == "kaplan":
        n_theta = max(grid.n_angular, 256)
        ok, prof = classify.check_kaplan(fn, env, grid.r_max, n_theta)
        results = {
            "holds": ok,
            "min_arc": classify.min_arc_increment(prof),
            "full_turn": prof.full_turn,
            "r": grid.r_max,
            "n_theta": n_theta,
        }
        return (0 if ok else 1), inputs, results, []
    if args.klass == "cbeta":
        if args.beta is None:
            raise SchwarzianLabError("--class cbeta needs --beta")
        beta = constants.parse_beta(args.beta)
        inputs["beta"] = args.beta
        verdict = classify.check_cbeta(fn, env, beta, grid)
    elif args.klass == "merom-convex":
        inputs["order"] = args.order
        verdict = classify.check_merom_convex(fn, env, args.order, grid)
    elif args.klass == "merom-starlike":
        inputs["order"] = args.order
        verdict = classify.check_merom_starlike(fn, env, args.order, grid)
    elif args.klass == "convex":
        inputs["order"] = args.order
        verdict = classify.check_convex_order(fn, env, args.order, grid)
    else:
        inputs["order"] = args.order
        verdict = classify.check_starlike_order(fn, env, args.order, grid)
    return (0 if verdict.holds else 1), inputs, verdict.to_json_dict(), []


def cmd_witness(args):
    x0 = ode.sharpness_witness(args.alpha, args.c)
    j = expr.eval_jet(expr.parse("sqrt(c)*cot(sqrt(c)*z)"), complex(x0), {"c": args.c})
    margin = -(1.0 + (x0 * j.d2 / j.d1).real) - args.alpha
    inputs = {"alpha": args.alpha, "c": args.c}
    results = {"x0": x0, "violated_margin": margin,
               "c_alpha": constants.c_alpha(args.alpha)}
    return 0, inputs, results, []


def cmd_ode(args):
    if (args.p_const is None) == (args.p_expr is None):
        raise SchwarzianLabError("give exactly one of --p-const or --p-expr")
    if args.p_const is not None:
        p = ode.PotentialP.constant(args.p_const)
        p_text = repr(args.p_const)
    else:
        p = ode.PotentialP.parse(args.p_expr, _env_from(args))
        p_text = args.p_expr
    sol = ode.solve_ray(p, args.theta, args.rmax, args.steps)
    ode.write_ray_csv(sol, args.out)
    inputs = {"p": p_text, "theta": args.theta, "rmax": args.rmax, "steps": args.steps}
    results = {"out": args.out, "nodes": len(sol.rho),
               "wronskian_drift": sol.wronskian_drift}
    return 0, inputs, results, []


def cmd_region(args):
    import csv as csv_mod

    beta = constants.parse_beta(args.beta)
    phi, _ = constants.phi_psi(beta)
    n = args.eta_steps
    if n < 2:
        raise SchwarzianLabError("--eta-steps must be at least 2")
    etas = [phi * k / (n - 1) for k in range(n - 1)] + [phi * (1.0 - 1e-9)]
    rows = [(eta, constants.delta_max(eta, beta)) for eta in etas]
    with open(args.out, "w", newline="") as fh:
        writer = csv_mod.writer(fh)
        writer.writerow(["eta", "delta_max"])
        for eta, d in rows:
            writer.writerow([repr(eta), repr(d)])
    inputs = {"beta": args.beta, "eta_steps": n}
    results = {"out": args.out, "rows": len(rows), "phi": phi,
               "first_delta": rows[0][1], "last_delta": rows[-1][1]}
    return 0, inputs, results, []


def cmd_verify_suite(args):
    full = bool(args.full)
    results = verify.run_checks(full=full)
    lines = [dumps(r.to_json_dict()) for r in results]
    failed = [r.name for r in results if not r.passed]
    summary = {
        "mode": "full" if full else "fast",
        "passed": sum(r.passed for r in results),
        "failed": failed,
    }
    return (0 if not failed else 1), {"mode": summary["mode"]}, summary, lines


def cmd_report(args):
    from . import report  # matplotlib import deferred to the one command using it

    paths = report.write_report(args.out_dir, dpi=args.dpi)
    inputs = {"out_dir": args.out_dir, "dpi": args.dpi}
    return 0, inputs, {"files": paths}, []


# --- entry point -----------------------------------------------------------------

def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        code, inputs, results, extra_lines = args.handler(args)
    except ExprSyntaxError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SchwarzianLabError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 3
    elapsed_ms = int(round(1000.0 * (time.monotonic() - t0)))
    for line in extra_lines:
        print(line)
    print(dumps({
        "command": args.command,
        "inputs": inputs,
        "results": results,
        "version": __version__,
    }))
    print(f"{args.command}: exit {code}, {elapsed_ms} ms", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
