"""Command line front end: trace, hull, classify, verify, holder, export.

Complex flags are "re,im" pairs.  Every output file gets a sibling
<name>.manifest.json carrying the resolved configuration and its hash;
outputs are byte-identical for identical configurations regardless of
thread count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from ._backend import backend_name
from .drivers import Driver, holder_half_norm
from .engine import DEFAULT_OPTS, SolverOptions
from .errors import LoewnerError
from .hulls import Grid, left_hull_field, right_hull_field, trace_two_sided_curve
from .io import (
    curve_trace_csv,
    hull_field_csv,
    hull_field_pgm,
    hull_field_svg,
    read_curve_trace_csv,
    trace_svg,
    write_manifest,
)
from .linear import classify, holder_at_tstar, omega0_events, trace_pioneer_curve
from .verify import SYMMETRY_SUITE, run_counterexample, run_suite


def _complex_arg(s: str) -> complex:
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im pair, got {s!r}")
    return complex(float(parts[0]), float(parts[1]))


def _build_driver(args) -> Driver:
    if getattr(args, "driver_json", None):
        spec = args.driver_json
        if os.path.exists(spec):
            spec = open(spec).read()
        return Driver.from_json(json.loads(spec))
    kind = args.driver
    if kind == "linear":
        drv = Driver.linear(args.c)
    elif kind == "constant":
        drv = Driver.constant(args.x)
    elif kind == "sqrt":
        drv = Driver.sqrt_forward(args.a)
    elif kind == "counterexample":
        drv = Driver.counterexample()
    else:
        raise argparse.ArgumentTypeError(f"unknown driver {kind!r}")
    for tf in json.loads(getattr(args, "transforms", None) or "[]"):
        name = tf["kind"]
        arg = tf.get("t0", tf.get("a", tf.get("T")))
        drv = drv.transform(name, arg)
    return drv


def _solver_opts(args) -> SolverOptions:
    kw = {}
    for name in ("rel_tol", "abs_tol", "blow_up_eps", "max_step"):
        v = getattr(args, name, None)
        if v is not None:
            kw[name] = v
    return DEFAULT_OPTS.replace(**kw) if kw else DEFAULT_OPTS


def _config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _add_driver_flags(p):
    p.add_argument("--driver", default="linear",
                   choices=["linear", "constant", "sqrt", "counterexample"])
    p.add_argument("--c", type=_complex_arg, default=1 + 1j, help="linear coefficient re,im")
    p.add_argument("--x", type=_complex_arg, default=0j, help="constant value re,im")
    p.add_argument("--a", type=float, default=1.0, help="sqrt driver coefficient")
    p.add_argument("--driver-json", help="driver spec as JSON text or a path to one")
    p.add_argument("--transforms", help='JSON list, e.g. [{"kind":"scaled","a":2}]')


def _add_solver_flags(p):
    p.add_argument("--rel-tol", type=float, dest="rel_tol")
    p.add_argument("--abs-tol", type=float, dest="abs_tol")
    p.add_argument("--blow-up-eps", type=float, dest="blow_up_eps")
    p.add_argument("--max-step", type=float, dest="max_step")
    p.add_argument("--threads", type=int, help="cap raster parallelism (or LOEWNER_THREADS)")


def _apply_threads(args):
    if getattr(args, "threads", None):
        os.environ["LOEWNER_THREADS"] = str(args.threads)


def cmd_trace(args) -> int:
    drv = _build_driver(args)
    opts = _solver_opts(args)
    out = args.out
    is_plain_linear = drv.kind == "linear" and not drv.transforms
    rec = classify(drv.params[0]) if is_plain_linear else None
    if rec is not None and rec.region in ("Omega+", "Omega-", "Omega0"):
        trace = trace_pioneer_curve(drv.params[0], args.t_max, args.dt)
    else:
        trace = trace_two_sided_curve(drv, args.t_max, args.dt, opts=opts)
    curve_trace_csv(trace, out + ".csv")
    write_manifest(out + ".csv", _config(args), __version__)
    made = [out + ".csv"]
    if rec is not None:
        with open(out + ".phase.json", "w") as fh:
            json.dump(rec.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        made.append(out + ".phase.json")
        if rec.region == "Omega0" and args.t_max >= 0.999 * rec.t_star:
            ev = omega0_events(drv.params[0], trace)
            with open(out + ".events.json", "w") as fh:
                json.dump(ev.to_json(), fh, indent=2, sort_keys=True)
                fh.write("\n")
            made.append(out + ".events.json")
    if args.svg:
        trace_svg(trace, out + ".svg")
        write_manifest(out + ".svg", _config(args), __version__)
        made.append(out + ".svg")
    print("\n".join(made))
    return 0


def cmd_hull(args) -> int:
    _apply_threads(args)
    drv = _build_driver(args)
    opts = _solver_opts(args) if any(
        getattr(args, k, None) is not None for k in ("rel_tol", "abs_tol", "blow_up_eps", "max_step")
    ) else None
    if args.grid:
        vals = args.grid.split(",")
        grid = Grid(float(vals[0]), float(vals[1]), float(vals[2]), float(vals[3]),
                    int(vals[4]), int(vals[5]))
    else:
        grid = Grid.for_driver(drv if args.side == "left" else drv.dual_rotated(args.t),
                               args.t, args.resolution)
        if args.side == "right":
            grid = Grid(grid.y0, grid.y1, -grid.x1, -grid.x0, grid.ny, grid.nx)
    kw = {"opts": opts} if opts is not None else {}
    if args.side == "left":
        f = left_hull_field(drv, args.t, grid, **kw)
    else:
        f = right_hull_field(drv, args.t, grid, **kw)
    out = args.out
    hull_field_csv(f, out + ".csv")
    hull_field_pgm(f, out + ".pgm")
    write_manifest(out + ".csv", _config(args), __version__)
    made = [out + ".csv", out + ".pgm"]
    if args.svg:
        hull_field_svg(f, out + ".svg")
        made.append(out + ".svg")
    if f.n_unresolved:
        print(f"warning: {f.n_unresolved} unresolved cells", file=sys.stderr)
    print("\n".join(made))
    return 0


def cmd_classify(args) -> int:
    rec = classify(args.c)
    text = json.dumps(rec.to_json(), indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        write_manifest(args.out, _config(args), __version__)
    return 0


def cmd_holder(args) -> int:
    drv = _build_driver(args)
    est = holder_half_norm(drv, args.t_max, args.grid_size)
    payload = {"t_max": est.t_max, "grid_size": est.grid_size, "value": est.value}
    if drv.kind == "linear" and not drv.transforms:
        rec = classify(drv.params[0])
        payload["region"] = rec.region
        if rec.region == "Omega0":
            target = holder_at_tstar(drv.params[0])
            payload["holder_at_tstar"] = target
            payload["two_sqrt_pi"] = 2.0 * math.sqrt(math.pi)
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        write_manifest(args.out, _config(args), __version__)
    return 0


def cmd_verify(args) -> int:
    _apply_threads(args)
    drv = _build_driver(args)
    names = args.checks.split(",") if args.checks else list(SYMMETRY_SUITE)
    if args.suite == "counterexample":
        reports = [run_counterexample(resolution=args.resolution)]
    else:
        reports = run_suite(drv, names, T=args.t_max, seed=args.seed)
    for rep in reports:
        print(rep.summary())
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([r.to_json() for r in reports], fh, indent=2, sort_keys=True)
            fh.write("\n")
        write_manifest(args.out, _config(args), __version__)
    return 0 if all(r.passed for r in reports) else 1


def cmd_export(args) -> int:
    if args.trace:
        trace = read_curve_trace_csv(args.trace)
        trace_svg(trace, args.svg)
        write_manifest(args.svg, _config(args), __version__)
        print(args.svg)
        return 0
    raise SystemExit("export needs --trace")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="loewner",
        description=f"complex-driven Loewner evolutions (backend: {backend_name()})",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="two-sided curve trace (pioneer or frontier)")
    _add_driver_flags(p)
    _add_solver_flags(p)
    p.add_argument("--t-max", type=float, required=True, dest="t_max")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--out", default="trace")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("hull", help="left/right hull raster")
    _add_driver_flags(p)
    _add_solver_flags(p)
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--grid", help="x0,x1,y0,y1,nx,ny")
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--out", default="hull")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("classify", help="phase diagram record for c")
    p.add_argument("--c", type=_complex_arg, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("holder", help="Hoelder-1/2 norm estimate")
    _add_driver_flags(p)
    p.add_argument("--t-max", type=float, required=True, dest="t_max")
    p.add_argument("--grid-size", type=int, default=1024, dest="grid_size")
    p.add_argument("--out")
    p.set_defaults(func=cmd_holder)

    p = sub.add_parser("verify", help="structural identity checks")
    _add_driver_flags(p)
    _add_solver_flags(p)
    p.add_argument("--suite", default="symmetries", choices=["symmetries", "counterexample"])
    p.add_argument("--checks", help="comma list overriding the suite")
    p.add_argument("--t-max", type=float, default=1.0, dest="t_max")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="render saved CSV artifacts to SVG")
    p.add_argument("--trace", help="curve trace CSV")
    p.add_argument("--svg", default="out.svg")
    p.set_defaults(func=cmd_export)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except LoewnerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
