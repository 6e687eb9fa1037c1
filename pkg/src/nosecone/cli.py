"""Command-line interface.

    nosecone solve      --r 1 --h 1 --astar 0.5 --step 0.001 --method rk4
    nosecone shoot      --root secant --seeds 0.5 0.3
    nosecone drag-table [--format json]
    nosecone sweep      [--r-grid 0.2,0.4,...] [--h 1]
    nosecone compare

Exit status: 0 success, 2 usage or validation error, 3 numerical failure.
Every report echoes the full run configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict

import numpy as np

from .errors import NumericalError, ValidationError
from .newton_model import (
    NoseConeGeometry,
    ShapeKind,
    drag_reduced,
    frustum_optimize,
    make_shape,
    numerical_shape,
)
from .ode_core import METHODS
from .shooting import DEFAULT_STEP as SHOOT_STEP, shoot_bisection, shoot_secant
from .similarity import DEFAULT_R_GRID, SweepSettings, sweep_f
from .transform_method import LOCATORS, solve_newton_fbp

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3


class UsageError(Exception):
    pass


def fmt(value):
    """15 significant digits for text reports."""
    if isinstance(value, float):
        return f"{value:.15g}"
    return "" if value is None else str(value)


def csv_cell(value):
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def write_csv(columns, rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([csv_cell(row.get(c)) for c in columns])


def read_csv(text):
    """Parse a table written by :func:`write_csv`; numeric cells become floats."""
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    rows = []
    for record in reader:
        row = {}
        for c, cell in zip(columns, record):
            if cell == "":
                row[c] = None
                continue
            try:
                row[c] = float(cell)
            except ValueError:
                row[c] = cell
        rows.append(row)
    return columns, rows


def _to_jsonable(obj):
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    return obj


def config_of(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    return _to_jsonable(cfg)


def emit(args, columns, rows, stream, title=None):
    """Write one table in the requested format, with the config echoed."""
    config = config_of(args)
    if args.format == "json":
        key = "result" if len(rows) == 1 and args.command == "solve" else "rows"
        payload = {"config": config, key: rows[0] if key == "result" else rows}
        json.dump(_to_jsonable(payload), stream, indent=2)
        stream.write("\n")
    elif args.format == "csv":
        write_csv(columns, rows, stream)
    else:
        stream.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        if title:
            stream.write(f"# {title}\n")
        if len(rows) == 1 and args.command in ("solve", "shoot"):
            width = max(len(c) for c in columns)
            for c in columns:
                stream.write(f"{c:<{width}}  {fmt(rows[0].get(c))}\n")
        else:
            table = [[c for c in columns]] + [[fmt(r.get(c)) for c in columns] for r in rows]
            widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
            for line in table:
                stream.write("  ".join(cell.rjust(w) for cell, w in zip(line, widths)) + "\n")


def _geometry(args):
    return NoseConeGeometry(args.r, args.h)


def _check_common(args):
    if not args.astar > 0:
        raise ValidationError(f"a* must be > 0 (got {args.astar}); the auxiliary equation is singular at x* = 0")
    if not args.step > 0:
        raise ValidationError(f"step must be > 0 (got {args.step})")


def cmd_solve(args, out):
    _check_common(args)
    geometry = _geometry(args)
    tm = solve_newton_fbp(geometry, args.astar, args.step, args.method, args.locator)
    k = drag_reduced(numerical_shape(tm.solution, tm.free_boundary), geometry).k_star
    row = {
        "a": tm.free_boundary,
        "lambda": tm.lam,
        "terminal_slope": tm.terminal_slope,
        "last_step": tm.last_step,
        "r_star": tm.r_star,
        "end_mismatch": tm.end_mismatch,
        "k_star": k,
        "steps": tm.n_steps,
        "rhs_evals": tm.rhs_evals,
    }
    emit(args, list(row), [row], out, title="non-iterative transformation method")
    if args.profile:
        sol, aux = tm.solution, tm.auxiliary
        rows = [
            {"x": float(sol.abscissae[i]), "y": float(sol.values[i]), "dydx": float(sol.derivatives[i]),
             "x_star": float(aux.abscissae[i]), "y_star": float(aux.values[i]),
             "dydx_star": float(aux.derivatives[i])}
            for i in range(len(sol))
        ]
        with open(args.profile, "w", newline="") as fh:
            write_csv(["x", "y", "dydx", "x_star", "y_star", "dydx_star"], rows, fh)
    return EXIT_OK


def _shoot(args, geometry, root, step):
    if root == "bisection":
        return shoot_bisection(geometry, args.bracket[0], args.bracket[1], step, args.method)
    return shoot_secant(geometry, args.seeds[0], args.seeds[1], step, args.method)


def cmd_shoot(args, out):
    geometry = _geometry(args)
    res = _shoot(args, geometry, args.root, args.shoot_step)
    row = {
        "method": res.method,
        "a": res.free_boundary,
        "terminal_slope": res.terminal_slope,
        "iterations": res.iterations,
        "evaluations": res.evaluations,
        "rhs_evals": res.rhs_evals,
        "converged": res.converged,
    }
    emit(args, list(row), [row], out, title="shooting baseline")
    return EXIT_OK


def compare_rows(args):
    geometry = _geometry(args)
    rows = []
    t0 = time.perf_counter()
    tm = solve_newton_fbp(geometry, args.astar, args.step, args.method, args.locator)
    rows.append({"method": "non-ITM", "a": tm.free_boundary, "terminal_slope": tm.terminal_slope,
                 "iterations": 1, "evaluations": 1, "rhs_evals": tm.rhs_evals,
                 "wall_time_s": time.perf_counter() - t0})
    for root in ("secant", "bisection"):
        t0 = time.perf_counter()
        res = _shoot(args, geometry, root, args.step)
        rows.append({"method": f"shooting-{root}", "a": res.free_boundary,
                     "terminal_slope": res.terminal_slope, "iterations": res.iterations,
                     "evaluations": res.evaluations, "rhs_evals": res.rhs_evals,
                     "wall_time_s": time.perf_counter() - t0})
    for row in rows:
        row["rhs_ratio_vs_non_itm"] = row["rhs_evals"] / tm.rhs_evals
    return rows


def cmd_compare(args, out):
    _check_common(args)
    rows = compare_rows(args)
    columns = ["method", "a", "terminal_slope", "iterations", "evaluations", "rhs_evals",
               "rhs_ratio_vs_non_itm", "wall_time_s"]
    emit(args, columns, rows, out, title="non-ITM vs shooting at equal step (wall time informative only)")
    return EXIT_OK


def drag_rows(args):
    geometry = _geometry(args)
    rows = []

    def record(name, thunk):
        try:
            k = thunk()
            rows.append({"shape": name, "k_star": k, "k_star_4dp": f"{k:.4f}", "status": "ok"})
        except ValidationError as exc:
            rows.append({"shape": name, "k_star": None, "k_star_4dp": None, "status": f"{type(exc).__name__}: {exc}"})

    for name, kind in (("hemisphere", ShapeKind.HEMISPHERE), ("pointed_cone", ShapeKind.POINTED_CONE),
                       ("paraboloid", ShapeKind.PARABOLOID)):
        record(name, lambda kind=kind: drag_reduced(make_shape(kind, geometry), geometry, args.quad_step).k_star)
    record("optimal_frustum", lambda: frustum_optimize(geometry)[1])

    def newton():
        tm = solve_newton_fbp(geometry, args.astar, args.step, args.method, "refine")
        return drag_reduced(numerical_shape(tm.solution, tm.free_boundary), geometry).k_star

    record("newton_optimal", newton)
    return rows


def cmd_drag_table(args, out):
    _check_common(args)
    if not args.quad_step > 0:
        raise ValidationError("quadrature step must be > 0")
    rows = drag_rows(args)
    cols = ["shape", "k_star", "status"] if args.format != "text" else ["shape", "k_star_4dp", "status"]
    emit(args, cols, rows, out, title=f"reduced drag coefficient k* at r={args.r}, h={args.h}")
    return EXIT_OK


def _parse_grid(text):
    if text is None:
        return list(DEFAULT_R_GRID)
    parts = [p for p in text.replace(" ", ",").split(",") if p]
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ValidationError(f"bad --r-grid entry: {exc}") from exc


def sweep_rows(args):
    grid = _parse_grid(args.r_grid)
    if not grid:
        raise ValidationError("sweep grid is empty")
    if any(not r > 0 for r in grid) or not args.h > 0:
        raise ValidationError("sweep needs r > 0 and h > 0")
    settings = SweepSettings(args.astar, args.step, args.method, args.locator)
    table = sweep_f(grid, args.h, settings)
    return [
        {"r": row.r, "h": row.h, "r_over_h": row.r_over_h, "a": row.a, "f": row.f_value,
         "slope_at_r": row.terminal_slope, "k_star": row.k_star, "parabola_0p3r2": row.parabola(),
         "status": row.status}
        for row in table.rows
    ]


SWEEP_COLUMNS = ["r", "h", "r_over_h", "a", "f", "slope_at_r", "k_star", "parabola_0p3r2", "status"]


def cmd_sweep(args, out):
    _check_common(args)
    rows = sweep_rows(args)
    emit(args, SWEEP_COLUMNS, rows, out, title="similarity function f(r/h) = a/h")
    if not any(r["status"] == "ok" for r in rows):
        return EXIT_NUMERICAL
    return EXIT_OK


def _method(text):
    key = text.upper()
    if key not in METHODS:
        raise argparse.ArgumentTypeError(f"method must be one of {[m.lower() for m in METHODS]}")
    return key


def build_parser():
    parser = argparse.ArgumentParser(prog="nosecone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, step=1e-3):
        p.add_argument("--r", type=float, default=1.0, help="nose radius")
        p.add_argument("--h", type=float, default=1.0, help="nose height")
        p.add_argument("--astar", type=float, default=0.5, help="auxiliary tip radius a* > 0")
        p.add_argument("--step", type=float, default=step, help="uniform integration step")
        p.add_argument("--method", type=_method, default="RK4", help="rk2, rk4 or rk6")
        p.add_argument("--locator", choices=LOCATORS, default="mesh", help="final-step rule")
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    def roots(p):
        p.add_argument("--bracket", type=float, nargs=2, default=(0.3, 0.5), metavar=("LO", "HI"))
        p.add_argument("--seeds", type=float, nargs=2, default=(0.5, 0.3), metavar=("A0", "A1"))

    p = sub.add_parser("solve", help="non-iterative transformation method")
    common(p)
    p.add_argument("--profile", default=None, help="write the profile as CSV to this path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("shoot", help="iterative shooting baseline")
    common(p)
    roots(p)
    p.add_argument("--root", choices=("bisection", "secant"), default="secant")
    p.add_argument("--shoot-step", type=float, default=SHOOT_STEP)
    p.set_defaults(func=cmd_shoot)

    p = sub.add_parser("drag-table", help="k* for the classical shapes")
    common(p)
    p.add_argument("--quad-step", type=float, default=1e-4)
    p.set_defaults(func=cmd_drag_table)

    p = sub.add_parser("sweep", help="similarity function f(r/h)")
    common(p)
    p.add_argument("--r-grid", default=None, help="comma-separated r values (default 0.2,...,2.0)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="non-ITM against both shooting variants")
    common(p)
    roots(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        if args.out:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
