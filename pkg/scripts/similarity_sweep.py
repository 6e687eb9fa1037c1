"""Tabulate f(r/h) = a/h for h = 1 and write it as CSV (plot-ready)."""
import argparse
import sys

import numpy as np

from nosecone.cli import SWEEP_COLUMNS, write_csv
from nosecone.similarity import SweepSettings, sweep_f

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--rmin", type=float, default=0.2)
parser.add_argument("--rmax", type=float, default=2.0)
parser.add_argument("--n", type=int, default=10)
parser.add_argument("--locator", default="mesh")
parser.add_argument("--out", default=None)
args = parser.parse_args()

grid = np.linspace(args.rmin, args.rmax, args.n)
table = sweep_f(grid, 1.0, SweepSettings(locator=args.locator))
rows = [
    {"r": row.r, "h": row.h, "r_over_h": row.r_over_h, "a": row.a, "f": row.f_value, "slope_at_r": row.terminal_slope,
     "k_star": row.k_star, "parabola_0p3r2": row.parabola(), "status": row.status}
    for row in table.rows
]
# least-squares c in f ~ c r^2, for comparison with the 0.3 r^2 guide curve
ok = [r for r in rows if r["status"] == "ok"]
r2 = np.array([r["r"] ** 2 for r in ok])
c = float(np.dot(r2, [r["f"] for r in ok]) / np.dot(r2, r2))
print(f"best-fit f ~ {c:.4f} r^2", file=sys.stderr)
if args.out:
    with open(args.out, "w", newline="") as fh:
        write_csv(SWEEP_COLUMNS, rows, fh)
else:
    write_csv(SWEEP_COLUMNS, rows, sys.stdout)
