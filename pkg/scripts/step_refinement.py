"""How the free boundary depends on the step and on the final-step rule.

The mesh rule stays O(step) away from the converged value; chord and refine
converge to it. Shooting at a fine step is printed as an independent check.
"""
import argparse

from nosecone.newton_model import NoseConeGeometry
from nosecone.shooting import shoot_secant
from nosecone.transform_method import LOCATORS, solve_newton_fbp

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--method", default="RK4")
parser.add_argument("--astar", type=float, default=0.5)
args = parser.parse_args()

unit = NoseConeGeometry(1.0, 1.0)
steps = [2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4]
print(f"{'step':>8} " + " ".join(f"{'a (' + loc + ')':>20}" for loc in LOCATORS) + f" {'last step (mesh)':>18}")
for step in steps:
    results = [solve_newton_fbp(unit, args.astar, step, args.method, loc) for loc in LOCATORS]
    print(f"{step:8.0e} " + " ".join(f"{r.a:20.15f}" for r in results) + f" {results[0].last_step:18.6e}")
ref = shoot_secant(unit, 0.5, 0.3, step=2e-5)
print(f"\nshooting (secant, step 2e-5): a = {ref.a:.12f}")
