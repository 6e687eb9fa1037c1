"""Print the drag-coefficient table and the transformation-method table at r = h = 1."""
import math

from nosecone.newton_model import NoseConeGeometry, drag_reduced, frustum_optimize, make_shape, numerical_shape
from nosecone.shooting import shoot_bisection, shoot_secant
from nosecone.transform_method import solve_newton_fbp

unit = NoseConeGeometry(1.0, 1.0)

print("reduced drag coefficient k*")
for kind in ("hemisphere", "pointed_cone", "paraboloid"):
    print(f"  {kind:<18} {drag_reduced(make_shape(kind, unit), unit, 1e-4).k_star:.4f}")
a_opt, k_opt = frustum_optimize(unit)
print(f"  {'optimal frustum':<18} {k_opt:.4f}   (tip a = {a_opt:.6f}, slope = {1 / (1 - a_opt):.6f})")
tm = solve_newton_fbp(unit, 0.5, 1e-3, "RK4", "refine")
print(f"  {'newton optimal':<18} {drag_reduced(numerical_shape(tm.solution, tm.a), unit).k_star:.4f}")
print(f"  paraboloid exact ln5/4 = {math.log(5) / 4:.6f}")

print("\ntransformation method, a* = 0.5, step 1e-3")
print(f"  {'method':<6} {'locator':<7} {'dy/dx(r)':>18} {'a':>18} {'last step':>12}")
for locator in ("mesh", "refine"):
    for method in ("RK2", "RK4", "RK6"):
        res = solve_newton_fbp(unit, 0.5, 1e-3, method, locator)
        print(f"  {method:<6} {locator:<7} {res.terminal_slope:18.15f} {res.a:18.15f} {res.last_step:12.4e}")

print("\nshooting, RK4 step 1e-4")
for res in (shoot_bisection(unit, 0.3, 0.5), shoot_secant(unit, 0.5, 0.3)):
    print(f"  {res.method:<10} a = {res.a:.9f}  dy/dx(r) = {res.terminal_slope:.9f}  "
          f"iterations = {res.iterations}  residual evaluations = {res.evaluations}")
