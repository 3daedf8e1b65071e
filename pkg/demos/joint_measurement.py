"""Optimal joint measurement of all three spin components.

The covariant observable with a point mass at ``n = s`` and radius
``r_min(s)`` has the same calibration error for every input ``|m>``.  A
brute-force search over radii and ``n`` confirms the closed form.
"""
from fractions import Fraction

from spin_uncertainty import (
    brute_force_optimum,
    calibration_error,
    make_spin_context,
    optimal_measurement,
    optimal_spec,
)

print("   s    r_min   r_min/s  Delta^2   brute force")
for k in range(1, 9):
    s = Fraction(k, 2)
    opt = optimal_measurement(s)
    _, _, value = brute_force_optimum(s)
    print(f"{str(s):>4} {opt.r_min:8.5f} {opt.r_min / float(s):8.5f} {opt.delta_min_squared:8.5f} {value:10.7f}")

per_m, worst = calibration_error(make_spin_context(3), optimal_spec(3))
print("\nspin 3 calibration profile:", ", ".join(f"{v:.6f}" for v in per_m))
