"""Trace the lower boundary of the two-component variance region for spin 1.

Each tangent direction ``w`` gives the smallest value of
``w1 var L1 + w3 var L3``; the witness states trace the boundary curve.
The symmetric direction recovers the best constant 7/16.
"""
from spin_uncertainty import c2_bound, make_spin_context, trace_region
from spin_uncertainty.prep_region import MinimizeOptions

ctx = make_spin_context(1)
points = trace_region(ctx, 2, 11, MinimizeOptions(restarts=4))

print(" w1     var L1   var L3   bound")
for p in points:
    v1, v3 = p.variances
    print(f"{p.weights.w[0]:.2f}  {v1:8.5f} {v3:8.5f} {p.bound:8.5f}")

print(f"\nbest constant in var L1 + var L3 >= c: {c2_bound(ctx):.6f} (7/16 = {7 / 16})")
