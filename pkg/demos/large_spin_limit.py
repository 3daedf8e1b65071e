"""Squeezed oscillator states mapped onto a large spin.

Scaled variances ``(var L1, var L2, var L3)/s`` approach
``(1/(2 alpha), alpha/2, 0)`` as the spin grows.
"""
from spin_uncertainty import make_spin_context, scaled_variances
from spin_uncertainty.asymptotics import asymptotic_variance_triple

for alpha in (0.5, 2.0):
    print(f"alpha = {alpha}, limit {asymptotic_variance_triple(alpha)}")
    for s in (10, 50, 200):
        nu = scaled_variances(make_spin_context(s), alpha)
        print(f"  s = {s:4d}: " + "  ".join(f"{x:.5f}" for x in nu))
