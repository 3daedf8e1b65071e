"""Entropic uncertainty for two orthogonal spin components.

For spin 1 the overlap bound ``log_3 2`` is attained; for larger spins the
bound approaches 1/2 slowly, and the superposition family of two coherent
states stays well above the asymptotic pair (1/4, 1/4) at moderate spin.
"""
import math

from spin_uncertainty import entropy_pair, make_spin_context, mu_bound, psi_alpha_state
from spin_uncertainty.entropic import region_sample_s1

cloud = region_sample_s1(grid=60, n_random=500)
best = min(cloud, key=lambda p: p.total)
print(f"spin 1: min H1 + H2 = {best.total:.6f}, bound log_3 2 = {math.log(2) / math.log(3):.6f}")

for s in (10, 100, 1000):
    print(f"s = {s:5d}: overlap bound {mu_bound(s):.4f}")

ctx = make_spin_context(50)
for a in (0.0, math.pi / 8, math.pi / 4):
    pair = entropy_pair(ctx, psi_alpha_state(ctx, a))
    print(f"s = 50, alpha = {a:.3f}: (H1, H2) = ({pair.h1:.4f}, {pair.h2:.4f})")
