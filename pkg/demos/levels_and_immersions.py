"""
Levels, corridors and immersions
================================

Draw a small arrangement of planes with integer coefficients, sort its
vertices by level, and count the immersed corridor pairs at each level.
Everything runs in exact rationals; numpy is only used for the summary.
"""

# %%
import numpy as np

from klevel import count_immersions, enumerate_k_corridors, level_profile
from klevel.corridors import lovasz_bound, upper_bound_xk
from klevel.generate import GenConfig, gen_random

arr = gen_random(GenConfig(9, seed=4))
print(arr.n, "planes")
for p in arr.planes[:3]:
    print("  z =", p.a, "x +", p.b, "y +", p.c)

# %%
# Every triple of planes meets in one vertex, so the level histogram adds up
# to n choose 3.
hist = np.array(level_profile(arr))
print("vertices per level:", hist.tolist(), "total", hist.sum())

# %%
# Corridors at a single level, and the immersed pairs among them.
k = 3
ck = enumerate_k_corridors(arr, k)
xk, pairs = count_immersions(arr, k)
print(f"k={k}: {len(ck)} corridors, {xk} immersed pairs")
for pair in pairs[:5]:
    print("  ", pair.inner, "inside", pair.outer)

# %%
# Compare each level against the global upper bounds.
rows = [(k, len(enumerate_k_corridors(arr, k)), count_immersions(arr, k)[0]) for k in range(arr.n - 2)]
table = np.array(rows)
print(table)
print("X^k cap", float(upper_bound_xk(arr.n)), "  containing-corridor cap", lovasz_bound(arr.n))
