"""
Random sampling below the lower envelope
========================================

Pick r = n/(2k) planes, decompose the region under their lower envelope into
vertical prisms over trapezoids, and count which of the other planes cut into
each prism.  The eighth powers of those counts drive the statistic.
"""

# %%
import numpy as np

from klevel.generate import GenConfig, gen_random
from klevel.harness import experiment_batch, rows_to_csv, slope_summary
from klevel.sampling import clarkson_shor_sample, run_trial

arr = gen_random(GenConfig(14, seed=5))

# %%
tr = run_trial(arr, [0, 3, 7])
print(len(tr.vertices), "envelope vertices,", len(tr.trapezoids), "trapezoids")
print("conflict sizes", [len(c) for c in tr.conflicts])

# %%
for k in (2, 3):
    res = clarkson_shor_sample(arr, k, 20, seed=2024)
    sizes = np.concatenate([np.array(s) for s in res.conflict_sizes])
    print(f"k={k} r={res.r} mean conflict {sizes.mean():.2f} statistic {res.statistic():.1f} ratio {res.ratio():.2f}")

# %%
# A small seeded batch; the CSV is identical whatever KLEVEL_WORKERS is set to.
rows = experiment_batch(range(6, 10), [1, "half"], trials=2, seed=0)
print(rows_to_csv(rows)[:300])
print("log-log slopes of |C^k| in n:", slope_summary(rows))
