"""
Sweeping a curtain
==================

The vertical wall over the line where two planes meet cuts every other plane
in a line.  Those lines form a wiring diagram, which a topological sweep
walks through one empty triangle at a time.
"""

# %%
from klevel import fixtures
from klevel.generate import GenConfig, gen_random
from klevel.sweep import SweepFront, classify_crossing, curtain_of, predicted_moves, sweep_curtain, sweep_up

arr = gen_random(GenConfig(8, seed=5))
curtain = curtain_of(arr, 0, 1, k=2)
d = curtain.diagram
print("wires", d.n, "initial order", d.initial_order)
print("swaps", d.swaps())

# %%
trace = sweep_curtain(curtain)
print(len(trace.moves), "moves on the", curtain.smaller_side(), "side")
for m in trace.moves[:6]:
    print("  ", m.kind, m.wires)

# %%
# Crossings above the base line are vertices over it; classify each one by
# the level-2 corridors it opens or closes along the base line.
above = [(t, c, d_) for t, c, d_ in curtain.crossings() if curtain.crossing(c, d_)[1] > 0]
for t, c, d_ in above[:4]:
    print((c, d_), "at t =", t, classify_crossing(curtain, c, d_, 2))

# %%
# The non-stretchable wiring diagram sweeps just as well.
wd = fixtures.non_pappus_wiring()
front = SweepFront.from_wire(wd, 4)
t = sweep_up(wd.without(4), front)
print("non-Pappus from wire 4:", len(t.moves), "predicted", predicted_moves(front))
