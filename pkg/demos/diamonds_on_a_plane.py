"""
Diamonds on a single plane
==========================

Restrict to one plane a, keep the partners with a higher intercept, and look
at the graph whose edges are the level-k vertices lying on a.  Pairs of edges
that sit in each other's wedge (diamonds) each point to an immersion.
"""

# %%
from klevel.diamonds import build_gamma, build_level_graph, count_diamonds, diamond_to_immersion, graph_dump
from klevel.generate import GenConfig, gen_random

arr = gen_random(GenConfig(10, seed=21))

# %%
sizes = [len(build_gamma(arr, a)) for a in range(arr.n)]
print("partners per plane:", sizes, "sum", sum(sizes), "= n(n-1)/2")

# %%
k = 3
total = 0
for a in range(arr.n):
    g = build_level_graph(arr, a, k)
    delta, recs = count_diamonds(g)
    total += delta
    print(f"a={a}: m={g.m:2d} edges={len(g.edges):2d} diamonds={delta}")
print("diamonds at level", k, ":", total)

# %%
# Follow one diamond to the immersion it certifies.
for a in range(arr.n):
    g = build_level_graph(arr, a, k)
    _, recs = count_diamonds(g)
    if recs:
        pair = diamond_to_immersion(arr, g, recs[0])
        print(graph_dump(g, recs[:1])["diamonds"])
        print("immersion:", pair.inner, "inside", pair.outer)
        break
