"""Per-plane level graphs, x-horizontal wedges and diamonds.

For a base plane ``a`` the partner curves ``γ_b = a ∩ b`` are the
xy-projected intersection lines with every plane ``b`` whose intercept with
the vertical axis exceeds that of ``a``.  The axis is placed at
``(0, Y)`` with ``Y`` arbitrarily large, so the intercept order is the order
of y-slopes (ties broken by ``c``; slopes are distinct after validation).
With that placement the axis point lies on the ``y -> +inf`` side of every
``γ_b``, and that side is exactly where ``b`` passes above ``a``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import corridors, exact
from .corridors import ImmersionPair
from .exact import Arrangement


def intercept_key(plane: exact.Plane):
    """Order of the planes along the vertical axis at ``(0, +inf)``."""
    return (plane.b, plane.c)


def _houses(arr: Arrangement, a: int, b: int) -> bool:
    return intercept_key(arr[b]) > intercept_key(arr[a])


@dataclass(frozen=True)
class GammaA:
    base: int
    members: tuple[int, ...]
    curves: dict  # member -> (slope, offset) of y = slope*x + offset
    arr: Arrangement = field(repr=False, compare=False)

    def __len__(self):
        return len(self.members)


def build_gamma(arr: Arrangement, a: int) -> GammaA:
    pa = arr[a]
    members = tuple(b for b in range(arr.n) if b != a and _houses(arr, a, b))
    curves = {}
    for b in members:
        pb = arr[b]
        # (pa.a - pb.a) x + (pa.b - pb.b) y = pb.c - pa.c
        db = pa.b - pb.b
        curves[b] = ((pb.a - pa.a) / db, (pb.c - pa.c) / db)
    return GammaA(a, members, curves, arr)


class OnBoundary(exact.GeometryError):
    pass


def _upper_side(gamma: GammaA, b: int, x, y) -> bool:
    slope, offset = gamma.curves[b]
    d = y - (slope * x + offset)
    if d == 0:
        raise OnBoundary(f"point lies on curve {b}")
    return d > 0


def in_wedge(gamma: GammaA, p, b: int, c: int) -> bool:
    """Whether in-plane point ``p`` (x, y) lies on the upper side of exactly
    one of ``γ_b``, ``γ_c``."""
    x, y = p[0], p[1]
    return _upper_side(gamma, b, x, y) != _upper_side(gamma, c, x, y)


@dataclass(frozen=True)
class LevelGraph:
    gamma: GammaA
    k: int
    edges: frozenset  # sorted member pairs

    @property
    def m(self) -> int:
        return len(self.gamma)

    def vertex(self, edge) -> exact.Point3:
        return exact.intersect_triple(self.gamma.arr, self.gamma.base, *edge)


def build_level_graph(arr: Arrangement, a: int, k: int) -> LevelGraph:
    gamma = build_gamma(arr, a)
    levels = corridors.vertex_levels(arr)
    edges = frozenset(
        (b, c) for b, c in combinations(gamma.members, 2) if levels[tuple(sorted((a, b, c)))] == k
    )
    return LevelGraph(gamma, k, edges)


@dataclass(frozen=True, order=True)
class DiamondRecord:
    edge1: tuple[int, int]
    edge2: tuple[int, int]
    immersion_direction: str | None  # "edge1_in_edge2", "edge2_in_edge1", "both" or None

    def to_json(self):
        return {"edge1": list(self.edge1), "edge2": list(self.edge2), "immersion": self.immersion_direction}


def _direction(arr: Arrangement, a: int, e1, e2) -> str | None:
    one = corridors.line_in_corridor(arr, exact.intersect_pair(arr, *e1), tuple(sorted((a, *e2))))
    two = corridors.line_in_corridor(arr, exact.intersect_pair(arr, *e2), tuple(sorted((a, *e1))))
    if one and two:
        return "both"
    if one:
        return "edge1_in_edge2"
    if two:
        return "edge2_in_edge1"
    return None


def count_diamonds(graph: LevelGraph) -> tuple[int, list[DiamondRecord]]:
    """Exhaustive scan over unordered pairs of vertex-disjoint edges."""
    gamma = graph.gamma
    edges = sorted(graph.edges)
    points = {e: graph.vertex(e) for e in edges}
    records = []
    for e1, e2 in combinations(edges, 2):
        if set(e1) & set(e2):
            continue
        p1, p2 = points[e1], points[e2]
        if in_wedge(gamma, (p1.x, p1.y), *e2) and in_wedge(gamma, (p2.x, p2.y), *e1):
            records.append(DiamondRecord(e1, e2, _direction(gamma.arr, gamma.base, e1, e2)))
    return len(records), records


def check_euler_bound(graph: LevelGraph, delta: int | None = None) -> bool:
    """Diamond-free with more than three curves implies ``|E| <= 3m - 6``;
    and always ``delta >= |E| - 3m``."""
    if delta is None:
        delta, _ = count_diamonds(graph)
    e, m = len(graph.edges), graph.m
    planar_ok = not (delta == 0 and m > 3) or e <= 3 * m - 6
    return planar_ok and delta >= e - 3 * m


def crossing_lower_bound(graph: LevelGraph) -> Fraction | None:
    """``|E|^3 / (64 m^2)`` when ``|E| > 4m``, else None (not applicable)."""
    e, m = len(graph.edges), graph.m
    if e <= 4 * m:
        return None
    return Fraction(e**3, 64 * m * m)


def check_crossing_bound(graph: LevelGraph, delta: int | None = None) -> bool | None:
    bound = crossing_lower_bound(graph)
    if bound is None:
        return None
    if delta is None:
        delta, _ = count_diamonds(graph)
    return delta >= bound


class NoContainment(exact.GeometryError):
    """Neither corridor of a diamond is immersed in the other.  ``artifact``
    is a self-contained replay record."""

    def __init__(self, artifact: dict):
        super().__init__(f"diamond {artifact['diamond']} on plane {artifact['base']} has no containment")
        self.artifact = artifact


def counterexample_artifact(arr: Arrangement, graph: LevelGraph, record: DiamondRecord) -> dict:
    return {
        "arrangement": arr.to_json(),
        "base": graph.gamma.base,
        "k": graph.k,
        "diamond": record.to_json(),
    }


def diamond_to_immersion(arr: Arrangement, graph: LevelGraph, record: DiamondRecord) -> ImmersionPair:
    a = graph.gamma.base
    direction = _direction(arr, a, record.edge1, record.edge2)
    if direction not in ("edge1_in_edge2", "edge2_in_edge1"):
        raise NoContainment(counterexample_artifact(arr, graph, record))
    inner_e, outer_e = (
        (record.edge1, record.edge2) if direction == "edge1_in_edge2" else (record.edge2, record.edge1)
    )
    return ImmersionPair(
        tuple(sorted((a, *inner_e))), tuple(sorted((a, *outer_e))), a, tuple(sorted(inner_e))
    )


def graph_dump(graph: LevelGraph, records=None) -> dict:
    if records is None:
        _, records = count_diamonds(graph)
    return {
        "base": graph.gamma.base,
        "k": graph.k,
        "members": list(graph.gamma.members),
        "edges": [list(e) for e in sorted(graph.edges)],
        "diamonds": [r.to_json() for r in records],
    }


def dumps_graph(graph: LevelGraph) -> str:
    return json.dumps(graph_dump(graph))


def immersion_lower_bound(n: int, ck: int) -> Fraction:
    """``|C^k|^3 / (64 n^4) - n^2``."""
    return Fraction(ck**3, 64 * n**4) - n * n
