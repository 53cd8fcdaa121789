"""k-corridors, exact line-in-corridor decision, immersion counting and the
antipodality / Lovász-type containment counts along intersection lines.

A corridor ``C_{a,b,c}`` is the open region strictly between the lower and
the upper envelope of three planes; it is a k-corridor when its vertex
``a ∩ b ∩ c`` has exactly k planes strictly below it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from . import exact
from .exact import Arrangement, IntersectionLine, NonGenericPointError, Point3


@dataclass(frozen=True, order=True)
class Corridor:
    triple: tuple[int, int, int]
    vertex: Point3
    vertex_level: int

    def to_json(self):
        return list(self.triple)


@dataclass(frozen=True)
class KCorridorSet:
    k: int
    corridors: tuple[Corridor, ...]

    def __len__(self):
        return len(self.corridors)

    def __iter__(self):
        return iter(self.corridors)

    @property
    def triples(self) -> set[tuple[int, int, int]]:
        return {c.triple for c in self.corridors}


@dataclass(frozen=True, order=True)
class ImmersionPair:
    """``inner`` is immersed in ``outer``: they share ``shared`` and the line
    of the other two planes of ``inner`` lies inside ``outer``."""

    inner: tuple[int, int, int]
    outer: tuple[int, int, int]
    shared: int
    inner_line: tuple[int, int]

    def to_json(self):
        return {"inner": list(self.inner), "outer": list(self.outer), "shared": self.shared}


def _cache(arr: Arrangement, name: str):
    # per-arrangement memo; arrangements are immutable
    store = arr.__dict__.setdefault("_klevel_cache", {})
    return store, name


def vertex_levels(arr: Arrangement) -> dict[tuple[int, int, int], int]:
    """Level of every vertex, keyed by sorted plane triple."""
    store, key = _cache(arr, "levels")
    table = store.get(key)
    if table is None:
        table = {}
        for t in combinations(range(arr.n), 3):
            table[t] = exact.level(arr, exact.intersect_triple(arr, *t))
        store[key] = table
    return table


def corridor(arr: Arrangement, triple) -> Corridor:
    t = tuple(sorted(triple))
    return Corridor(t, exact.intersect_triple(arr, *t), vertex_levels(arr)[t])


def enumerate_k_corridors(arr: Arrangement, k: int) -> KCorridorSet:
    levels = vertex_levels(arr)
    members = tuple(corridor(arr, t) for t, lv in levels.items() if lv == k)
    return KCorridorSet(k, members)


def level_profile(arr: Arrangement) -> list[int]:
    """``|C^k|`` for k = 0 .. n-3."""
    prof = [0] * max(arr.n - 2, 0)
    for lv in vertex_levels(arr).values():
        prof[lv] += 1
    return prof


# ---------------------------------------------------------------------------
# line in corridor


def _ray(alpha: Fraction, beta: Fraction, sign: int):
    """``{t : sign*(alpha + beta*t) >= 0}`` as ``(lo, hi)``; None marks an
    infinite end, and ``"empty"`` the empty set."""
    alpha, beta = sign * alpha, sign * beta
    if beta == 0:
        return (None, None) if alpha >= 0 else "empty"
    root = -alpha / beta
    return (root, None) if beta > 0 else (None, root)


def _interval_empty(lo, hi) -> bool:
    return lo is not None and hi is not None and lo > hi


def _all_hold_somewhere(offsets, sign) -> bool:
    lo = hi = None
    for alpha, beta in offsets:
        r = _ray(alpha, beta, sign)
        if r == "empty":
            return False
        rlo, rhi = r
        if rlo is not None and (lo is None or rlo > lo):
            lo = rlo
        if rhi is not None and (hi is None or rhi < hi):
            hi = rhi
    return not _interval_empty(lo, hi)


def line_in_corridor(arr: Arrangement, line: IntersectionLine, triple) -> bool:
    """True iff ``line`` lies strictly between the lower and upper envelope
    of the three planes for every parameter value.

    With ``f_i(t) = z_line(t) - z_i(t)`` affine, the line leaves the open
    corridor exactly where all ``f_i >= 0`` (on or above the upper envelope)
    or all ``f_i <= 0``; both sets are intersections of rays.
    """
    offsets = [line.offset_from(arr[i]) for i in triple]
    return not _all_hold_somewhere(offsets, +1) and not _all_hold_somewhere(offsets, -1)


def containment_table(arr: Arrangement) -> dict[tuple[int, int], list[tuple[int, int, int]]]:
    """For every line ``l_{i,j}``, the corridors over planes other than i, j
    (any level) that fully contain it."""
    store, key = _cache(arr, "containment")
    table = store.get(key)
    if table is None:
        table = {}
        for i, j in combinations(range(arr.n), 2):
            line = exact.intersect_pair(arr, i, j)
            rest = [d for d in range(arr.n) if d != i and d != j]
            table[(i, j)] = [t for t in combinations(rest, 3) if line_in_corridor(arr, line, t)]
        store[key] = table
    return table


def count_immersions(arr: Arrangement, k: int) -> tuple[int, list[ImmersionPair]]:
    """``X^k`` and the sorted list of ordered immersed k-corridor pairs."""
    levels = vertex_levels(arr)
    pairs = []
    for (i, j), outers in containment_table(arr).items():
        for outer in outers:
            if levels[outer] != k:
                continue
            for s in outer:
                inner = tuple(sorted((i, j, s)))
                if levels[inner] == k:
                    pairs.append(ImmersionPair(inner, outer, s, (i, j)))
    pairs.sort()
    return len(pairs), pairs


def is_immersed(arr: Arrangement, inner, outer) -> bool:
    """Direct test of the immersion definition for two triples."""
    inner, outer = set(inner), set(outer)
    shared = inner & outer
    if len(shared) != 1:
        return False
    i, j = sorted(inner - shared)
    return line_in_corridor(arr, exact.intersect_pair(arr, i, j), tuple(sorted(outer)))


def lovasz_count(arr: Arrangement, i: int, j: int, k: int, relative: bool = False) -> int:
    """Number of k-corridors over planes other than i, j that fully contain
    ``l_{i,j}``.

    Levels are taken in the whole arrangement by default.  With
    ``relative=True`` they are taken in the arrangement without i and j,
    which is the setting in which the containment bound is proved.
    """
    i, j = min(i, j), max(i, j)
    levels = vertex_levels(arr)
    count = 0
    for t in containment_table(arr)[(i, j)]:
        lv = levels[t]
        if relative:
            v = exact.intersect_triple(arr, *t)
            lv -= exact._below(arr[i], v.x, v.y, v.z) + exact._below(arr[j], v.x, v.y, v.z)
        count += lv == k
    return count


def lovasz_bound(n: int) -> int:
    return (n - 2) * (n - 3) // 2


def upper_bound_xk(n: int) -> Fraction:
    """``3 * ((n-2)(n-3)/2) * C(n,2)``, the counting bound below ``3n^4/4``."""
    return Fraction(3 * (n - 2) * (n - 3) * comb(n, 2), 2)


# ---------------------------------------------------------------------------
# antipodality


def crossing_parameters(arr: Arrangement, i: int, j: int) -> list[tuple[Fraction, int]]:
    """Sorted ``(t, d)``: where each other plane d crosses ``l_{i,j}``."""
    line = exact.intersect_pair(arr, i, j)
    out = []
    for d in range(arr.n):
        if d in (i, j):
            continue
        t = line.crossing_parameter(arr[d])
        if t is None:
            raise exact.GeometryError(f"line {i},{j} is parallel to plane {d}")
        out.append((t, d))
    out.sort()
    return out


def antipodality_schedule(arr: Arrangement, i: int, j: int) -> list[Point3]:
    """Generic sample points on ``l_{i,j}``: every midpoint between consecutive
    crossings, plus one point a unit parameter beyond each extreme crossing."""
    line = exact.intersect_pair(arr, i, j)
    ts = [t for t, _ in crossing_parameters(arr, i, j)]
    if not ts:
        return [line.origin]
    params = [ts[0] - 1] + [(a + b) / 2 for a, b in zip(ts, ts[1:])] + [ts[-1] + 1]
    return [line.at(t) for t in params]


def antipodality_counts(arr: Arrangement, i: int, j: int, p: Point3) -> dict[int, tuple[int, int]]:
    """``{k: (up_k, down_k)}`` at ``p`` on ``l_{i,j}`` for every k that occurs."""
    pi, pj = arr[i], arr[j]
    if pi.z(p.x, p.y) != p.z or pj.z(p.x, p.y) != p.z:
        raise ValueError(f"point is not on line {i},{j}")
    levels = vertex_levels(arr)
    out: dict[int, list[int]] = {}
    for d in range(arr.n):
        if d in (i, j):
            continue
        zd = arr[d].z(p.x, p.y)
        if zd == p.z:
            raise NonGenericPointError(f"plane {d} passes through the sample point")
        lv = levels[tuple(sorted((i, j, d)))]
        slot = out.setdefault(lv, [0, 0])
        slot[0 if zd > p.z else 1] += 1
    return {k: (u, dn) for k, (u, dn) in out.items()}


def antipodality_check(arr: Arrangement, i: int, j: int, p: Point3, k: int) -> tuple[int, int]:
    """``(up_k, down_k)``: planes d with ``C_{i,j,d}`` a k-corridor passing
    above / below ``p``.  Callers assert ``|up_k - down_k| <= 2``."""
    return antipodality_counts(arr, i, j, p).get(k, (0, 0))
