"""Wiring diagrams, topological sweeping with the three local moves, and
curtain arrangements cut from a plane arrangement.

A wiring diagram lists the wires top to bottom at ``x = -inf`` and then a
sequence of adjacent swaps; every pair of wires swaps exactly once.

The sweep state (:class:`SweepFront`) is purely combinatorial.  Above the
sweep curve every crossed wire leaves a ray, which is remembered as the
ordered list of crossings still ahead on it.  The boundary at infinity
above the curve is kept as ``arc``: the wire ends met when walking from the
curve's left end up, across the top and down to its right end.  Moves only
ever consume the front of ``arc``, which is what "first ray" refers to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import corridors, exact
from .exact import Arrangement

GAMMA0 = -1  # wire id of the base curve in an extended curtain diagram


class WiringError(ValueError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class PairSwapsTwice(WiringError):
    pass


class PairNeverSwaps(WiringError):
    pass


class InvalidAdjacency(WiringError):
    pass


class InvalidOrder(WiringError):
    pass


def _simulate(initial_order, events, strict: bool = True):
    """Yield ``(event_index, position, upper, lower)`` for each swap."""
    order = list(initial_order)
    n = len(order)
    for idx, p in enumerate(events):
        if not (0 <= p < n - 1):
            raise InvalidAdjacency(f"event {idx}: position {p} out of range", (idx, p))
        upper, lower = order[p], order[p + 1]
        order[p], order[p + 1] = lower, upper
        yield idx, p, upper, lower


@dataclass(frozen=True)
class WiringDiagram:
    n: int
    initial_order: tuple
    events: tuple[int, ...]

    def swaps(self):
        """``(event_index, position, upper, lower)`` with the wire order just
        before the swap."""
        return list(_simulate(self.initial_order, self.events))

    def orders(self):
        order = list(self.initial_order)
        yield tuple(order)
        for _, p, upper, lower in _simulate(self.initial_order, self.events):
            order[p], order[p + 1] = lower, upper
            yield tuple(order)

    @property
    def final_order(self) -> tuple:
        *_, last = self.orders()
        return last

    @property
    def wires(self) -> frozenset:
        return frozenset(self.initial_order)

    def mirrored(self) -> "WiringDiagram":
        """Upside-down copy: reversed order, swap positions reflected."""
        return WiringDiagram(self.n, tuple(reversed(self.initial_order)),
                             tuple(self.n - 2 - p for p in self.events))

    def without(self, wire) -> "WiringDiagram":
        """The diagram with one wire deleted."""
        order = [w for w in self.initial_order if w != wire]
        events = []
        cur = list(order)
        for _, _, upper, lower in self.swaps():
            if wire in (upper, lower):
                continue
            p = cur.index(upper)
            events.append(p)
            cur[p], cur[p + 1] = cur[p + 1], cur[p]
        return WiringDiagram(self.n - 1, tuple(order), tuple(events))

    def dumps(self) -> str:
        lines = [str(self.n), " ".join(str(w) for w in self.initial_order)]
        lines += [str(p) for p in self.events]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "WiringDiagram":
        rows = [r.strip() for r in text.strip().splitlines() if r.strip()]
        n = int(rows[0])
        order = tuple(int(w) for w in rows[1].split()) if n else ()
        events = tuple(int(r) for r in rows[2:])
        return validate_wiring(n, order, events)


def validate_wiring(n: int, initial_order: Sequence, events: Sequence[int]) -> WiringDiagram:
    """Certify that every pair of wires swaps exactly once.

    Raises the first problem found, in event order: ``InvalidAdjacency``,
    ``PairSwapsTwice``; afterwards ``PairNeverSwaps``.
    """
    initial_order = tuple(initial_order)
    if len(initial_order) != n or len(set(initial_order)) != n:
        raise InvalidOrder("initial order must list n distinct wires", initial_order)
    seen = set()
    for idx, p, upper, lower in _simulate(initial_order, events):
        pair = frozenset((upper, lower))
        if pair in seen:
            raise PairSwapsTwice(f"wires {upper} and {lower} swap a second time at event {idx}",
                                 (upper, lower, idx))
        seen.add(pair)
    for u, v in combinations(initial_order, 2):
        if frozenset((u, v)) not in seen:
            raise PairNeverSwaps(f"wires {u} and {v} never swap", (u, v))
    return WiringDiagram(n, initial_order, tuple(events))


# ---------------------------------------------------------------------------
# sweeping


class IllegalMove(ValueError):
    pass


class Stuck(RuntimeError):
    def __init__(self, front):
        super().__init__(f"no legal sweep move from front xi={front.xi}")
        self.front = front


EMPTY_TRIANGLE = "EmptyTriangle"
TAKE_FIRST_RAY = "TakeFirstRay"
PASS_FIRST_RAY = "PassFirstRay"


@dataclass(frozen=True)
class SweepFront:
    """Sweep state.

    ``xi`` lists the wires crossed by the sweep curve, left to right;
    ``below`` the wires already entirely swept.  ``rays`` maps every wire
    with a part above the curve to the crossings still ahead on that part,
    ordered outward from the curve (for entirely-above wires: left to
    right).  ``downward`` marks a front prepared for :func:`sweep_down`.
    """

    xi: tuple
    below: frozenset
    above: frozenset
    rays: tuple  # ((wire, (partner, ...)), ...)
    arc: tuple
    downward: bool = False

    @property
    def ray_map(self) -> dict:
        return dict(self.rays)

    @property
    def wires(self) -> frozenset:
        return frozenset(self.xi) | self.below | self.above

    def check(self):
        if len(set(self.xi)) != len(self.xi):
            raise AssertionError(f"a wire appears twice in xi: {self.xi}")
        if set(self.xi) & self.below or set(self.xi) & self.above or self.below & self.above:
            raise AssertionError("xi, below and above sets overlap")

    def snapshot(self) -> dict:
        return {"xi": list(self.xi), "below": sorted(self.below)}

    @classmethod
    def from_wire(cls, diagram: WiringDiagram, start, downward: bool = False) -> "SweepFront":
        """Front whose sweep curve is wire ``start`` of ``diagram``; the
        swept arrangement is ``diagram.without(start)``."""
        return start_front(diagram.initial_order, diagram.events, start, downward)


def start_front(initial_order, events, start, downward: bool = False) -> SweepFront:
    """Front for a sweep curve given as wire ``start`` of an extended
    diagram.  Pairs involving ``start`` may swap at most once (a wire it
    never crosses lies entirely above or below it); all other pairs must
    swap exactly once."""
    initial_order = tuple(initial_order)
    n = len(initial_order)
    if downward:
        initial_order = tuple(reversed(initial_order))
        events = tuple(n - 2 - p for p in events)
    order = list(initial_order)
    s_pos0 = order.index(start)
    above_left = set(order[:s_pos0])
    crossed_at = {}
    crossings = []  # (event, upper, lower, above_start)
    seen = set()
    for idx, p, upper, lower in _simulate(initial_order, events):
        pair = frozenset((upper, lower))
        if pair in seen:
            raise PairSwapsTwice(f"wires {upper} and {lower} swap twice", (upper, lower, idx))
        seen.add(pair)
        if start in pair:
            other = lower if upper == start else upper
            crossed_at[other] = idx
        else:
            s_pos = order.index(start)
            crossings.append((idx, upper, lower, s_pos > p + 1))
        order[p], order[p + 1] = lower, upper
    others = [w for w in initial_order if w != start]
    for u, v in combinations(others, 2):
        if frozenset((u, v)) not in seen:
            raise PairNeverSwaps(f"wires {u} and {v} never swap", (u, v))
    final = order
    above_right = set(final[: final.index(start)])

    xi = tuple(sorted(crossed_at, key=crossed_at.get))
    above = frozenset(w for w in others if w not in crossed_at and w in above_left)
    below = frozenset(w for w in others if w not in crossed_at and w not in above_left)
    if above_left - set(crossed_at) != above_right - set(crossed_at):
        raise WiringError("an uncrossed wire changes side of the start curve", start)

    rays = {}
    for w in others:
        if w in below:
            continue
        mine = [(idx, u if v == w else v) for idx, u, v, up in crossings if up and w in (u, v)]
        if w in crossed_at and w in above_left:
            # left part above: outward means leftward
            mine = [c for c in mine if c[0] < crossed_at[w]]
            mine.sort(reverse=True)
        elif w in crossed_at:
            mine = [c for c in mine if c[0] > crossed_at[w]]
            mine.sort()
        else:
            mine.sort()
        rays[w] = tuple(partner for _, partner in mine)
    left_ends = [w for w in reversed(initial_order[:s_pos0])]  # bottom to top
    right_ends = [w for w in final[: final.index(start)]]  # top to bottom
    arc = tuple(left_ends + right_ends)
    front = SweepFront(xi, below, above, tuple(sorted(rays.items())), arc, downward)
    front.check()
    return front


@dataclass(frozen=True)
class Move:
    kind: str
    wires: tuple
    xi: tuple
    below: tuple

    def to_json(self) -> dict:
        return {"move": self.kind, "wires": list(self.wires), "xi": list(self.xi), "below": list(self.below)}


@dataclass(frozen=True)
class SweepTrace:
    moves: tuple[Move, ...]
    start: SweepFront = field(repr=False)

    def __len__(self):
        return len(self.moves)

    def count(self, kind: str) -> int:
        return sum(1 for m in self.moves if m.kind == kind)

    def to_json(self) -> list:
        return [m.to_json() for m in self.moves]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _replace_ray(rays: dict, wire, partners) -> tuple:
    rays = dict(rays)
    if partners is None:
        rays.pop(wire, None)
    else:
        rays[wire] = tuple(partners)
    return tuple(sorted(rays.items()))


def legal_triangles(front: SweepFront) -> list[int]:
    rays = front.ray_map
    out = []
    for i in range(len(front.xi) - 1):
        u, v = front.xi[i], front.xi[i + 1]
        ru, rv = rays.get(u, ()), rays.get(v, ())
        if ru and rv and ru[0] == v and rv[0] == u:
            out.append(i)
    return out


def apply_move(front: SweepFront, kind: str, wires: tuple) -> SweepFront:
    rays = front.ray_map
    if kind == EMPTY_TRIANGLE:
        u, v = wires
        xi = list(front.xi)
        i = xi.index(u)
        if i + 1 >= len(xi) or xi[i + 1] != v or i not in legal_triangles(front):
            raise IllegalMove(f"no empty triangle on {u},{v}")
        xi[i], xi[i + 1] = v, u
        new_rays = _replace_ray(rays, u, rays[u][1:])
        new_rays = _replace_ray(dict(new_rays), v, rays[v][1:])
        return SweepFront(tuple(xi), front.below, front.above, new_rays, front.arc, front.downward)
    (w,) = wires
    if not front.arc or front.arc[0] != w:
        raise IllegalMove(f"wire {w} does not own the first ray")
    if kind == TAKE_FIRST_RAY:
        if w not in front.above:
            raise IllegalMove(f"wire {w} is not entirely above the sweep curve")
        return SweepFront((w,) + front.xi, front.below, front.above - {w}, front.rays,
                          front.arc[1:], front.downward)
    if kind == PASS_FIRST_RAY:
        if not front.xi or front.xi[0] != w or rays.get(w):
            raise IllegalMove(f"first ray of {w} cannot be passed")
        return SweepFront(front.xi[1:], front.below | {w}, front.above, _replace_ray(rays, w, None),
                          front.arc[1:], front.downward)
    raise IllegalMove(f"unknown move {kind}")


def next_move(front: SweepFront):
    """Greedy policy: leftmost empty triangle, else pass the first ray, else
    take it on.  None when the sweep is finished."""
    tri = legal_triangles(front)
    if tri:
        i = tri[0]
        return EMPTY_TRIANGLE, (front.xi[i], front.xi[i + 1])
    if front.arc:
        w = front.arc[0]
        if front.xi and front.xi[0] == w and not front.ray_map.get(w):
            return PASS_FIRST_RAY, (w,)
        if w in front.above:
            return TAKE_FIRST_RAY, (w,)
    if not front.xi and not front.above:
        return None
    raise Stuck(front)


def _run(diagram: WiringDiagram, front: SweepFront) -> SweepTrace:
    if front.wires != diagram.wires:
        raise ValueError("sweep front and diagram have different wires")
    moves = []
    cur = front
    while True:
        mv = next_move(cur)
        if mv is None:
            break
        cur = apply_move(cur, *mv)
        cur.check()
        moves.append(Move(mv[0], mv[1], cur.xi, tuple(sorted(cur.below))))
    return SweepTrace(tuple(moves), front)


def sweep_up(diagram: WiringDiagram, start_front: SweepFront) -> SweepTrace:
    """Sweep upward from the start curve until every wire lies below it."""
    if start_front.downward:
        raise ValueError("front was prepared for a downward sweep")
    return _run(diagram, start_front)


def sweep_down(diagram: WiringDiagram, start_front: SweepFront) -> SweepTrace:
    """Mirror image of :func:`sweep_up`; ``start_front`` must be built with
    ``downward=True``.  ``below`` then holds the wires already passed."""
    if not start_front.downward:
        raise ValueError("front was prepared for an upward sweep")
    return _run(diagram.mirrored(), start_front)


def replay(trace: SweepTrace) -> bool:
    cur = trace.start
    for m in trace.moves:
        cur = apply_move(cur, m.kind, m.wires)
        if cur.xi != m.xi or tuple(sorted(cur.below)) != m.below:
            return False
    return True


def predicted_moves(front: SweepFront) -> dict:
    """Move counts any complete sweep from ``front`` must make."""
    rays = front.ray_map
    pending = set()
    for w, partners in rays.items():
        for p in partners:
            pending.add(frozenset((w, p)))
    return {
        EMPTY_TRIANGLE: len(pending),
        PASS_FIRST_RAY: len(front.xi) + len(front.above),
        TAKE_FIRST_RAY: len(front.above),
    }


# ---------------------------------------------------------------------------
# curtains


@dataclass(frozen=True)
class CurtainCurve:
    plane: int
    t: Fraction  # where the curve crosses the base line
    left: str  # side of the base line for parameters below t: "above" / "below"
    right: str


@dataclass(frozen=True)
class CurtainArrangement:
    """The vertical plane through ``l_{i,j}``, flattened with the line's
    parameter as abscissa.  Heights are stored relative to the base line,
    a vertical shear that leaves every above/below relation intact."""

    base_pair: tuple[int, int]
    line: exact.IntersectionLine
    curves: tuple[CurtainCurve, ...]
    diagram: WiringDiagram
    extended: WiringDiagram
    level_annotations: dict
    k: int
    arr: Arrangement = field(repr=False)
    heights: dict = field(repr=False)  # wire -> (offset, slope) relative to the base line

    def height(self, wire, t) -> Fraction:
        c, m = self.heights[wire]
        return c + m * t

    def crossing(self, c: int, d: int) -> tuple[Fraction, Fraction]:
        """``(t, relative height)`` of ``σ_c ∩ σ_d``."""
        (c0, m0), (c1, m1) = self.heights[c], self.heights[d]
        t = (c1 - c0) / (m0 - m1)
        return t, c0 + m0 * t

    def crossings(self) -> list[tuple[Fraction, int, int]]:
        wires = [cv.plane for cv in self.curves]
        out = []
        for c, d in combinations(wires, 2):
            t, _ = self.crossing(c, d)
            out.append((t, min(c, d), max(c, d)))
        out.sort()
        return out

    def crossings_above(self) -> int:
        return sum(1 for c, d in self._pairs() if self.crossing(c, d)[1] > 0)

    def crossings_below(self) -> int:
        return sum(1 for c, d in self._pairs() if self.crossing(c, d)[1] < 0)

    def _pairs(self):
        return combinations([cv.plane for cv in self.curves], 2)

    def start_front(self, downward: bool = False) -> SweepFront:
        return SweepFront.from_wire(self.extended, GAMMA0, downward)

    def smaller_side(self) -> str:
        """"up" when at most as many crossings lie above the base line as
        below it, else "down"."""
        return "up" if self.crossings_above() <= self.crossings_below() else "down"


def sweep_curtain(curtain: CurtainArrangement) -> SweepTrace:
    """Sweep the side of the base line holding fewer crossings."""
    if curtain.smaller_side() == "up":
        return sweep_up(curtain.diagram, curtain.start_front())
    return sweep_down(curtain.diagram, curtain.start_front(downward=True))


def curtain_of(arr: Arrangement, i: int, j: int, k: int) -> CurtainArrangement:
    i, j = min(i, j), max(i, j)
    line = exact.intersect_pair(arr, i, j)
    heights = {GAMMA0: (Fraction(0), Fraction(0))}
    curves = []
    for d in range(arr.n):
        if d in (i, j):
            continue
        alpha, beta = line.offset_from(arr[d])  # line - plane
        if beta == 0:
            raise exact.GeometryError(f"plane {d} is parallel to line {i},{j}")
        heights[d] = (-alpha, -beta)
        t = -alpha / beta
        left = "above" if -beta < 0 else "below"
        curves.append(CurtainCurve(d, t, left, "below" if left == "above" else "above"))
    curves.sort(key=lambda cv: (cv.t, cv.plane))
    extended = _diagram_from_lines(heights)
    diagram = extended.without(GAMMA0)
    levels = corridors.vertex_levels(arr)
    notes = {cv.plane: levels[tuple(sorted((i, j, cv.plane)))] == k for cv in curves}
    return CurtainArrangement((i, j), line, tuple(curves), diagram, extended, notes, k, arr, heights)


def _diagram_from_lines(heights: dict) -> WiringDiagram:
    """Wiring diagram of straight lines ``h(t) = c + m*t``; crossings must be
    simple and at distinct parameters."""
    wires = sorted(heights, key=lambda w: (heights[w][1], w))
    for u, v in zip(wires, wires[1:]):
        if heights[u][1] == heights[v][1]:
            raise exact.GeometryError(f"curves {u} and {v} are parallel in the curtain")
    events = []
    for u, v in combinations(wires, 2):
        (cu, mu), (cv, mv) = heights[u], heights[v]
        events.append(((cv - cu) / (mu - mv), u, v))
    events.sort()
    for (t0, *_), (t1, *_) in zip(events, events[1:]):
        if t0 == t1:
            raise exact.GeometryError("two curtain crossings share an abscissa")
    order = list(wires)  # top to bottom at t = -inf: ascending slope
    positions = []
    for _, u, v in events:
        p = min(order.index(u), order.index(v))
        positions.append(p)
        order[p], order[p + 1] = order[p + 1], order[p]
    return validate_wiring(len(wires), tuple(wires), tuple(positions))


def classify_crossing(curtain: CurtainArrangement, c: int, d: int, k: int) -> tuple[int, int]:
    """``(enters, exits)`` at the crossing of ``σ_c`` and ``σ_d``.

    Counts the other curtain curves ``σ_e`` for which ``C_{c,d,e}`` is a
    k-corridor of the curtain's planes (the arrangement without the base
    pair): those passing above the crossing are entered by an upward sweep,
    those below are left.
    """
    t, h = curtain.crossing(c, d)
    if h <= 0:
        raise ValueError(f"curves {c} and {d} cross below the base line")
    arr = curtain.arr
    i, j = curtain.base_pair
    levels = corridors.vertex_levels(arr)
    enters = exits = 0
    for cv in curtain.curves:
        e = cv.plane
        if e in (c, d):
            continue
        tri = tuple(sorted((c, d, e)))
        v = exact.intersect_triple(arr, *tri)
        lv = levels[tri] - exact._below(arr[i], v.x, v.y, v.z) - exact._below(arr[j], v.x, v.y, v.z)
        if lv != k:
            continue
        he = curtain.height(e, t)
        if he > h:
            enters += 1
        elif he < h:
            exits += 1
        else:
            raise exact.NonGenericPointError(f"curve {e} passes through crossing {c},{d}")
    return enters, exits
