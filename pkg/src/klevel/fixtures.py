"""Hand-built wiring diagrams used as sweep fixtures.

The non-Pappus fixture starts from an exact Pappus configuration of nine
lines (nine triple points, nine ordinary crossings).  Each triple point is
written as three consecutive swaps.  Eight of them use the pattern
``p, p+1, p`` and the point where the Pappus line meets the last two cross
lines uses ``p+1, p, p+1``: there the Pappus line passes on the other side
of the crossing of the two cross lines, the combinatorial picture of
"the ninth point does not lie on the line".

Only the combinatorics matter to the sweep; the diagram is a valid simple
wiring diagram either way and nothing here certifies (non-)stretchability.
"""

from __future__ import annotations

from fractions import Fraction as F
from itertools import combinations

from .sweep import WiringDiagram, validate_wiring

LINE_NAMES = ("g", "h", "A0B1", "A1B0", "A0B2", "A2B0", "A1B2", "A2B1", "pappus")
PAPPUS_LINE = LINE_NAMES.index("pappus")


def _through(p, q):
    m = (q[1] - p[1]) / (q[0] - p[0])
    return m, p[1] - m * p[0]


def _meet(l1, l2):
    x = (l2[1] - l1[1]) / (l1[0] - l2[0])
    return x, l1[0] * x + l1[1]


def pappus_lines() -> list[tuple[F, F]]:
    """``(slope, offset)`` for the nine lines, indexed as ``LINE_NAMES``."""
    A = [(F(0), F(0)), (F(2), F(0)), (F(5), F(0))]
    B = [(F(1), F(9, 2)), (F(3), F(11, 2)), (F(6), F(7))]
    lines = [_through(A[0], A[1]), _through(B[0], B[1])]
    for i, j in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]:
        lines.append(_through(A[i], B[j]))
    X = _meet(lines[2], lines[3])
    Y = _meet(lines[4], lines[5])
    lines.append(_through(X, Y))
    return lines


def crossing_points(lines) -> dict:
    """Intersection point -> set of line indices through it."""
    pts: dict = {}
    for u, v in combinations(range(len(lines)), 2):
        pts.setdefault(_meet(lines[u], lines[v]), set()).update((u, v))
    return pts


def wiring_from_lines(lines, flipped=frozenset()) -> WiringDiagram:
    """Wiring diagram of non-parallel lines where at most three meet at a
    point.  A triple point becomes swaps ``p, p+1, p``, or ``p+1, p, p+1``
    when the point is in ``flipped``."""
    order = sorted(range(len(lines)), key=lambda w: lines[w][0])  # top to bottom at -inf
    pts = crossing_points(lines)
    events = []
    for pt in sorted(pts, key=lambda q: (q[0], -q[1])):
        wires = pts[pt]
        p = min(order.index(w) for w in wires)
        if len(wires) == 2:
            seq = [p]
        elif len(wires) == 3:
            seq = [p + 1, p, p + 1] if pt in flipped else [p, p + 1, p]
        else:
            raise ValueError("more than three lines through a point")
        for q in seq:
            order[q], order[q + 1] = order[q + 1], order[q]
        events.extend(seq)
    return validate_wiring(len(lines), tuple(sorted(range(len(lines)), key=lambda w: lines[w][0])),
                           tuple(events))


def ninth_point(lines=None):
    lines = lines or pappus_lines()
    return _meet(lines[6], lines[7])


def pappus_wiring() -> WiringDiagram:
    return wiring_from_lines(pappus_lines())


def non_pappus_wiring() -> WiringDiagram:
    lines = pappus_lines()
    return wiring_from_lines(lines, frozenset({ninth_point(lines)}))
