"""Random-sample experiment: lower envelope of a sample, its minimization
diagram cut into y-vertical trapezoids, and the conflict set of the prism
below each trapezoid.

Trapezoids are open; prisms are open too, so a plane conflicts with a prism
only if it passes strictly below the prism's ceiling somewhere over the
trapezoid.  Sample planes never conflict with their own envelope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import exact
from .exact import Arrangement, Plane


class DegenerateSample(exact.GeometryError):
    pass


@dataclass(frozen=True)
class Trapezoid:
    """Open region ``x_lo < x < x_hi``, ``bottom(x) < y < top(x)`` inside the
    face of sample plane ``plane``.  Bounds are ``(slope, offset)`` lines in
    x, or None when unbounded; ``bottom_by``/``top_by`` name the neighbouring
    plane that defines the bound."""

    plane: int
    x_lo: Fraction | None
    x_hi: Fraction | None
    bottom: tuple | None
    top: tuple | None
    bottom_by: int | None = None
    top_by: int | None = None

    def contains_xy(self, x, y) -> bool:
        if self.x_lo is not None and not x > self.x_lo:
            return False
        if self.x_hi is not None and not x < self.x_hi:
            return False
        if self.bottom is not None and not y > self.bottom[0] * x + self.bottom[1]:
            return False
        if self.top is not None and not y < self.top[0] * x + self.top[1]:
            return False
        return True


@dataclass(frozen=True)
class SampleTrial:
    sample: tuple[int, ...]  # plane indices of the full arrangement
    vertices: tuple  # envelope vertices, as sorted index triples
    trapezoids: tuple[Trapezoid, ...]  # `plane` fields index the full arrangement
    conflicts: tuple[tuple[int, ...], ...]  # one conflict set per trapezoid


@dataclass(frozen=True)
class SampleResult:
    n: int
    k: int
    r: int
    trials: int
    envelope_complexity: tuple[int, ...]  # vertices per trial
    prism_count: tuple[int, ...]
    conflict_sizes: tuple[tuple[int, ...], ...]
    details: tuple[SampleTrial, ...] = ()

    @property
    def eighth_powers(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(s**8 for s in sizes) for sizes in self.conflict_sizes)

    def statistic(self) -> float:
        """Mean over trials of the sum of conflict sizes to the 8/3; the cube
        root is taken here, on exact integer eighth powers."""
        if not self.trials:
            return 0.0
        per_trial = [sum(float(p) ** (1.0 / 3.0) for p in powers) for powers in self.eighth_powers]
        return float(np.mean(per_trial))

    def ratio(self) -> float:
        """``statistic / (n k^{5/3})``, recorded only."""
        return self.statistic() / (self.n * self.k ** (5.0 / 3.0))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "trials": self.trials,
            "envelope_complexity": list(self.envelope_complexity),
            "prism_count": list(self.prism_count),
            "conflict_sizes": [list(s) for s in self.conflict_sizes],
            "statistic": self.statistic(),
            "ratio": self.ratio(),
        }


# ---------------------------------------------------------------------------
# envelope


def envelope_vertices(planes) -> list[tuple[int, int, int]]:
    """Triples whose common point lies strictly below every other plane."""
    out = []
    for t in combinations(range(len(planes)), 3):
        x, y, z = exact._solve3(*(planes[i] for i in t))
        if all(planes[g].z(x, y) > z for g in range(len(planes)) if g not in t):
            out.append(t)
    return out


def _face_bounds(planes, h):
    """Lines bounding the face of ``h`` from below and above, as
    ``(slope, offset, other_plane)``."""
    ph = planes[h]
    lower, upper = [], []
    for g, pg in enumerate(planes):
        if g == h:
            continue
        # h <= g  <=>  da*x + db*y + dc <= 0
        da, db, dc = ph.a - pg.a, ph.b - pg.b, ph.c - pg.c
        if db == 0:
            raise DegenerateSample(f"planes {h} and {g} meet in a line with vertical projection")
        line = (-da / db, -dc / db, g)
        (upper if db > 0 else lower).append(line)
    return lower, upper


def _pick(lines, x, best):
    if not lines:
        return None
    return best(lines, key=lambda ln: (ln[0] * x + ln[1]))


def face_trapezoids(planes, h) -> list[Trapezoid]:
    """Cut the face of ``h`` by the vertical lines through its vertices."""
    lower, upper = _face_bounds(planes, h)
    lines = lower + upper
    cuts = set()
    for l1, l2 in combinations(lines, 2):
        if l1[0] != l2[0]:
            cuts.add((l2[1] - l1[1]) / (l1[0] - l2[0]))
    cuts = sorted(cuts)
    if cuts:
        pieces = [(None, cuts[0], cuts[0] - 1)]
        pieces += [(a, b, (a + b) / 2) for a, b in zip(cuts, cuts[1:])]
        pieces.append((cuts[-1], None, cuts[-1] + 1))
    else:
        pieces = [(None, None, Fraction(0))]
    runs = []
    for lo, hi, x in pieces:
        bot = _pick(lower, x, max)
        top = _pick(upper, x, min)
        if bot is not None and top is not None and not bot[0] * x + bot[1] < top[0] * x + top[1]:
            continue
        key = (bot, top)
        if runs and runs[-1][2] == key and runs[-1][1] == lo:
            runs[-1][1] = hi
        else:
            runs.append([lo, hi, key])
    out = []
    for lo, hi, (bot, top) in runs:
        out.append(Trapezoid(
            h, lo, hi,
            None if bot is None else bot[:2], None if top is None else top[:2],
            None if bot is None else bot[2], None if top is None else top[2],
        ))
    return out


def decompose(planes) -> list[Trapezoid]:
    out = []
    for h in range(len(planes)):
        out.extend(face_trapezoids(planes, h))
    return out


# ---------------------------------------------------------------------------
# conflicts


def _sup_positive(p, q, lo, hi) -> bool:
    """Is ``sup p*x + q`` over the open interval ``(lo, hi)`` positive?"""
    if (lo is None and p < 0) or (hi is None and p > 0):
        return True
    ends = [e for e in (lo, hi) if e is not None]
    if p == 0 or not ends:
        return q > 0
    return max(p * e + q for e in ends) > 0


def in_conflict(ceiling: Plane, tz: Trapezoid, q: Plane) -> bool:
    """Does ``q`` pass strictly below ``ceiling`` somewhere over ``tz``?"""
    A, B, C = ceiling.a - q.a, ceiling.b - q.b, ceiling.c - q.c  # ceiling - q
    if B == 0:
        return _sup_positive(A, C, tz.x_lo, tz.x_hi)
    bound = tz.top if B > 0 else tz.bottom
    if bound is None:
        return True
    m, o = bound
    return _sup_positive(A + B * m, C + B * o, tz.x_lo, tz.x_hi)


def conflict_set(arr: Arrangement, tz: Trapezoid) -> tuple[int, ...]:
    ceiling = arr[tz.plane]
    return tuple(i for i in range(arr.n) if i != tz.plane and in_conflict(ceiling, tz, arr[i]))


# ---------------------------------------------------------------------------
# independent oracle: exact polygon clipping


def _clip(poly, a, b, c):
    """Keep the part of ``poly`` with ``a*x + b*y + c >= 0``."""
    out = []
    for idx, p in enumerate(poly):
        q = poly[(idx + 1) % len(poly)]
        fp = a * p[0] + b * p[1] + c
        fq = a * q[0] + b * q[1] + c
        if fp >= 0:
            out.append(p)
        if (fp > 0 > fq) or (fp < 0 < fq):
            s = fp / (fp - fq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    return out


def polygon_area(poly) -> Fraction:
    s = Fraction(0)
    for idx, p in enumerate(poly):
        q = poly[(idx + 1) % len(poly)]
        s += p[0] * q[1] - q[0] * p[1]
    return abs(s) / 2


def _box_size(constraints) -> Fraction:
    """Half-width of a square holding every pairwise meeting point of the
    constraint lines and the point of each line nearest the origin."""
    big = Fraction(1)
    for a, b, c in constraints:
        n2 = a * a + b * b
        if n2:
            big = max(big, abs(a * c / n2), abs(b * c / n2))
    for (a1, b1, c1), (a2, b2, c2) in combinations(constraints, 2):
        det = a1 * b2 - a2 * b1
        if det:
            big = max(big, abs((b1 * c2 - b2 * c1) / det), abs((a2 * c1 - a1 * c2) / det))
    return 2 * big + 1


def conflict_oracle(arr: Arrangement, sample, tz: Trapezoid, q: int) -> bool:
    """Clip a box to the face of the ceiling plane, the trapezoid's x-range
    and ``ceiling > q``; conflict iff positive area remains."""
    h = arr[tz.plane]
    cons = []
    for g in sample:
        if g == tz.plane:
            continue
        pg = arr[g]
        cons.append((pg.a - h.a, pg.b - h.b, pg.c - h.c))  # g - h >= 0
    if tz.x_lo is not None:
        cons.append((Fraction(1), Fraction(0), -tz.x_lo))
    if tz.x_hi is not None:
        cons.append((Fraction(-1), Fraction(0), tz.x_hi))
    pq = arr[q]
    cons.append((h.a - pq.a, h.b - pq.b, h.c - pq.c))
    m = _box_size(cons)
    poly = [(-m, -m), (m, -m), (m, m), (-m, m)]
    for a, b, c in cons:
        poly = _clip(poly, a, b, c)
        if len(poly) < 3:
            return False
    return polygon_area(poly) > 0


# ---------------------------------------------------------------------------
# experiment


def sample_size(n: int, k: int) -> int:
    return n // (2 * k)


def run_trial(arr: Arrangement, sample) -> SampleTrial:
    sample = tuple(sorted(int(i) for i in sample))
    sub = [arr[i] for i in sample]
    if not arr.validated and exact.general_position_violations(sub):
        raise DegenerateSample(f"sample {sample} is not in general position")
    verts = tuple(tuple(sample[i] for i in t) for t in envelope_vertices(sub))
    traps = []
    for tz in decompose(sub):
        traps.append(Trapezoid(
            sample[tz.plane], tz.x_lo, tz.x_hi, tz.bottom, tz.top,
            None if tz.bottom_by is None else sample[tz.bottom_by],
            None if tz.top_by is None else sample[tz.top_by],
        ))
    conflicts = tuple(conflict_set(arr, tz) for tz in traps)
    return SampleTrial(sample, verts, tuple(traps), conflicts)


def clarkson_shor_sample(arr: Arrangement, k: int, trials: int, seed: int,
                         r: int | None = None, keep_details: bool = False) -> SampleResult:
    """Average over ``trials`` random samples of size ``floor(n/2k)`` (or
    ``r`` when given)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if r is None:
        r = sample_size(arr.n, k)
    if not 1 <= r <= arr.n:
        raise ValueError(f"sample size {r} out of range for n={arr.n}")
    rng = np.random.default_rng(seed)
    env, prisms, sizes, details = [], [], [], []
    for _ in range(trials):
        pick = rng.choice(arr.n, size=r, replace=False)
        tr = run_trial(arr, pick)
        env.append(len(tr.vertices))
        prisms.append(len(tr.trapezoids))
        sizes.append(tuple(len(c) for c in tr.conflicts))
        if keep_details:
            details.append(tr)
    return SampleResult(arr.n, k, r, trials, tuple(env), tuple(prisms), tuple(sizes), tuple(details))


def locate(arr: Arrangement, trial: SampleTrial, x, y, z) -> list[int]:
    """Indices of the prisms of ``trial`` containing ``(x, y, z)``."""
    return [
        idx for idx, tz in enumerate(trial.trapezoids)
        if tz.contains_xy(x, y) and z < arr[tz.plane].z(x, y)
    ]


def envelope_height(arr: Arrangement, sample, x, y) -> Fraction:
    return min(arr[i].z(x, y) for i in sample)
