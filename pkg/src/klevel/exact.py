"""Exact planes, intersections, levels and general-position validation.

Every quantity is a :class:`fractions.Fraction`; there are no tolerances
anywhere in this module.  A plane is the graph ``z = a*x + b*y + c``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(/\d+)?\s*$")


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction in lowest terms."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL_RE.match(value):
        q = Fraction(value.strip())
        return q
    raise ValueError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# geometric primitives


@dataclass(frozen=True)
class Plane:
    a: Fraction
    b: Fraction
    c: Fraction
    id: int = -1

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, parse_rational(getattr(self, name)))

    def z(self, x, y) -> Fraction:
        return self.a * x + self.b * y + self.c

    @property
    def gradient(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)


@dataclass(frozen=True)
class Point3:
    x: Fraction
    y: Fraction
    z: Fraction

    def __iter__(self):
        return iter((self.x, self.y, self.z))


@dataclass(frozen=True)
class IntersectionLine:
    """Line ``origin + t * direction``.

    ``pair`` is the pair of plane indices the line was cut from, or None for
    a synthetic line.
    """

    pair: tuple[int, int] | None
    origin: Point3
    direction: tuple[Fraction, Fraction, Fraction]

    def at(self, t) -> Point3:
        o, (dx, dy, dz) = self.origin, self.direction
        return Point3(o.x + t * dx, o.y + t * dy, o.z + t * dz)

    def offset_from(self, plane: Plane) -> tuple[Fraction, Fraction]:
        """Return ``(alpha, beta)`` with ``z_line(t) - z_plane(t) = alpha + beta*t``."""
        o, (dx, dy, dz) = self.origin, self.direction
        alpha = o.z - plane.z(o.x, o.y)
        beta = dz - plane.a * dx - plane.b * dy
        return alpha, beta

    def crossing_parameter(self, plane: Plane) -> Fraction | None:
        alpha, beta = self.offset_from(plane)
        if beta == 0:
            return None
        return -alpha / beta


# ---------------------------------------------------------------------------
# errors


class GeometryError(ValueError):
    pass


class ParallelPlanesError(GeometryError):
    def __init__(self, i, j):
        super().__init__(f"planes {i} and {j} are parallel")
        self.witness = (i, j)


class DegenerateTripleError(GeometryError):
    def __init__(self, i, j, k):
        super().__init__(f"planes {i}, {j}, {k} do not meet in a single point")
        self.witness = (i, j, k)


class NonGenericPointError(GeometryError):
    pass


@dataclass(frozen=True)
class Violation:
    """One failed general-position condition and the indices that witness it."""

    condition: str
    witness: tuple

    def to_json(self) -> dict:
        return {"condition": self.condition, "witness": _jsonable(self.witness)}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (tuple, list, Point3)):
        return [_jsonable(o) for o in obj]
    return obj


class GeneralPositionError(GeometryError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        names = sorted({v.condition for v in self.violations})
        super().__init__(f"{len(self.violations)} general-position violation(s): {', '.join(names)}")

    def report(self) -> dict:
        return {"ok": False, "violations": [v.to_json() for v in self.violations]}


CONDITIONS = (
    "IdenticalPlanes",
    "ParallelPlanes",
    "DuplicateIntercept",
    "VerticalProjection",
    "ThreeShareLine",
    "LineParallelToPlane",
    "FourConcurrent",
    "ParallelProjections",
    "ConcurrentProjections",
)


# ---------------------------------------------------------------------------
# arrangement


@dataclass(frozen=True)
class Arrangement:
    """Ordered planes; ``certificate`` maps each condition name to True when
    the condition was verified.  Unvalidated arrangements carry an empty
    certificate and are still usable by the pure primitives below."""

    planes: tuple[Plane, ...]
    certificate: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        planes = tuple(
            p if p.id == i else Plane(p.a, p.b, p.c, i) for i, p in enumerate(self.planes)
        )
        object.__setattr__(self, "planes", planes)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[Sequence]) -> "Arrangement":
        return cls(tuple(Plane(*c) for c in coeffs))

    @property
    def n(self) -> int:
        return len(self.planes)

    def __len__(self):
        return len(self.planes)

    def __getitem__(self, i) -> Plane:
        return self.planes[i]

    @property
    def validated(self) -> bool:
        return bool(self.certificate) and all(self.certificate.values())

    def subset(self, indices: Iterable[int]) -> "Arrangement":
        """Sub-arrangement on ``indices`` (re-indexed from 0, order kept)."""
        sub = tuple(self.planes[i] for i in indices)
        return Arrangement(tuple(Plane(p.a, p.b, p.c) for p in sub), dict(self.certificate))

    @cached_property
    def _vertex_cache(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {
            "planes": [
                {"a": format_rational(p.a), "b": format_rational(p.b), "c": format_rational(p.c)}
                for p in self.planes
            ]
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "Arrangement":
        return cls(tuple(Plane(d["a"], d["b"], d["c"]) for d in data["planes"]))

    @classmethod
    def loads(cls, text: str) -> "Arrangement":
        return cls.from_json(json.loads(text))


# ---------------------------------------------------------------------------
# intersections


def _line_of(p: Plane, q: Plane, pair=None) -> IntersectionLine:
    da, db, dc = p.a - q.a, p.b - q.b, q.c - p.c  # da*x + db*y = dc
    if da == 0 and db == 0:
        raise ParallelPlanesError(*(pair or (p.id, q.id)))
    dx, dy = db, -da
    if dx < 0 or (dx == 0 and dy < 0):
        dx, dy = -dx, -dy
    if da != 0:
        x, y = dc / da, Fraction(0)
    else:
        x, y = Fraction(0), dc / db
    origin = Point3(x, y, p.z(x, y))
    return IntersectionLine(pair, origin, (dx, dy, p.a * dx + p.b * dy))


def intersect_pair(arr: Arrangement, i: int, j: int) -> IntersectionLine:
    """Intersection line of planes ``i`` and ``j``.

    The direction is normalized so that ``dx > 0``, or ``dy > 0`` when
    ``dx == 0``; the origin is the point of the line on ``y = 0`` (or
    ``x = 0`` when the projected line is parallel to the x-axis).
    """
    if i == j:
        raise ValueError("intersect_pair needs two distinct planes")
    return _line_of(arr[i], arr[j], (i, j))


def _solve3(p: Plane, q: Plane, r: Plane):
    # a*x + b*y - z = -c for each plane, Cramer's rule
    rows = [(pl.a, pl.b, Fraction(-1), -pl.c) for pl in (p, q, r)]

    def det(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    base = [row[:3] for row in rows]
    d = det(base)
    if d == 0:
        return None
    sol = []
    for col in range(3):
        m = [list(row) for row in base]
        for k in range(3):
            m[k][col] = rows[k][3]
        sol.append(det(m) / d)
    return Point3(*sol)


def intersect_triple(arr: Arrangement, i: int, j: int, k: int) -> Point3:
    if len({i, j, k}) != 3:
        raise ValueError("intersect_triple needs three distinct planes")
    key = tuple(sorted((i, j, k)))
    cache = arr._vertex_cache
    pt = cache.get(key)
    if pt is None:
        pt = _solve3(arr[key[0]], arr[key[1]], arr[key[2]])
        if pt is None:
            raise DegenerateTripleError(*key)
        cache[key] = pt
    return pt


def _below(plane: Plane, x, y, z) -> bool:
    return plane.z(x, y) < z


def level(arr: Arrangement, p: Point3) -> int:
    """Number of planes passing strictly below ``p``."""
    return sum(1 for pl in arr.planes if _below(pl, p.x, p.y, p.z))


def side(plane: Plane, p: Point3) -> int:
    """Sign of ``z_p - plane(x_p, y_p)``: +1 when p is above the plane."""
    d = p.z - plane.z(p.x, p.y)
    return (d > 0) - (d < 0)


# ---------------------------------------------------------------------------
# validation


def _projected_line(p: Plane, q: Plane):
    """Projection of p ∩ q as ``(A, B, C)`` with ``A*x + B*y = C``."""
    return (p.a - q.a, p.b - q.b, q.c - p.c)


def _meet(l1, l2):
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return ((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)


class _PositionTracker:
    """Incremental general-position bookkeeping.

    ``check(plane)`` lists the violations that adding ``plane`` would
    create; ``add(plane)`` commits it.  Used by :func:`validate` (collect
    everything) and by the random generator (reject candidates).
    """

    def __init__(self):
        self.planes: list[Plane] = []
        self.lines: dict[tuple[int, int], tuple] = {}
        self.points: dict[tuple, set] = {}

    @staticmethod
    def _explained(lines: set) -> bool:
        # lines through the projection of one vertex p_ijk are its own three pairs
        idx = set()
        for pair in lines:
            idx.update(pair)
        return len(idx) <= 3

    def check(self, plane: Plane, concurrency: bool = True) -> tuple[list[Violation], dict]:
        m = len(self.planes)
        out: list[Violation] = []
        new_lines = {}
        for i, p in enumerate(self.planes):
            if p.gradient == plane.gradient:
                out.append(Violation("IdenticalPlanes" if p.c == plane.c else "ParallelPlanes", (i, m)))
                continue
            if p.c == plane.c:
                out.append(Violation("DuplicateIntercept", (i, m)))
            if p.b == plane.b:
                out.append(Violation("VerticalProjection", (i, m)))
            new_lines[(i, m)] = _projected_line(p, plane)
        four = set()
        for p, q in combinations(range(m), 2):
            if (p, q) not in self.lines or (p, m) not in new_lines or (q, m) not in new_lines:
                continue
            pt = _solve3(self.planes[p], self.planes[q], plane)
            if pt is None:
                o = _line_of(self.planes[p], self.planes[q]).origin
                shared = plane.z(o.x, o.y) == o.z
                out.append(Violation("ThreeShareLine" if shared else "LineParallelToPlane", (p, q, m)))
                continue
            for r in range(m):
                if r != p and r != q and self.planes[r].z(pt.x, pt.y) == pt.z:
                    four.add(tuple(sorted((p, q, r, m))))
        out.extend(Violation("FourConcurrent", w) for w in sorted(four))
        touched: dict[tuple, set] = {}
        seen = list(self.lines.items())
        for key, ln in new_lines.items():
            for other, ol in seen:
                pt = _meet(ln, ol)
                if pt is None:
                    # pairs sharing a plane are parallel only in degenerate triples
                    if not set(key) & set(other):
                        out.append(Violation("ParallelProjections", (other, key)))
                elif concurrency:
                    bucket = touched.setdefault(pt, set(self.points.get(pt, ())))
                    bucket.update((key, other))
            seen.append((key, ln))
        for lines in touched.values():
            if len(lines) >= 3 and not self._explained(lines):
                out.append(Violation("ConcurrentProjections", tuple(sorted(lines))))
        return out, new_lines

    def add(self, plane: Plane, new_lines=None):
        if new_lines is None:
            _, new_lines = self.check(plane, concurrency=False)
        seen = list(self.lines.items())
        for key, ln in new_lines.items():
            for other, ol in seen:
                pt = _meet(ln, ol)
                if pt is not None:
                    self.points.setdefault(pt, set()).update((key, other))
            seen.append((key, ln))
        self.lines.update(new_lines)
        self.planes.append(plane)

    def concurrency_violations(self) -> list[Violation]:
        return [
            Violation("ConcurrentProjections", tuple(sorted(lines)))
            for lines in self.points.values()
            if len(lines) >= 3 and not self._explained(lines)
        ]


def general_position_violations(planes: Sequence[Plane]) -> list[Violation]:
    """Every violated general-position condition, with witnesses.

    Besides the per-plane conditions (parallel, identical, shared line, line
    parallel to a third plane, four concurrent, distinct intercepts, no
    y-parallel projected line) two conditions on the projected intersection
    lines are enforced: no two disjoint pairs project to parallel lines, and
    no three projected lines are concurrent unless they are the three lines
    through one vertex.  These make every curtain a simple wiring diagram.
    """
    tracker = _PositionTracker()
    found: list[Violation] = []
    for p in planes:
        plane = Plane(p.a, p.b, p.c)
        vs, new_lines = tracker.check(plane, concurrency=False)
        found.extend(vs)
        tracker.add(plane, new_lines)
    found.extend(tracker.concurrency_violations())
    return found


def validate(planes) -> Arrangement:
    """Return a certified :class:`Arrangement` or raise
    :class:`GeneralPositionError` listing every violation."""
    if isinstance(planes, Arrangement):
        planes = planes.planes
    planes = [p if isinstance(p, Plane) else Plane(*p) for p in planes]
    if not planes:
        raise ValueError("an arrangement needs at least one plane")
    violations = general_position_violations(planes)
    if violations:
        raise GeneralPositionError(violations)
    return Arrangement(tuple(planes), {name: True for name in CONDITIONS})


def validation_report(planes) -> dict:
    try:
        validate(planes)
    except GeneralPositionError as exc:
        return exc.report()
    return {"ok": True, "violations": [], "certificate": {c: True for c in CONDITIONS}}
