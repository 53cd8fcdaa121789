"""The five predicate mutations used for mutation-sensitivity checks.

Each entry patches one module-level helper with a copy whose single
comparison is flipped.  Callers look helpers up at call time, so patching
the module attribute is enough; arrangements must be loaded inside the
patched context because levels and containments are memoized per instance.
"""

from __future__ import annotations

from contextlib import contextmanager
from unittest import mock

from klevel import corridors, diamonds, exact


def below_or_on(plane, x, y, z) -> bool:
    # level: "<" became "<="
    return plane.z(x, y) <= z


def interval_nonempty(lo, hi) -> bool:
    # line_in_corridor: "lo > hi" became "lo < hi"
    return lo is not None and hi is not None and lo < hi


def wedge_xnor(gamma, p, b, c) -> bool:
    # in_wedge: "!=" became "==" (the complementary double wedge)
    x, y = p[0], p[1]
    return diamonds._upper_side(gamma, b, x, y) == diamonds._upper_side(gamma, c, x, y)


def _right_side(gamma, b, x, y) -> bool:
    slope, offset = gamma.curves[b]
    return (y - offset) / slope < x


def wedge_vertical(gamma, p, b, c) -> bool:
    # wedge orientation: sides taken toward x -> +inf instead of y -> +inf
    x, y = p[0], p[1]
    return _right_side(gamma, b, x, y) != _right_side(gamma, c, x, y)


def houses_below(arr, a, b) -> bool:
    # housing rule: ">" became "<"
    return diamonds.intercept_key(arr[b]) < diamonds.intercept_key(arr[a])


MUTATIONS = {
    "level_strictness": (exact, "_below", below_or_on),
    "corridor_interval": (corridors, "_interval_empty", interval_nonempty),
    "in_wedge_xor": (diamonds, "in_wedge", wedge_xnor),
    "wedge_orientation": (diamonds, "in_wedge", wedge_vertical),
    "housing_rule": (diamonds, "_houses", houses_below),
}


@contextmanager
def mutated(name: str):
    module, attr, replacement = MUTATIONS[name]
    with mock.patch.object(module, attr, replacement):
        yield
