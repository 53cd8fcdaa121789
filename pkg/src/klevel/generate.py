"""Seeded random arrangements in general position (rejection sampling)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact import CONDITIONS, Arrangement, Plane, _PositionTracker


class RejectionBudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class GenConfig:
    n: int
    coord_bound: int = 20
    seed: int = 0
    max_rejections: int = 10_000

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.coord_bound < 1:
            raise ValueError("coord_bound must be at least 1")


def gen_random(cfg: GenConfig) -> Arrangement:
    """Integer-coefficient planes in ``[-bound, bound]``, drawn one at a time;
    a candidate that breaks any general-position condition is redrawn."""
    rng = np.random.default_rng(cfg.seed)
    tracker = _PositionTracker()
    rejections = 0
    while len(tracker.planes) < cfg.n:
        a, b, c = (int(v) for v in rng.integers(-cfg.coord_bound, cfg.coord_bound + 1, size=3))
        cand = Plane(a, b, c)
        violations, new_lines = tracker.check(cand)
        if violations:
            rejections += 1
            if rejections > cfg.max_rejections:
                raise RejectionBudgetExhausted(
                    f"gave up after {cfg.max_rejections} rejections with {len(tracker.planes)} planes"
                )
            continue
        tracker.add(cand, new_lines)
    return Arrangement(tuple(tracker.planes), {name: True for name in CONDITIONS})
