"""Verification suite and batch experiments.

``verify_all`` runs every inequality and identity check on one arrangement
and returns a :class:`VerificationReport`; nothing in here raises on a
failed check.  ``experiment_batch`` tabulates corridor and immersion counts
over seeded random instances.
"""

from __future__ import annotations

import csv
import io
import os
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import corridors, diamonds, exact, sweep
from .exact import Arrangement
from .generate import GenConfig, RejectionBudgetExhausted, gen_random  # noqa: F401  (re-export)

WORKERS_ENV = "KLEVEL_WORKERS"
CSV_COLUMNS = ("n", "k", "trial", "seed", "Ck", "Xk", "lovasz_max", "diamond_sum", "bound_ok")


@dataclass
class ReportRow:
    check: str
    params: dict
    observed: object
    bound: object
    ok: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "observed": exact._jsonable(self.observed),
            "bound": exact._jsonable(self.bound),
            "ok": self.ok,
            "witness": exact._jsonable(self.witness),
        }


@dataclass
class VerificationReport:
    n: int
    rows: list[ReportRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list[ReportRow]:
        return [r for r in self.rows if not r.ok]

    def checks(self) -> set[str]:
        return {r.check for r in self.rows}

    def to_json(self) -> dict:
        return {"n": self.n, "ok": self.ok, "rows": [r.to_json() for r in self.rows]}

    def summary(self) -> str:
        lines = []
        for name in sorted(self.checks()):
            rows = [r for r in self.rows if r.check == name]
            bad = sum(not r.ok for r in rows)
            lines.append(f"{name:22s} {len(rows) - bad}/{len(rows)} ok")
        return "\n".join(lines)


class _Recorder:
    def __init__(self, arr: Arrangement, report: VerificationReport):
        self.arr = arr
        self.report = report

    def add(self, check, params, observed, bound, ok, witness=None):
        if not ok:
            witness = dict(witness or {})
            witness.setdefault("arrangement", self.arr.to_json())
        self.report.rows.append(ReportRow(check, params, observed, bound, bool(ok), witness))


# ---------------------------------------------------------------------------
# individual checks; each appends rows to the recorder


def _check_partition(rec: _Recorder, ctx):
    arr = rec.arr
    total = sum(len(corridors.enumerate_k_corridors(arr, k)) for k in ctx["ks"])
    rec.add("partition", {}, total, comb(arr.n, 3), total == comb(arr.n, 3),
            {"profile": [len(corridors.enumerate_k_corridors(arr, k)) for k in ctx["ks"]]})


def _check_antipodality(rec: _Recorder, ctx):
    arr = rec.arr
    worst = {k: (0, None) for k in ctx["ks"]}
    # the first and last schedule points lie past every crossing, i.e. they see
    # the configuration at either end of the line; recorded only
    ends = {k: 0 for k in ctx["ks"]}
    for i, j in combinations(range(arr.n), 2):
        sched = corridors.antipodality_schedule(arr, i, j)
        for idx, p in enumerate(sched):
            counts = corridors.antipodality_counts(arr, i, j, p)
            for k, (up, down) in counts.items():
                diff = abs(up - down)
                if k not in worst:
                    continue
                if idx in (0, len(sched) - 1):
                    ends[k] = max(ends[k], diff)
                if diff > worst[k][0]:
                    worst[k] = (diff, {"pair": [i, j], "point": list(p), "up": up, "down": down})
    for k in ctx["ks"]:
        diff, wit = worst[k]
        rec.add("antipodality", {"k": k, "ends_max": ends[k]}, diff, 2, diff <= 2, wit)


def _check_lovasz(rec: _Recorder, ctx):
    arr = rec.arr
    bound = corridors.lovasz_bound(arr.n)
    for relative in (False, True):
        name = "lovasz_relative" if relative else "lovasz"
        for k in ctx["ks"]:
            best, wit, total = 0, None, 0
            for i, j in combinations(range(arr.n), 2):
                c = corridors.lovasz_count(arr, i, j, k, relative=relative)
                total += c
                if c > best or wit is None:
                    best, wit = max(best, c), {"pair": [i, j], "count": c}
            if not relative:
                ctx.setdefault("lovasz_total", {})[k] = total
                ctx.setdefault("lovasz_max", {})[k] = best
            rec.add(name, {"k": k}, best, bound, best <= bound, wit)


def _check_immersions(rec: _Recorder, ctx):
    arr = rec.arr
    n = arr.n
    for k in ctx["ks"]:
        xk, _ = corridors.count_immersions(arr, k)
        ctx.setdefault("xk", {})[k] = xk
        rec.add("xk_upper", {"k": k}, xk, Fraction(3 * n**4, 4), xk <= Fraction(3 * n**4, 4))
        rec.add("xk_pairs", {"k": k}, xk, corridors.upper_bound_xk(n), xk <= corridors.upper_bound_xk(n))
        lt = ctx.get("lovasz_total", {}).get(k)
        if lt is None:
            lt = sum(corridors.lovasz_count(arr, i, j, k) for i, j in combinations(range(n), 2))
        rec.add("xk_counting", {"k": k}, xk, 3 * lt, xk <= 3 * lt)


def _check_diamonds(rec: _Recorder, ctx):
    arr = rec.arr
    n = arr.n
    for k in ctx["ks"]:
        ck = len(corridors.enumerate_k_corridors(arr, k))
        edges_total = 0
        delta_sum = 0
        images = {}
        euler_bad = crossing_bad = None
        crossing_applicable = 0
        direction_bad = None
        for a in range(n):
            g = diamonds.build_level_graph(arr, a, k)
            edges_total += len(g.edges)
            delta, records = diamonds.count_diamonds(g)
            delta_sum += delta
            if not diamonds.check_euler_bound(g, delta) and euler_bad is None:
                euler_bad = {"base": a, "edges": len(g.edges), "m": g.m, "diamonds": delta}
            cb = diamonds.check_crossing_bound(g, delta)
            if cb is not None:
                crossing_applicable += 1
                if not cb and crossing_bad is None:
                    crossing_bad = {"base": a, "edges": len(g.edges), "m": g.m, "diamonds": delta}
            for r in records:
                try:
                    pair = diamonds.diamond_to_immersion(arr, g, r)
                except diamonds.NoContainment as exc:
                    direction_bad = direction_bad or exc.artifact
                    continue
                key = (pair.inner, pair.outer)
                if key in images and direction_bad is None:
                    direction_bad = {"duplicate": pair.to_json(), "diamonds": [images[key], r.to_json()],
                                     "base": a, "k": k}
                images.setdefault(key, r.to_json())
        rec.add("housing", {"k": k}, edges_total, ck, edges_total == ck)
        if k == 0:
            _check_housing_side(rec)
        rec.add("euler", {"k": k}, euler_bad is None, True, euler_bad is None, euler_bad)
        rec.add("crossing", {"k": k, "applicable": crossing_applicable}, crossing_bad is None, True,
                crossing_bad is None, crossing_bad)
        xk = ctx.get("xk", {}).get(k)
        if xk is None:
            xk, _ = corridors.count_immersions(arr, k)
        rec.add("diamond_immersion", {"k": k}, delta_sum, xk, direction_bad is None and delta_sum <= xk,
                direction_bad or {"diamond_sum": delta_sum, "xk": xk})
        ctx.setdefault("diamond_sum", {})[k] = delta_sum
        lower = diamonds.immersion_lower_bound(n, ck)
        rec.add("xk_lower", {"k": k}, xk, lower, xk >= lower, {"ck": ck})
        cube_bound = 48 * n**8 + 64 * n**6
        rec.add("ck_cubed", {"k": k}, ck**3, cube_bound, ck**3 <= cube_bound)


def _check_housing_side(rec: _Recorder):
    """Far up the vertical axis every housed plane lies above its base plane
    and on the upper side of its curve."""
    arr = rec.arr
    bad = None
    for a in range(arr.n):
        g = diamonds.build_gamma(arr, a)
        far = 1 + max((abs(off) for _, off in g.curves.values()), default=0)
        for b in g.members:
            up = diamonds._upper_side(g, b, 0, far)
            above = arr[b].z(0, far) > arr[a].z(0, far)
            if not (up and above) and bad is None:
                bad = {"base": a, "member": b, "upper_side": up, "above_base": above}
    rec.add("housing_side", {}, bad is None, True, bad is None, bad)


def _curtain_order_oracle(arr: Arrangement, i: int, j: int):
    """Pairs (c, d) ordered by the x where ``l_{c,d}`` meets the vertical
    plane through ``l_{i,j}``, computed from the projected lines."""
    base = exact._projected_line(arr[i], arr[j])
    rest = [d for d in range(arr.n) if d not in (i, j)]
    # the base line is parametrized with increasing x (increasing y if it
    # projects to a vertical line)
    axis = 0 if exact.intersect_pair(arr, i, j).direction[0] != 0 else 1
    keyed = []
    for c, d in combinations(rest, 2):
        pt = exact._meet(base, exact._projected_line(arr[c], arr[d]))
        keyed.append((pt[axis], (c, d)))
    keyed.sort()
    return [p for _, p in keyed]


def _check_sweeps(rec: _Recorder, ctx):
    arr = rec.arr
    n = arr.n
    order_bad = up_bad = down_bad = side_bad = None
    classify = {k: (0, None) for k in ctx["ks"]}
    side_bound = Fraction(comb(n - 2, 2), 2)
    for i, j in combinations(range(arr.n), 2):
        cur = sweep.curtain_of(arr, i, j, 0)
        got = [tuple(sorted((u, v))) for _, _, u, v in cur.diagram.swaps()]
        if got != _curtain_order_oracle(arr, i, j) and order_bad is None:
            order_bad = {"pair": [i, j], "diagram": cur.diagram.dumps()}
        above, below = cur.crossings_above(), cur.crossings_below()
        if min(above, below) > side_bound and side_bad is None:
            side_bad = {"pair": [i, j], "above": above, "below": below}
        for downward in (False, True):
            front = cur.start_front(downward)
            try:
                trace = (sweep.sweep_down if downward else sweep.sweep_up)(cur.diagram, front)
                fine = (
                    trace.count(sweep.EMPTY_TRIANGLE) == (below if downward else above)
                    and trace.count(sweep.PASS_FIRST_RAY) == n - 2
                    and trace.count(sweep.TAKE_FIRST_RAY) == 0
                    and all(len(set(m.xi)) == len(m.xi) for m in trace.moves)
                    and sweep.replay(trace)
                )
                wit = {"pair": [i, j], "trace": trace.to_json()}
            except sweep.Stuck as exc:
                fine, wit = False, {"pair": [i, j], "stuck_xi": list(exc.front.xi)}
            if not fine:
                if downward and down_bad is None:
                    down_bad = wit
                elif not downward and up_bad is None:
                    up_bad = wit
        wires = [cv.plane for cv in cur.curves]
        for c, d in combinations(wires, 2):
            if cur.crossing(c, d)[1] <= 0:
                continue
            for k in ctx["ks"]:
                enters, exits = sweep.classify_crossing(cur, c, d, k)
                if abs(enters - exits) > classify[k][0]:
                    classify[k] = (abs(enters - exits),
                                   {"pair": [i, j], "crossing": [c, d], "enters": enters, "exits": exits})
    rec.add("curtain_order", {}, order_bad is None, True, order_bad is None, order_bad)
    rec.add("sweep_up", {}, up_bad is None, True, up_bad is None, up_bad)
    rec.add("sweep_down", {}, down_bad is None, True, down_bad is None, down_bad)
    rec.add("sweep_side", {}, side_bad is None, side_bound, side_bad is None, side_bad)
    for k in ctx["ks"]:
        diff, wit = classify[k]
        rec.add("classify_crossing", {"k": k}, diff, 2, diff <= 2, wit)


CHECKS = {
    "partition": _check_partition,
    "antipodality": _check_antipodality,
    "lovasz": _check_lovasz,
    "immersions": _check_immersions,
    "diamonds": _check_diamonds,
    "sweeps": _check_sweeps,
}


def verify_all(arr: Arrangement, checks=None) -> VerificationReport:
    """Run the named check groups (default: all) on ``arr``.  A check that
    raises is recorded as a failed row carrying the traceback."""
    report = VerificationReport(arr.n)
    rec = _Recorder(arr, report)
    ctx = {"ks": list(range(max(arr.n - 2, 0)))}
    for name in checks or CHECKS:
        try:
            CHECKS[name](rec, ctx)
        except Exception as exc:  # a crash is a failed check, not a crash of the suite
            rec.add(name, {}, type(exc).__name__, None, False,
                    {"error": str(exc), "traceback": traceback.format_exc(limit=4)})
    return report


# ---------------------------------------------------------------------------
# experiments


def cell_seed(seed: int, n: int, trial: int) -> int:
    """Per-(n, trial) seed; every k of a cell shares the instance."""
    ss = np.random.SeedSequence(seed, spawn_key=(n, trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> 1)


def _resolve_ks(ks, n):
    out = []
    for k in ks:
        k = n // 2 if k == "half" else int(k)
        if k not in out:
            out.append(k)
    return out


def _cell(args):
    n, trial, seed, ks, bound = args
    s = cell_seed(seed, n, trial)
    arr = gen_random(GenConfig(n, coord_bound=bound, seed=s))
    rows = []
    for k in _resolve_ks(ks, n):
        if n < 3 or k > n - 3:
            ck = xk = lmax = dsum = 0
        else:
            ck = len(corridors.enumerate_k_corridors(arr, k))
            xk, _ = corridors.count_immersions(arr, k)
            lmax = max(corridors.lovasz_count(arr, i, j, k) for i, j in combinations(range(n), 2))
            dsum = sum(diamonds.count_diamonds(diamonds.build_level_graph(arr, a, k))[0] for a in range(n))
        ok = (
            ck**3 <= 48 * n**8 + 64 * n**6
            and xk <= Fraction(3 * n**4, 4)
            and lmax <= max(corridors.lovasz_bound(n), 0)
            and dsum <= xk
            and xk >= diamonds.immersion_lower_bound(n, ck)
        )
        rows.append({"n": n, "k": k, "trial": trial, "seed": s, "Ck": ck, "Xk": xk,
                     "lovasz_max": lmax, "diamond_sum": dsum, "bound_ok": ok})
    return rows


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def experiment_batch(ns, ks, trials: int, seed: int, coord_bound: int = 20, workers=None) -> list[dict]:
    """One row per (n, k, trial), in that order whatever the worker count."""
    cells = [(n, t, seed, list(ks), coord_bound) for n in ns for t in range(trials)]
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_cell, cells))
    else:
        chunks = [_cell(c) for c in cells]
    return [row for chunk in chunks for row in chunk]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({**row, "bound_ok": int(row["bound_ok"])})
    return buf.getvalue()


def slope_summary(rows, value: str = "Ck") -> dict:
    """Least-squares slope of log(mean value) against log(n), per k, over
    the n with positive means.  Reported only."""
    out = {}
    for k in sorted({r["k"] for r in rows}):
        pts = []
        for n in sorted({r["n"] for r in rows if r["k"] == k}):
            vals = [r[value] for r in rows if r["k"] == k and r["n"] == n]
            m = float(np.mean(vals))
            if m > 0:
                pts.append((np.log(n), np.log(m)))
        if len(pts) >= 2:
            xs, ys = np.array(pts).T
            out[k] = float(np.polyfit(xs, ys, 1)[0])
    return out
