"""Acceptance criteria 1-10.  Each test records one PASS/FAIL line; the
lines are echoed in the terminal summary (see conftest)."""

from __future__ import annotations

import time
from contextlib import nullcontext
from itertools import combinations

import pytest

from klevel import diamonds, fixtures, harness, sampling, sweep
from klevel.generate import GenConfig, gen_random

from .conftest import load_fixture
from .mutations import MUTATIONS, mutated

RESULTS: list[str] = []

BATCH_SPEC = [(6 + i % 7, 1000 + i) for i in range(50)]  # (n, seed), n = 6..12
RUNTIME_LIMIT_N12 = 60.0  # seconds per arrangement


def record(number: int, title: str, ok: bool, detail: str):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def batch():
    out = []
    for n, seed in BATCH_SPEC:
        arr = gen_random(GenConfig(n, seed=seed))
        t0 = time.perf_counter()
        rep = harness.verify_all(arr)
        out.append((arr, rep, time.perf_counter() - t0))
    return out


def rows(batch, *checks):
    return [(arr, r) for arr, rep, _ in batch for r in rep.rows if r.check in checks]


def summarize(selected):
    bad = [r for _, r in selected if not r.ok]
    return bad, f"{len(selected) - len(bad)}/{len(selected)} rows ok over {len({id(a) for a, _ in selected})} arrangements"


def test_criterion_01_antipodality(batch):
    sel = rows(batch, "antipodality")
    bad, text = summarize(sel)
    worst = max(r.observed for _, r in sel)
    ends = max(r.params["ends_max"] for _, r in sel)  # informational only
    slowest = max(dt for arr, _, dt in batch if arr.n == 12)
    ok = not bad and worst <= 2 and slowest < RUNTIME_LIMIT_N12
    assert record(1, "antipodality |up-down| <= 2", ok,
                  f"{text}, max difference {worst} (beyond all crossings {ends}), slowest full suite at n=12 {slowest:.1f}s")


def test_criterion_02_containing_corridors(batch):
    sel = rows(batch, "lovasz", "lovasz_relative")
    bad, text = summarize(sel)
    ratio = max(r.observed / r.bound for _, r in sel if r.bound)
    assert record(2, "containing k-corridors <= (n-2)(n-3)/2", not bad, f"{text}, max count/bound {ratio:.3f}")


def test_criterion_03_xk_upper(batch):
    sel = rows(batch, "xk_upper", "xk_counting", "xk_pairs")
    bad, text = summarize(sel)
    assert record(3, "X^k <= 3n^4/4 and X^k <= 3*lovasz_total", not bad, text)


def test_criterion_04_partition(batch):
    sel = rows(batch, "partition")
    bad, text = summarize(sel)
    assert record(4, "sum_k |C^k| = C(n,3)", not bad, text)


def test_criterion_05_housing(batch):
    sel = rows(batch, "housing", "housing_side")
    bad, text = summarize(sel)
    assert record(5, "sum_a |E_a^k| = |C^k|", not bad, text)


def test_criterion_06_diamond_bounds(batch):
    sel = rows(batch, "euler", "crossing")
    bad, text = summarize(sel)
    applicable = sum(r.params.get("applicable", 0) for _, r in sel if r.check == "crossing")
    # level graphs at this size never exceed 4m edges, so the crossing branch
    # is also exercised on complete graphs over the 12 members of a dense family
    arr = load_fixture("plane13_dense.json")
    a = max(range(arr.n), key=lambda i: len(diamonds.build_gamma(arr, i)))
    g = diamonds.build_gamma(arr, a)
    dense = diamonds.LevelGraph(g, -1, frozenset(combinations(g.members, 2)))
    delta, _ = diamonds.count_diamonds(dense)
    dense_ok = bool(diamonds.check_crossing_bound(dense, delta)) and diamonds.check_euler_bound(dense, delta)
    assert record(6, "Euler and crossing bounds on G_a^k", not bad and dense_ok,
                  f"{text}, crossing bound applicable to {applicable} batch graphs; "
                  f"complete graph m={len(g)}: delta {delta} >= {float(diamonds.crossing_lower_bound(dense)):.1f}")


def test_criterion_07_diamond_to_immersion(batch):
    sel = rows(batch, "diamond_immersion", "xk_lower", "ck_cubed")
    bad, text = summarize(sel)
    diamonds_total = sum(r.observed for _, r in sel if r.check == "diamond_immersion")
    assert record(7, "diamonds map injectively to immersions; lower-bound chain", not bad,
                  f"{text}, {diamonds_total} diamonds mapped")


def test_criterion_08_sweep(batch):
    sel = rows(batch, "sweep_up", "sweep_down", "curtain_order", "classify_crossing", "sweep_side")
    bad, text = summarize(sel)
    d = fixtures.non_pappus_wiring()
    np_ok = True
    for start in range(d.n):
        front = sweep.SweepFront.from_wire(d, start)
        try:
            trace = sweep.sweep_up(d.without(start), front)
        except sweep.Stuck:
            np_ok = False
            continue
        expected = sweep.predicted_moves(front)
        np_ok &= {k: trace.count(k) for k in expected} == expected
        np_ok &= all(len(set(m.xi)) == len(m.xi) for m in trace.moves)
    curtains = sum(a.n * (a.n - 1) // 2 for a, _, _ in batch)
    assert record(8, "sweep engine on curtains and the non-Pappus diagram", not bad and np_ok,
                  f"{text} ({curtains} curtains), non-Pappus sweeps from all 9 wires {'ok' if np_ok else 'FAILED'}")


def test_criterion_09_sampling():
    arr = load_fixture("plane14.json")
    ok = True
    notes = []
    for k in (2, 3):
        res = sampling.clarkson_shor_sample(arr, k, 20, 2024, keep_details=True)
        env_ok = all(v <= 2 * res.r for v in res.envelope_complexity)
        exact_ok = all(
            conf == tuple(q for q in range(arr.n) if q != tz.plane and sampling.conflict_oracle(arr, tr.sample, tz, q))
            for tr in res.details
            for tz, conf in zip(tr.trapezoids, tr.conflicts)
        )
        again = sampling.clarkson_shor_sample(arr, k, 20, 2024)
        repro = again.statistic().hex() == res.statistic().hex() and again.conflict_sizes == res.conflict_sizes
        ok &= env_ok and exact_ok and repro
        notes.append(f"k={k} r={res.r} max envelope {max(res.envelope_complexity)} "
                     f"statistic {res.statistic():.2f} ratio {res.ratio():.2f}")
    assert record(9, "sampling: envelope <= 2r, exact conflicts, reproducible", ok, "; ".join(notes))


def test_criterion_10_mutations():
    fixture_set = ("plane6_diamond.json", "plane8.json", "plane10.json")
    caught = {}
    for name in list(MUTATIONS) + [None]:
        failed = set()
        with mutated(name) if name else nullcontext():
            for fx in fixture_set:
                failed |= {r.check for r in harness.verify_all(load_fixture(fx)).failures()}
        caught[name] = failed
    clean = not caught.pop(None)
    ok = clean and all(caught.values())
    detail = ", ".join(f"{n}->{'/'.join(sorted(c)) or 'MISSED'}" for n, c in caught.items())
    assert record(10, "each predicate mutation breaks verify_all", ok, detail)
