from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klevel import exact, fixtures, sweep
from klevel.sweep import (
    EMPTY_TRIANGLE,
    PASS_FIRST_RAY,
    TAKE_FIRST_RAY,
    SweepFront,
    WiringDiagram,
    validate_wiring,
)

from .conftest import FIXTURES, load_fixture


def kinds(trace):
    return [m.kind for m in trace.moves]


# --- wiring diagrams ------------------------------------------------------------


def test_two_wires():
    d = validate_wiring(2, (0, 1), (0,))
    assert d.final_order == (1, 0)


def test_three_wires_all_orders():
    d = validate_wiring(3, (1, 2, 3), (0, 1, 0))
    assert list(d.orders()) == [(1, 2, 3), (2, 1, 3), (2, 3, 1), (3, 2, 1)]
    assert len(d.events) == comb(3, 2)


def test_wiring_errors_carry_witnesses():
    with pytest.raises(sweep.PairSwapsTwice) as err:
        validate_wiring(2, (0, 1), (0, 0))
    assert err.value.witness[:2] == (1, 0)
    with pytest.raises(sweep.PairNeverSwaps) as err:
        validate_wiring(3, (0, 1, 2), (0,))
    assert set(err.value.witness) in ({0, 2}, {1, 2})
    with pytest.raises(sweep.InvalidAdjacency) as err:
        validate_wiring(3, (0, 1, 2), (2,))
    assert err.value.witness == (0, 2)
    with pytest.raises(sweep.InvalidOrder):
        validate_wiring(3, (0, 0, 1), ())


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n - 2), max_size=12))))
def test_accepts_iff_each_pair_swaps_once(case):
    n, events = case
    order = list(range(n))
    swaps = Counter()
    for p in events:
        swaps[frozenset(order[p:p + 2])] += 1
        order[p], order[p + 1] = order[p + 1], order[p]
    expected = all(swaps[frozenset(q)] == 1 for q in combinations(range(n), 2)) and len(swaps) == comb(n, 2) \
        and all(v == 1 for v in swaps.values())
    try:
        d = validate_wiring(n, tuple(range(n)), tuple(events))
        ok = True
        assert d.final_order == tuple(reversed(range(n)))
    except sweep.WiringError:
        ok = False
    assert ok == expected


def test_text_format_roundtrip():
    d = validate_wiring(3, (2, 0, 1), (1, 0, 1))
    assert d.dumps() == "3\n2 0 1\n1\n0\n1\n"
    assert WiringDiagram.loads(d.dumps()) == d


def test_without_drops_a_wire():
    d = validate_wiring(3, (1, 2, 3), (0, 1, 0))
    assert d.without(2) == WiringDiagram(2, (1, 3), (0,))


def test_non_pappus_fixture():
    d = fixtures.non_pappus_wiring()
    assert d.n == 9 and len(d.events) == 36
    assert WiringDiagram.loads((FIXTURES / "non_pappus.wd").read_text()) == d
    assert d != fixtures.pappus_wiring()
    # the Pappus configuration really has nine triple points
    pts = fixtures.crossing_points(fixtures.pappus_lines())
    assert Counter(len(v) for v in pts.values()) == Counter({3: 9, 2: 9})
    assert fixtures.PAPPUS_LINE in pts[fixtures.ninth_point()]


def crossings_above_oracle(diagram, start):
    """Crossings of the other wires that happen while ``start`` is below both."""
    order = list(diagram.initial_order)
    count = 0
    for _, p, u, v in diagram.swaps():
        if start not in (u, v) and order.index(start) > p + 1:
            count += 1
        order[p], order[p + 1] = order[p + 1], order[p]
    return count


@pytest.mark.parametrize("start", range(9))
def test_sweep_non_pappus_from_every_wire(start):
    d = fixtures.non_pappus_wiring()
    front = SweepFront.from_wire(d, start)
    trace = sweep.sweep_up(d.without(start), front)
    assert trace.count(EMPTY_TRIANGLE) == crossings_above_oracle(d, start)
    assert trace.count(PASS_FIRST_RAY) == 8
    assert trace.count(TAKE_FIRST_RAY) == 0
    assert all(len(set(m.xi)) == len(m.xi) for m in trace.moves)
    assert trace.moves[-1].xi == () and len(trace.moves[-1].below) == 8
    assert sweep.replay(trace)


# --- sweeping ------------------------------------------------------------------------


def test_one_triangle_then_two_rays():
    ext = validate_wiring(3, (2, 0, 1), (1, 0, 1))
    front = SweepFront.from_wire(ext, 0)
    trace = sweep.sweep_up(ext.without(0), front)
    assert kinds(trace) == [EMPTY_TRIANGLE, PASS_FIRST_RAY, PASS_FIRST_RAY]
    assert set(trace.moves[0].wires) == {1, 2}


def test_single_wire():
    ext = validate_wiring(2, (1, 0), (0,))
    trace = sweep.sweep_up(ext.without(0), SweepFront.from_wire(ext, 0))
    assert kinds(trace) == [PASS_FIRST_RAY]


def test_wires_entirely_above_are_taken():
    front = sweep.start_front((0, 1, 9), (0,), 9)
    assert front.above == {0, 1} and front.xi == ()
    trace = sweep.sweep_up(validate_wiring(2, (0, 1), (0,)), front)
    assert kinds(trace) == [TAKE_FIRST_RAY, TAKE_FIRST_RAY, EMPTY_TRIANGLE, PASS_FIRST_RAY, PASS_FIRST_RAY]
    assert sweep.predicted_moves(front) == {EMPTY_TRIANGLE: 1, PASS_FIRST_RAY: 2, TAKE_FIRST_RAY: 2}


def test_crossing_below_needs_downward_sweep():
    ext = validate_wiring(3, (0, 1, 2), (1, 0, 1))  # 1, 2 cross below 0 before meeting it
    assert crossings_above_oracle(ext, 0) == 0
    down = sweep.sweep_down(ext.without(0), SweepFront.from_wire(ext, 0, downward=True))
    assert kinds(down) == [EMPTY_TRIANGLE, PASS_FIRST_RAY, PASS_FIRST_RAY]
    up = sweep.sweep_up(ext.without(0), SweepFront.from_wire(ext, 0))
    assert kinds(up) == [PASS_FIRST_RAY, PASS_FIRST_RAY]


def test_direction_mismatch_rejected():
    ext = validate_wiring(2, (1, 0), (0,))
    with pytest.raises(ValueError):
        sweep.sweep_down(ext.without(0), SweepFront.from_wire(ext, 0))
    with pytest.raises(ValueError):
        sweep.sweep_up(ext.without(0), SweepFront.from_wire(ext, 0, downward=True))


def test_stuck_is_surfaced():
    bad = SweepFront((0, 1), frozenset(), frozenset(), ((0, (1,)), (1, ())), (1, 0))
    with pytest.raises(sweep.Stuck) as err:
        sweep.sweep_up(validate_wiring(2, (0, 1), (0,)), bad)
    assert err.value.front is bad


def test_illegal_moves_rejected():
    ext = validate_wiring(3, (2, 0, 1), (1, 0, 1))
    front = SweepFront.from_wire(ext, 0)
    with pytest.raises(sweep.IllegalMove):
        sweep.apply_move(front, PASS_FIRST_RAY, (front.xi[0],))
    with pytest.raises(sweep.IllegalMove):
        sweep.apply_move(front, TAKE_FIRST_RAY, (front.arc[0],))


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(6)), st.randoms(use_true_random=False))
def test_mirror_symmetry(perm, rnd):
    # random simple arrangement: bubble-sort a permutation into its reverse
    order = list(perm)
    target = list(reversed(perm))
    events = []
    rank = {w: i for i, w in enumerate(target)}
    while order != target:
        cand = [p for p in range(5) if rank[order[p]] > rank[order[p + 1]]]
        p = rnd.choice(cand)
        events.append(p)
        order[p], order[p + 1] = order[p + 1], order[p]
    ext = validate_wiring(6, tuple(perm), tuple(events))
    start = perm[rnd.randrange(6)]
    d = ext.without(start)
    down = sweep.sweep_down(d, SweepFront.from_wire(ext, start, downward=True))
    up_mirror = sweep.sweep_up(d.mirrored(), SweepFront.from_wire(ext.mirrored(), start))
    assert down.moves == up_mirror.moves
    up = sweep.sweep_up(d, SweepFront.from_wire(ext, start))
    assert up.count(EMPTY_TRIANGLE) + down.count(EMPTY_TRIANGLE) == comb(5, 2)


def test_trace_json():
    ext = validate_wiring(3, (2, 0, 1), (1, 0, 1))
    trace = sweep.sweep_up(ext.without(0), SweepFront.from_wire(ext, 0))
    data = json.loads(trace.dumps())
    assert [m["move"] for m in data] == kinds(trace)
    assert data[-1]["xi"] == [] and sorted(data[-1]["below"]) == [1, 2]


# --- curtains ----------------------------------------------------------------------


def test_curtain_three_planes():
    arr = load_fixture("gen_n3_b5_s1.json")
    cur = sweep.curtain_of(arr, 0, 1, 0)
    assert cur.diagram.n == 1 and cur.diagram.events == ()
    assert len(cur.curves) == 1 and cur.level_annotations == {2: True}


def test_curtain_five_planes(arr5):
    cur = sweep.curtain_of(arr5, 0, 1, 1)
    assert cur.diagram.n == 3 and len(cur.diagram.events) == 3


def curtain_crossing_oracle(arr, i, j):
    """x of the point where l_{c,d} pierces the vertical plane over l_{i,j},
    from a 3x3 solve: a_c x + b_c y + c_c = a_d x + b_d y + c_d and the
    vertical plane's equation."""
    pi, pj = arr[i], arr[j]
    out = []
    rest = [d for d in range(arr.n) if d not in (i, j)]
    for c, d in combinations(rest, 2):
        pc, pd = arr[c], arr[d]
        a1, b1, r1 = pc.a - pd.a, pc.b - pd.b, pd.c - pc.c
        a2, b2, r2 = pi.a - pj.a, pi.b - pj.b, pj.c - pi.c
        det = a1 * b2 - a2 * b1
        x = (r1 * b2 - r2 * b1) / det
        out.append((x, (c, d)))
    out.sort()
    return [p for _, p in out]


def test_curtain_event_order_matches_oracle(arr10):
    for i, j in combinations(range(arr10.n), 2):
        cur = sweep.curtain_of(arr10, i, j, 3)
        got = [tuple(sorted((u, v))) for _, _, u, v in cur.diagram.swaps()]
        assert got == curtain_crossing_oracle(arr10, i, j)
        params = [t for t, _, _ in cur.crossings()]
        assert params == sorted(params) and len(set(params)) == len(params)


def test_curtain_sweeps_ten_planes(arr10):
    n = arr10.n
    for i, j in combinations(range(n), 2):
        cur = sweep.curtain_of(arr10, i, j, 0)
        above, below = cur.crossings_above(), cur.crossings_below()
        assert above + below == comb(n - 2, 2)
        assert min(above, below) <= Fraction(comb(n - 2, 2), 2)
        up = sweep.sweep_up(cur.diagram, cur.start_front())
        assert up.count(EMPTY_TRIANGLE) == above and up.count(PASS_FIRST_RAY) == n - 2
        assert kinds(up).count(TAKE_FIRST_RAY) == 0
        down = sweep.sweep_down(cur.diagram, cur.start_front(downward=True))
        assert down.count(EMPTY_TRIANGLE) == below
        chosen = sweep.sweep_curtain(cur)
        assert chosen.count(EMPTY_TRIANGLE) == min(above, below)
        for tr in (up, down):
            assert all(len(set(m.xi)) == len(m.xi) for m in tr.moves)
            assert sweep.replay(tr)


def point_over_base(arr, i, j, c, d):
    """The 3D point of l_{c,d} lying over the projected line l_{i,j}."""
    line = exact.intersect_pair(arr, c, d)
    a1, b1, r1 = arr[i].a - arr[j].a, arr[i].b - arr[j].b, arr[j].c - arr[i].c
    o, (dx, dy, _) = line.origin, line.direction
    return line.at((r1 - a1 * o.x - b1 * o.y) / (a1 * dx + b1 * dy))


def test_classify_single_other_curve(arr5):
    """With three curves c, d, e: e is entered if above the crossing, left if below."""
    seen = set()
    for i, j in combinations(range(5), 2):
        cur = sweep.curtain_of(arr5, i, j, 0)
        for c, d in combinations([cv.plane for cv in cur.curves], 2):
            if cur.crossing(c, d)[1] <= 0:
                continue
            (e,) = [cv.plane for cv in cur.curves if cv.plane not in (c, d)]
            v = exact.intersect_triple(arr5, c, d, e)
            k = sum(1 for q in range(5) if q not in (i, j) and arr5[q].z(v.x, v.y) < v.z)
            p = point_over_base(arr5, i, j, c, d)
            e_above = arr5[e].z(p.x, p.y) > p.z
            assert sweep.classify_crossing(cur, c, d, k) == ((1, 0) if e_above else (0, 1))
            assert sweep.classify_crossing(cur, c, d, k + 1) == (0, 0)
            seen.add(e_above)
    assert seen == {True, False}


def test_classify_below_base_line_rejected(arr5):
    for i, j in combinations(range(5), 2):
        cur = sweep.curtain_of(arr5, i, j, 0)
        for c, d in combinations([cv.plane for cv in cur.curves], 2):
            if cur.crossing(c, d)[1] < 0:
                with pytest.raises(ValueError):
                    sweep.classify_crossing(cur, c, d, 0)
                return
    raise AssertionError("fixture has no crossing below a base line")


def test_classify_bound_ten_planes(arr10):
    for i, j in combinations(range(arr10.n), 2):
        cur = sweep.curtain_of(arr10, i, j, 0)
        wires = [cv.plane for cv in cur.curves]
        for c, d in combinations(wires, 2):
            if cur.crossing(c, d)[1] > 0:
                for k in range(arr10.n - 4):
                    enters, exits = sweep.classify_crossing(cur, c, d, k)
                    assert abs(enters - exits) <= 2
