"""Command-line entry point (``klevel`` / ``python -m klevel``).

Every subcommand exits 0 iff all of its checks pass.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import corridors, exact, harness, sampling, sweep
from .generate import GenConfig, RejectionBudgetExhausted, gen_random


def _load(path) -> exact.Arrangement:
    arr = exact.Arrangement.loads(Path(path).read_text())
    return exact.validate(arr)


def _int_list(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part == "half":
            out.append("half")
        elif part:
            out.append(int(part))
    return out


def cmd_gen(args) -> int:
    try:
        arr = gen_random(GenConfig(args.n, args.bound, args.seed, args.max_rejections))
    except RejectionBudgetExhausted as exc:
        print(exc, file=sys.stderr)
        return 1
    text = arr.dumps()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_verify(args) -> int:
    arr = _load(args.inp)
    groups = None
    if args.check:
        unknown = [c for c in args.check if c not in harness.CHECKS]
        if unknown:
            print(f"unknown check group(s): {', '.join(unknown)}; "
                  f"choose from {', '.join(harness.CHECKS)}", file=sys.stderr)
            return 2
        groups = args.check
    report = harness.verify_all(arr, groups)
    if args.json:
        print(json.dumps(report.to_json(), indent=1))
    else:
        print(report.summary())
        for row in report.failures():
            print(f"FAIL {row.check} {row.params}: observed {row.observed}, bound {row.bound}")
    return 0 if report.ok else 1


def cmd_levels(args) -> int:
    arr = _load(args.inp)
    prof = corridors.level_profile(arr)
    for k, c in enumerate(prof):
        print(f"k={k}\t|C^k|={c}")
    from math import comb

    ok = sum(prof) == comb(arr.n, 3)
    print(f"total {sum(prof)} (C(n,3) = {comb(arr.n, 3)})")
    return 0 if ok else 1


def cmd_immersions(args) -> int:
    arr = _load(args.inp)
    xk, pairs = corridors.count_immersions(arr, args.k)
    bound = Fraction(3 * arr.n**4, 4)
    print(f"X^{args.k} = {xk}  (3n^4/4 = {float(bound):g}, counting bound {corridors.upper_bound_xk(arr.n)})")
    if args.list:
        for p in pairs:
            print(json.dumps(p.to_json()))
    return 0 if xk <= corridors.upper_bound_xk(arr.n) and xk <= bound else 1


def cmd_sweep(args) -> int:
    if args.wiring:
        diagram = sweep.WiringDiagram.loads(Path(args.wiring).read_text())
        start = args.start if args.start is not None else diagram.initial_order[-1]
        front = sweep.SweepFront.from_wire(diagram, start)
        swept = diagram.without(start)
        trace = sweep.sweep_up(swept, front)
        expected = sweep.predicted_moves(front)
    else:
        if not args.inp:
            print("--curtain needs --in", file=sys.stderr)
            return 2
        arr = _load(args.inp)
        i, j = (int(v) for v in args.curtain.split(","))
        cur = sweep.curtain_of(arr, i, j, args.k)
        trace = sweep.sweep_curtain(cur)
        expected = sweep.predicted_moves(trace.start)
    print(trace.dumps())
    counts = {kind: trace.count(kind) for kind in expected}
    ok = counts == expected and all(len(set(m.xi)) == len(m.xi) for m in trace.moves)
    print(f"moves {counts} expected {expected}", file=sys.stderr)
    return 0 if ok else 1


def cmd_experiment(args) -> int:
    rows = harness.experiment_batch(_int_list(args.ns), _int_list(args.ks), args.trials, args.seed,
                                    coord_bound=args.bound)
    text = harness.rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    for k, slope in harness.slope_summary(rows).items():
        print(f"k={k}: log-log slope of |C^k| vs n = {slope:.3f}", file=sys.stderr)
    return 0 if all(r["bound_ok"] for r in rows) else 1


def cmd_sample(args) -> int:
    arr = _load(args.inp)
    res = sampling.clarkson_shor_sample(arr, args.k, args.trials, args.seed)
    print(json.dumps(res.to_json(), indent=1))
    return 0 if all(v <= 2 * res.r for v in res.envelope_complexity) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="klevel", description="k-levels of plane arrangements, checked exactly")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="random arrangement in general position")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rejections", type=int, default=10_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--check", action="append", help=f"one of: {', '.join(harness.CHECKS)}")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("levels", help="corridor counts per level")
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("immersions", help="count immersed k-corridor pairs")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_immersions)

    p = sub.add_parser("sweep", help="sweep a wiring diagram or a curtain")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--wiring")
    src.add_argument("--curtain", help="i,j")
    p.add_argument("--in", dest="inp")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--start", type=int, help="start wire for --wiring (default: lowest wire at the left)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("experiment", help="batch experiment, CSV output")
    p.add_argument("--ns", required=True, help="e.g. 6..12 or 6,8,10")
    p.add_argument("--ks", required=True, help="e.g. 1,2,half")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=20)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("sample", help="random-sample conflict experiment")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (exact.GeneralPositionError, sweep.WiringError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
