"""Command line entry points.

    crimewave simulate <scenario> --out <dir> [--nx N --ny N --override k=v]
    crimewave audit <run-dir>
    crimewave classify <scenario> --grids 64,128,256
    crimewave convergence --test {diffusion,advection,temporal,all}

Exit codes: 0 for completed runs and passing checks (a blow-up stop is a
completed run), 1 for failed runs or failing checks, 2 for usage errors.
"""
from __future__ import annotations

import argparse
import sys

from .errors import CrimewaveError
from .verification import (
    REL_EXPECTED_ADVECTION,
    REL_EXPECTED_DIFFUSION,
    REL_EXPECTED_TEMPORAL,
    diffusion_convergence,
    full_scheme_convergence,
    temporal_order,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crimewave", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one scenario and write its artifacts")
    p_sim.add_argument("scenario", help="path to a scenario file")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--nx", type=int, default=None, help="override grid.nx")
    p_sim.add_argument("--ny", type=int, default=None, help="override grid.ny")
    p_sim.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any scenario key, repeatable",
    )

    p_audit = sub.add_parser("audit", help="run diagnostics audits on a finished run")
    p_audit.add_argument("run_dir", help="directory written by simulate")

    p_cls = sub.add_parser("classify", help="grid-refinement classification of peak growth")
    p_cls.add_argument("scenario", help="path to a scenario file")
    p_cls.add_argument("--grids", default="64,128,256", help="comma-separated cell counts")

    p_conv = sub.add_parser("convergence", help="manufactured-solution order checks")
    p_conv.add_argument(
        "--test",
        default="all",
        choices=("diffusion", "advection", "temporal", "all"),
    )
    return parser


def _cmd_simulate(args) -> int:
    from .runio import run_scenario
    from .scenario import apply_overrides, load_scenario

    scenario = load_scenario(args.scenario)
    overrides = {}
    for item in args.override:
        if "=" not in item:
            print(f"error: --override expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 2
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    if args.nx is not None:
        overrides["grid.nx"] = args.nx
    if args.ny is not None:
        overrides["grid.ny"] = args.ny
    if overrides:
        scenario = apply_overrides(scenario, overrides)
    manifest = run_scenario(scenario, args.out)
    print(f"scenario {scenario.name}: {manifest.final_status}")
    print(f"  steps: {manifest.stats['steps']}  wall: {manifest.wall_time_s:.2f}s")
    print(f"  peak sup u: {manifest.stats['peak_linf_u']:.6g}")
    print(f"  outputs in {args.out}: {len(manifest.files)} files")
    if manifest.stats["termination"]:
        print(f"  termination: {manifest.stats['termination']}")
    return 1 if manifest.final_status == "failed" else 0


def _cmd_audit(args) -> int:
    from .diagnostics import boundedness_audit, min_v_lower_bound_check
    from .runio import DIAGNOSTICS_NAME, load_manifest, read_diagnostics_csv
    from pathlib import Path

    manifest = load_manifest(args.run_dir)
    m = float(manifest.scenario["model.m"])
    b2 = float(manifest.scenario.get("model.b2", 1.0))
    rec = read_diagnostics_csv(Path(args.run_dir) / DIAGNOSTICS_NAME, m=m)

    rows = []
    ok_all = True
    v0_min = float(manifest.stats["v0_min"])
    ok, worst = min_v_lower_bound_check(rec, v0_min)
    rows.append(("min-v lower bound", ok, f"worst ratio {worst:.6g}"))
    ok_all &= ok

    try:
        report = boundedness_audit(rec, m, constant_positive_b2=b2 > 0.0)
        for mon in report.monitors:
            note = f"sup {mon.sup:.6g}, last/mid {mon.last_quarter_sup:.4g}/{mon.middle_half_sup:.4g}"
            if report.assumptions_met:
                rows.append((f"plateau {mon.name}", mon.plateauing, note))
                ok_all &= mon.plateauing
            else:
                label = "plateauing" if mon.plateauing else "not plateauing"
                rows.append((f"monitor {mon.name} (informational)", True, f"{label}; {note}"))
    except CrimewaveError as err:
        rows.append(("boundedness audit", False, str(err)))
        ok_all = False

    width = max(len(r[0]) for r in rows)
    for name, ok, note in rows:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {note}")
    return 0 if ok_all else 1


def _cmd_classify(args) -> int:
    from .diagnostics import refinement_blowup_classifier
    from .scenario import load_scenario

    scenario = load_scenario(args.scenario)
    try:
        sizes = [int(x) for x in args.grids.split(",") if x.strip()]
    except ValueError:
        print(f"error: --grids expects integers, got {args.grids!r}", file=sys.stderr)
        return 2
    grids = [(n, n) for n in sizes]
    result = refinement_blowup_classifier(scenario, grids)
    print(f"classification: {result.label.value}")
    for (nx, ny), peak, sat, status in zip(
        result.grids, result.peaks, result.saturated, result.statuses
    ):
        mark = " (saturated)" if sat else ""
        print(f"  {nx}x{ny}: peak sup u = {peak:.6g}{mark}  [{status}]")
    return 0


def _cmd_convergence(args) -> int:
    ok = True
    if args.test in ("diffusion", "all"):
        res = diffusion_convergence()
        lo, hi = REL_EXPECTED_DIFFUSION
        good = all(lo <= r <= hi for r in res.ratios_u)
        ok &= good
        print(f"diffusion path sizes {res.sizes}:")
        print(f"  u errors {['%.3e' % e for e in res.errors_u]}")
        print(f"  u ratios {['%.3f' % r for r in res.ratios_u]}  expected [{lo}, {hi}]  "
              f"{'PASS' if good else 'FAIL'}")
    if args.test in ("advection", "all"):
        res = full_scheme_convergence()
        good = all(r >= REL_EXPECTED_ADVECTION for r in res.ratios_u)
        ok &= good
        print(f"full scheme sizes {res.sizes}:")
        print(f"  u errors {['%.3e' % e for e in res.errors_u]}")
        print(f"  u ratios {['%.3f' % r for r in res.ratios_u]}  expected >= "
              f"{REL_EXPECTED_ADVECTION}  {'PASS' if good else 'FAIL'}")
    if args.test in ("temporal", "all"):
        res = temporal_order()
        lo, hi = REL_EXPECTED_TEMPORAL
        good = all(lo <= r <= hi for r in res.ratios)
        ok &= good
        print(f"temporal dts {res.dts}:")
        print(f"  errors {['%.3e' % e for e in res.errors]}")
        print(f"  ratios {['%.3f' % r for r in res.ratios]}  expected [{lo}, {hi}]  "
              f"{'PASS' if good else 'FAIL'}")
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "audit":
            return _cmd_audit(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "convergence":
            return _cmd_convergence(args)
    except CrimewaveError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
