"""Command-line entry point.

Exit codes: 0 all checks pass, 1 check violations or anomalies, 2 usage or
validation error, 3 oracle enumeration capped.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .check import RunReport, Theorem, check_run, make_corresponding_run
from .core import NetworkError, execute
from .derive import derive_a2, derive_d, lift_input, validate_failure_constraints
from .failures import FailureGenerationError, generate
from .fuzz import run_fuzz
from .io import (
    RunManifest,
    build_from_spec,
    load_network_source,
    parse_fraction,
    raster,
    save_copies,
    save_failure,
    save_network,
    trace_to_csv,
)
from .oracle import EnumerationLimits, exhaustive_verify

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_CAPPED = 3

log = logging.getLogger("snnmap")


class UsageError(Exception):
    pass


def _manifest(args: argparse.Namespace) -> RunManifest:
    """Start from ``--manifest`` if given, then overlay explicit flags."""
    if getattr(args, "manifest", None):
        doc = RunManifest.load(args.manifest).to_dict()
    else:
        if not args.net:
            raise UsageError("either --manifest or --net is required")
        doc = {"network": args.net, "horizon": 0}
    overlay = {
        "network": args.net,
        "horizon": args.horizon,
        "m": args.m,
        "s_V": args.sv,
        "s_E": args.se,
        "failures": args.failures,
        "p_neuron": args.p_neuron,
        "p_edge": args.p_edge,
        "seed": args.seed,
        "schedule": args.schedule,
        "actuator": getattr(args, "actuator", None),
        "detailed_network": getattr(args, "d_net", None),
        "copies": getattr(args, "copies", None),
    }
    doc.update({k: v for k, v in overlay.items() if v is not None})
    return RunManifest.from_dict(doc)


def _report_dict(manifest: RunManifest, result: RunReport) -> dict:
    cells = result.cells
    out = {
        "passed": result.passed,
        "manifest": manifest.to_dict(),
        "checks": {},
        "cells": {kind.value: n for kind, n in cells.counts.items()},
        "middle_cells": [[v, t] for v, t in cells.middle()],
        "anomalies": [[v, t] for v, t in cells.anomalies],
    }
    for r in result.reports:
        out["checks"][r.theorem.value] = {
            "passed": r.passed,
            "premises": r.premises,
            "min_copy_count": r.min_count,
            "violations": [
                {
                    "neuron": v.neuron,
                    "time": v.time,
                    "observed": v.observed,
                    "required": str(v.required),
                    "detail": v.detail,
                    "witness": v.witness,
                }
                for v in r.violations
            ],
        }
    return out


def cmd_build(args: argparse.Namespace) -> int:
    spec = {"builder": args.family}
    for key in ("lmax", "k", "r", "variant"):
        value = getattr(args, key)
        if value is not None:
            spec[key] = value
    if args.self_loops:
        spec["self_loops"] = "true"
    net = build_from_spec(spec)
    save_network(net, args.out)
    print(f"{net.name}: {len(net.neurons)} neurons, {len(net.edges)} edges -> {args.out}")
    return EXIT_OK


def cmd_derive(args: argparse.Namespace) -> int:
    manifest = _manifest(args)
    a1 = manifest.abstract_network()
    params = manifest.params()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    a2 = derive_a2(a1, params)
    d, cmap = derive_d(a1, params)
    save_network(a2, out / "a2.json")
    save_network(d, out / "d.json")
    save_copies(cmap, out / "copies.json")
    print(f"A2: {len(a2.neurons)} neurons; D: {len(d.neurons)} neurons, {len(d.edges)} edges -> {out}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    """Execute one network; with ``--m`` the derived D runs on lifted inputs."""
    manifest = _manifest(args)
    net = manifest.abstract_network()
    schedule = manifest.input_schedule(net)
    if args.m is None and manifest.failures == "none":
        trace = execute(net, schedule)
    else:
        params = manifest.params()
        d, cmap = manifest.detailed() or derive_d(net, params)
        source = manifest.failure_source()
        failure = source if not hasattr(source, "kind") else generate(d, cmap, params, source)
        report = validate_failure_constraints(d, cmap, params, failure)
        if not report.satisfied:
            for v in report.violations:
                print(v.describe(), file=sys.stderr)
            return EXIT_USAGE
        trace = execute(d, lift_input(schedule, cmap, failure, detailed=d), failure)
        if args.save_failures:
            save_failure(failure, args.save_failures)
    text = trace_to_csv(trace)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.raster:
        print(raster(trace))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    manifest = _manifest(args)
    a1 = manifest.abstract_network()
    run = make_corresponding_run(
        a1,
        manifest.params(),
        manifest.failure_source(),
        manifest.input_schedule(a1),
        detailed=manifest.detailed(),
    )
    result = check_run(run, actuator_on=manifest.actuator)
    doc = _report_dict(manifest, result)
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    for r in result.reports:
        extra = f", min copy count {r.min_count}" if r.theorem is Theorem.FIRING and r.min_count is not None else ""
        status = "pass" if r.passed else f"FAIL ({len(r.violations)} violations)"
        print(f"{r.theorem.value}: {status}{extra}")
        for v in r.violations[:5]:
            print(f"  {v.detail}")
    counts = result.cells.counts
    print("cells: " + ", ".join(f"{k.value}={n}" for k, n in counts.items()))
    if result.cells.anomalies:
        print(f"anomalies (fires in A1, silent in A2): {list(result.cells.anomalies)[:5]}")
    return EXIT_OK if result.passed else EXIT_VIOLATION


def cmd_fuzz(args: argparse.Namespace) -> int:
    summary = run_fuzz(args.trials, args.seed or 0, out_dir=args.out)
    print(
        f"{summary.passed}/{summary.trials} trials passed "
        f"(families {summary.families}, {summary.retried} with lowered failure rates)"
    )
    for result in summary.failures:
        print(f"trial {result.index} failed; trial seed {result.manifest.notes.get('trial_seed')}")
    return EXIT_OK if summary.ok else EXIT_VIOLATION


def cmd_oracle(args: argparse.Namespace) -> int:
    manifest = _manifest(args)
    a1 = manifest.abstract_network()
    limits = EnumerationLimits(manifest.horizon, args.max_schedules, args.max_patterns)
    summary = exhaustive_verify(a1, manifest.params(), limits, actuator_on=manifest.actuator)
    print(
        f"runs={summary.runs} schedules={summary.schedules} patterns={summary.patterns} "
        f"violations={len(summary.violations)} middle_cells={summary.middle_cells}"
        + (" CAPPED" if summary.capped else "")
    )
    for v in summary.violations[:10]:
        print(f"  schedule #{v.schedule_index} pattern #{v.pattern_index}: {v.check} at {v.neuron}, t={v.time}")
    if summary.violations:
        return EXIT_VIOLATION
    return EXIT_CAPPED if summary.capped else EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", help="JSON run manifest; explicit flags override its entries")
    p.add_argument("--net", help="network file, or builder text such as line:lmax=5")
    p.add_argument("--m", type=int)
    p.add_argument("--sv", help="neuron survival fraction p/q")
    p.add_argument("--se", help="edge survival fraction p/q")
    p.add_argument("--failures", help="none | paper | random | maximal | <failure file>")
    p.add_argument("--p-neuron", dest="p_neuron")
    p.add_argument("--p-edge", dest="p_edge")
    p.add_argument("--seed", type=int)
    p.add_argument("--schedule", help="pulse0 | every:<k> | silent | <schedule file>")
    p.add_argument("--horizon", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snnmap", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write one of the example networks to a file")
    p.add_argument("family", choices=["line", "ring", "hierarchy"])
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--r")
    p.add_argument("--variant", choices=["pulse_only", "self_loop_on_1"])
    p.add_argument("--self-loops", action="store_true", help="hierarchy: persistent level-1 loops")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("derive", help="write A2, D and the copies map")
    _add_run_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("run", help="execute a network and write a CSV trace")
    _add_run_flags(p)
    p.add_argument("--d-net", dest="d_net")
    p.add_argument("--copies")
    p.add_argument("--out", help="trace CSV path (default: stdout)")
    p.add_argument("--raster", action="store_true")
    p.add_argument("--save-failures", dest="save_failures")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="check the mapping guarantees on one corresponding run")
    _add_run_flags(p)
    p.add_argument("--actuator", help="abstract neuron feeding the actuator")
    p.add_argument("--d-net", dest="d_net", help="use this detailed network instead of deriving it")
    p.add_argument("--copies", help="copies map for --d-net")
    p.add_argument("--out", help="report JSON path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fuzz", help="randomized trials over the example families")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for counterexample manifests")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("oracle", help="exhaustive check on a tiny instance")
    _add_run_flags(p)
    p.add_argument("--actuator")
    p.add_argument("--max-schedules", dest="max_schedules", type=int, default=2**20)
    p.add_argument("--max-patterns", dest="max_patterns", type=int, default=2**20)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    for key in ("sv", "se", "p_neuron", "p_edge", "r"):
        value = getattr(args, key, None)
        if value is not None:
            try:
                parse_fraction(value)
            except NetworkError as exc:
                print(f"error: --{key.replace('_', '-')}: {exc}", file=sys.stderr)
                return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, NetworkError, FailureGenerationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
