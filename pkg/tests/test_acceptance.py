"""Acceptance criteria, one test each.

Every test records a one-line PASS/FAIL verdict with its wall time; the lines
are printed in the terminal summary (and immediately with ``-s``).
"""

import dataclasses
import json
import time
from fractions import Fraction

from conftest import B8, B19, pulse
from snnmap import (
    CellKind,
    DerivationParams,
    EnumerationLimits,
    FailurePattern,
    GeneratorPolicy,
    HierarchyParams,
    LineParams,
    PolicyKind,
    RingParams,
    build_hierarchy,
    build_line,
    build_ring,
    check_nonfiring_theorem,
    check_run,
    classify_cells,
    derive_a2,
    derive_d,
    execute,
    exhaustive_verify,
    make_actuator_run,
    make_corresponding_run,
)
from snnmap.cli import main
from snnmap.fuzz import run_fuzz

VERDICTS: list[str] = []


def verdict(number: int, title: str, ok: bool, seconds: float, limit: float | None, detail: str = "") -> None:
    in_time = limit is None or seconds < limit
    status = "PASS" if ok and in_time else "FAIL"
    bound = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"criterion {number} [{status}] {title}: {seconds:.2f}s{bound}" + (f"; {detail}" if detail else "")
    VERDICTS.append(line)
    print(line)
    assert ok, line
    assert in_time, line


def test_1_line_golden_trace():
    start = time.perf_counter()
    net = build_line(LineParams(5))
    trace = execute(net, pulse(net, 8))
    ok = all(trace.fired_at(t) == ({str(t)} if t <= 5 else set()) for t in range(9))
    verdict(1, "line golden trace", ok, time.perf_counter() - start, 1)


def test_2_hierarchy_inputs(hier333):
    start = time.perf_counter()
    positive = execute(hier333, pulse(hier333, 5, B8))
    negative = execute(hier333, pulse(hier333, 5, B19))
    higher = set().union(*(negative.fired_at(t) for t in range(1, 6)))
    ok = (
        positive.firing_times("v_lambda") == [3]
        and higher == {"v_11", "v_12", "v_13", "v_21", "v_31", "v_1"}
        and negative.firing_times("v_lambda") == []
    )
    verdict(2, "hierarchy positive and negative inputs", ok, time.perf_counter() - start, 1)


def test_3_derivation_numbers(line5, hier333, params_4):
    start = time.perf_counter()
    d, _ = derive_d(line5, params_4)
    line_ok = set(d.thresholds.values()) == {Fraction(1, 2)} and set(d.edges.values()) == {Fraction(1, 4)}
    dh, _ = derive_d(hier333, params_4)
    hier_ok = set(dh.thresholds.values()) == {1}
    wide = build_hierarchy(HierarchyParams(3, 5, Fraction(4, 5)))
    params = DerivationParams(2, Fraction(15, 16), Fraction(14, 15))
    a2 = derive_a2(wide, params)
    dw, _ = derive_d(wide, params)
    wide_ok = set(a2.thresholds.values()) == set(dw.thresholds.values()) == {Fraction(7, 2)}
    verdict(
        3,
        "derivation numbers",
        line_ok and hier_ok and wide_ok,
        time.perf_counter() - start,
        None,
        f"line {line_ok}, k=3 {hier_ok}, k=5 {wide_ok}",
    )


def test_4_firing_guarantee_examples(line5, hier333, params_4):
    start = time.perf_counter()
    line = make_corresponding_run(line5, params_4, GeneratorPolicy(PolicyKind.PAPER_ADVERSARIAL), pulse(line5, 8))
    line_counts = [line.copies_firing(v, int(v)) for v in line5.neurons]
    params = DerivationParams(32, Fraction(15, 16), Fraction(14, 15))
    hier = make_corresponding_run(hier333, params, GeneratorPolicy(PolicyKind.MAXIMAL), pulse(hier333, 4, B8))
    root = hier.copies_firing("v_lambda", 3)
    ok = min(line_counts) >= 3 and root >= 30 and check_run(line).passed and check_run(hier).passed
    verdict(
        4,
        "firing guarantee on line and m=32 hierarchy",
        ok,
        time.perf_counter() - start,
        10,
        f"line copy counts {line_counts}, root copies {root}",
    )


def test_5_nonfiring_and_middle_ground(hier333, params_4):
    start = time.perf_counter()
    run = make_corresponding_run(hier333, params_4, None, pulse(hier333, 4, ["v_111"]))
    passed = check_nonfiring_theorem(run).passed
    root = run.copies_firing("v_lambda", 3)
    kind = classify_cells(run).cells[("v_lambda", 3)]
    ok = passed and root == 4 and kind is CellKind.MIDDLE
    verdict(5, "nonfiring guarantee and middle ground", ok, time.perf_counter() - start, 1, f"root copies {root}, cell {kind.value}")


def test_6_actuator(line5, params_4):
    start = time.perf_counter()
    policies = [
        GeneratorPolicy(PolicyKind.NONE),
        GeneratorPolicy(PolicyKind.PAPER_ADVERSARIAL),
        GeneratorPolicy(PolicyKind.MAXIMAL),
    ] + [GeneratorPolicy(PolicyKind.RANDOM_IID, Fraction(1, 8), Fraction(1, 8), seed=s) for s in range(20)]
    times = set()
    for policy in policies:
        run = make_corresponding_run(line5, params_4, policy, pulse(line5, 8))
        times.add(tuple(make_actuator_run(run, "5").trace_da.firing_times("a")))
    verdict(6, "actuator fires exactly at t=6", times == {(6,)}, time.perf_counter() - start, 1, f"{len(policies)} failure patterns")


TINY = DerivationParams(2, Fraction(1, 2), 1)


def test_7_exhaustive_oracle():
    start = time.perf_counter()
    instances = [
        ("line lmax=2", build_line(LineParams(2)), 4, "2"),
        ("ring lmax=2", build_ring(RingParams(2)), 6, "2"),
        ("hierarchy lmax=1 k=2", build_hierarchy(HierarchyParams(1, 2, 1)), 2, "v_lambda"),
    ]
    parts = []
    ok = True
    for name, net, horizon, actuator in instances:
        summary = exhaustive_verify(net, TINY, EnumerationLimits(horizon), actuator_on=actuator)
        ok = ok and summary.passed and not summary.capped
        parts.append(f"{name}: {summary.runs} runs, {len(summary.violations)} violations")
    verdict(7, "exhaustive oracle", ok, time.perf_counter() - start, 300, "; ".join(parts))


def test_8_fuzz(tmp_path):
    start = time.perf_counter()
    summary = run_fuzz(1000, seed=20241017, out_dir=tmp_path)
    ok = summary.ok and summary.trials == 1000 and set(summary.families) == {"line", "ring", "hierarchy"}
    ok = ok and not any(tmp_path.iterdir())
    verdict(
        8,
        "randomized property suite",
        ok,
        time.perf_counter() - start,
        600,
        f"{summary.passed}/{summary.trials} passed, families {summary.families}",
    )


def test_9_checker_sensitivity(tmp_path, line5, params_4, capsys):
    start = time.perf_counter()
    flags = ["--net", "line:lmax=5", "--m", "4", "--sv", "3/4", "--se", "2/3"]
    main(["derive", *flags, "--out", str(tmp_path)])
    doc = json.loads((tmp_path / "d.json").read_text())
    doc["thresholds"]["3#0"] = "0"  # fires with no input, so any schedule exercises it
    (tmp_path / "d.json").write_text(json.dumps(doc))
    code = main(
        ["check", *flags, "--horizon", "8", "--d-net", str(tmp_path / "d.json"), "--copies", str(tmp_path / "copies.json")]
    )
    capsys.readouterr()

    # a failed copy that is allowed to fire again
    run = make_corresponding_run(line5, params_4, GeneratorPolicy(PolicyKind.PAPER_ADVERSARIAL), pulse(line5, 8))
    leaky = FailurePattern(run.failure.failed_neurons - {"2#3"}, run.failure.failed_edges)
    trace = dataclasses.replace(execute(run.d, run.schedule_d, leaky), failure=run.failure)
    unmasked = check_run(dataclasses.replace(run, trace_d=trace))
    detected = sum(len(r.violations) for r in unmasked.reports)
    ok = code == 1 and not unmasked.passed
    verdict(
        9,
        "checker sensitivity",
        ok,
        time.perf_counter() - start,
        None,
        f"lowered threshold exit code {code}, unmasked failure {detected} violations",
    )
