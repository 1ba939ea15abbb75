"""Corresponding executions of A1, A2 and D, and checks of the mapping guarantees.

The checks are empirical: given one input schedule and one failure pattern,
they run all three networks and look for a time step where the detailed
network departs from what the abstract networks guarantee.

* firing: ``v`` fires in A1 at ``t`` implies at least ``s_V*m`` copies of
  ``v`` fire in D at ``t``;
* nonfiring: ``v`` silent in A2 at ``t`` implies no copy of ``v`` fires in D;
* actuator: for a reliable actuator ``a`` fed by ``v`` (A1, A2) or by all
  copies of ``v`` (D), firing of ``a`` in A1 implies firing in D and silence
  in A2 implies silence in D, for every ``t >= 1``.

The guarantees rest on non-negative weights and positive thresholds; on
networks with inhibition the checker still runs and reports what it sees.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .core import (
    CompiledNetwork,
    ExecutionTrace,
    FailurePattern,
    InputSchedule,
    NetworkError,
    NetworkSpec,
    NeuronId,
    execute,
    validate_network,
)
from .derive import (
    ConstraintReport,
    CopiesMap,
    DerivationParams,
    derive_a2,
    derive_d,
    lift_input,
    validate_failure_constraints,
)
from .failures import GeneratorPolicy, generate

Fired = Sequence[frozenset[NeuronId]]


class ConstraintError(NetworkError):
    def __init__(self, report: ConstraintReport):
        self.report = report
        super().__init__(
            "failure pattern violates the survival constraints: "
            + "; ".join(v.describe() for v in report.violations[:3])
            + (" ..." if len(report.violations) > 3 else "")
        )


class Theorem(str, enum.Enum):
    FIRING = "firing"
    NONFIRING = "nonfiring"
    ACTUATOR_FIRES = "actuator_fires"
    ACTUATOR_SILENT = "actuator_silent"
    CONSISTENCY = "consistency"


class CellKind(str, enum.Enum):
    FIRES_A1 = "FIRES_A1"
    SILENT_A2 = "SILENT_A2"
    MIDDLE = "MIDDLE"


@dataclass(frozen=True)
class Violation:
    neuron: NeuronId
    time: int
    observed: int
    required: Fraction | int
    detail: str = ""
    witness: dict[str, Any] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class TheoremReport:
    theorem: Theorem
    violations: tuple[Violation, ...] = ()
    premises: int = 0
    min_count: int | None = None

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CorrespondingRun:
    a1: NetworkSpec
    a2: NetworkSpec
    d: NetworkSpec
    copies: CopiesMap
    params: DerivationParams
    failure: FailurePattern
    schedule_a: InputSchedule
    schedule_d: InputSchedule
    trace_a1: ExecutionTrace
    trace_a2: ExecutionTrace
    trace_d: ExecutionTrace

    @property
    def horizon(self) -> int:
        return self.schedule_a.horizon

    def copies_firing(self, v: NeuronId, t: int) -> int:
        fired = self.trace_d.fired_at(t)
        return sum(1 for x in self.copies.forward[v] if x in fired)


def make_corresponding_run(
    a1: NetworkSpec,
    params: DerivationParams,
    failures: GeneratorPolicy | FailurePattern | None,
    schedule_a: InputSchedule,
    *,
    detailed: tuple[NetworkSpec, CopiesMap] | None = None,
) -> CorrespondingRun:
    """Build A2 and D from ``a1`` and execute all three on corresponding inputs.

    ``failures`` is either a policy handed to the generator or an explicit
    pattern; either way the pattern must satisfy the survival constraints.
    ``detailed`` replaces the derived ``(D, copies)`` pair, e.g. with one read
    from disk; it is not re-derived or compared against the derivation.
    """
    problems = validate_network(a1)
    if problems:
        raise NetworkError("invalid abstract network: " + "; ".join(problems))
    if schedule_a.inputs != a1.input_neurons:
        raise NetworkError("schedule inputs do not match the abstract network's inputs")
    a2 = derive_a2(a1, params)
    d, cmap = detailed if detailed is not None else derive_d(a1, params)
    if set(cmap.forward) != set(a1.neurons):
        raise NetworkError("copies map does not cover exactly the abstract neurons")
    if failures is None:
        failures = FailurePattern()
    if isinstance(failures, GeneratorPolicy):
        failure = generate(d, cmap, params, failures)
    else:
        failure = failures
    report = validate_failure_constraints(d, cmap, params, failure)
    if not report.satisfied:
        raise ConstraintError(report)
    schedule_d = lift_input(schedule_a, cmap, failure, detailed=d)
    return CorrespondingRun(
        a1=a1,
        a2=a2,
        d=d,
        copies=cmap,
        params=params,
        failure=failure,
        schedule_a=schedule_a,
        schedule_d=schedule_d,
        trace_a1=execute(a1, schedule_a),
        trace_a2=execute(a2, schedule_a),
        trace_d=execute(d, schedule_d, failure),
    )


# -- checks over firing-set sequences; shared with the exhaustive oracle --


def firing_violations(
    a1_fired: Fired, d_fired: Fired, cmap: CopiesMap, params: DerivationParams
) -> tuple[list[tuple[NeuronId, int, int]], int, int | None]:
    """Return ``(violations, premises, min_count)``; violations are ``(v, t, count)``."""
    # count < s_V*m  iff  count < ceil(s_V*m) for integer counts
    need = math.ceil(params.min_surviving_copies)
    out = []
    premises = 0
    least = None
    for t, fired in enumerate(a1_fired):
        dt = d_fired[t]
        for v in fired:
            premises += 1
            count = sum(1 for x in cmap.forward[v] if x in dt)
            least = count if least is None else min(least, count)
            if count < need:
                out.append((v, t, count))
    return out, premises, least


def nonfiring_violations(
    a2_fired: Fired, d_fired: Fired, cmap: CopiesMap, neurons: Sequence[NeuronId]
) -> tuple[list[tuple[NeuronId, int, int]], int]:
    out = []
    premises = 0
    back = cmap.backward
    for t, fired in enumerate(a2_fired):
        premises += len(neurons) - len(fired)
        stray = [back[x] for x in d_fired[t] if x in back and back[x] not in fired]
        if stray:
            out.extend((v, t, c) for v, c in Counter(stray).items())
    return out, premises


def actuator_violations(
    a1a_fired: Fired, a2a_fired: Fired, da_fired: Fired, actuator: NeuronId
) -> tuple[list[tuple[int, int]], int, int]:
    """Return ``(violations, premises_part1, premises_part2)``; violations are ``(t, part)``."""
    out = []
    p1 = p2 = 0
    for t in range(1, len(a1a_fired)):
        in_d = actuator in da_fired[t]
        if actuator in a1a_fired[t]:
            p1 += 1
            if not in_d:
                out.append((t, 1))
        if actuator not in a2a_fired[t]:
            p2 += 1
            if in_d:
                out.append((t, 2))
    return out, p1, p2


def masking_violations(d_fired: Fired, failed: frozenset[NeuronId]) -> list[tuple[NeuronId, int]]:
    return [(x, t) for t, fired in enumerate(d_fired) if failed & fired for x in sorted(failed & fired)]


# -- witnesses --


def local_witness(trace: ExecutionTrace, y: NeuronId, t: int) -> dict[str, Any]:
    """Firing in-neighbours of ``y`` at ``t-1`` over surviving edges, and the potential."""
    net = trace.network
    info: dict[str, Any] = {"neuron": y, "time": t, "fired": bool(trace.fires(y, t))}
    if y in trace.failure.failed_neurons:
        info["failed"] = True
    if y in net.input_neurons or t == 0:
        info["input_or_initial"] = True
        return info
    prev = trace.fired_at(t - 1)
    contributions = [
        (u, w)
        for (u, v), w in net.edges.items()
        if v == y and u in prev and (u, v) not in trace.failure.failed_edges
    ]
    info["threshold"] = str(net.thresholds[y])
    info["potential"] = str(sum((w for _, w in contributions), Fraction(0)))
    info["firing_in_neighbours"] = [[u, str(w)] for u, w in sorted(contributions)]
    return info


def _fired(trace: ExecutionTrace) -> list[frozenset[NeuronId]]:
    return [c.fired() for c in trace.configs]


def check_firing_theorem(run: CorrespondingRun) -> TheoremReport:
    raw, premises, least = firing_violations(
        _fired(run.trace_a1), _fired(run.trace_d), run.copies, run.params
    )
    violations = []
    for v, t, count in raw:
        silent_copies = [
            x
            for x in run.copies.forward[v]
            if x not in run.failure.failed_neurons and not run.trace_d.fires(x, t)
        ]
        violations.append(
            Violation(
                v,
                t,
                count,
                run.params.min_surviving_copies,
                f"{v} fires in A1 at t={t} but only {count} copies fire in D",
                {
                    "abstract": local_witness(run.trace_a1, v, t),
                    "silent_surviving_copies": [local_witness(run.trace_d, x, t) for x in silent_copies],
                },
            )
        )
    return TheoremReport(Theorem.FIRING, tuple(violations), premises, least)


def check_nonfiring_theorem(run: CorrespondingRun) -> TheoremReport:
    raw, premises = nonfiring_violations(
        _fired(run.trace_a2), _fired(run.trace_d), run.copies, run.a1.neurons
    )
    violations = []
    for v, t, count in raw:
        firing_copies = [x for x in run.copies.forward[v] if run.trace_d.fires(x, t)]
        violations.append(
            Violation(
                v,
                t,
                count,
                0,
                f"{v} is silent in A2 at t={t} but {count} copies fire in D",
                {
                    "abstract": local_witness(run.trace_a2, v, t),
                    "firing_copies": [local_witness(run.trace_d, x, t) for x in firing_copies],
                },
            )
        )
    return TheoremReport(Theorem.NONFIRING, tuple(violations), premises)


def check_consistency(run: CorrespondingRun) -> TheoremReport:
    """Failed copies never fire, and D's inputs are exactly the lifted abstract inputs."""
    violations = []
    fired = _fired(run.trace_d)
    for x, t in masking_violations(fired, run.failure.failed_neurons):
        violations.append(
            Violation(x, t, 1, 0, f"failed neuron {x} fires at t={t}", local_witness(run.trace_d, x, t))
        )
    expected = lift_input(run.schedule_a, run.copies, run.failure)
    for t in range(run.horizon + 1):
        got = fired[t] & run.d.input_neurons
        for x in sorted(got ^ expected.firing[t]):
            violations.append(
                Violation(
                    x,
                    t,
                    int(x in got),
                    int(x in expected.firing[t]),
                    f"input copy {x} does not follow the lifted abstract input at t={t}",
                )
            )
    return TheoremReport(Theorem.CONSISTENCY, tuple(violations), premises=len(fired))


@dataclass(frozen=True)
class CellClassification:
    cells: dict[tuple[NeuronId, int], CellKind]
    anomalies: tuple[tuple[NeuronId, int], ...]

    @property
    def counts(self) -> dict[CellKind, int]:
        counts = Counter(self.cells.values())
        return {kind: counts.get(kind, 0) for kind in CellKind}

    def middle(self) -> list[tuple[NeuronId, int]]:
        return [cell for cell, kind in self.cells.items() if kind is CellKind.MIDDLE]


def classify_fired(a1_fired: Fired, a2_fired: Fired, neurons: Sequence[NeuronId]) -> CellClassification:
    cells: dict[tuple[NeuronId, int], CellKind] = {}
    anomalies = []
    for t, (f1, f2) in enumerate(zip(a1_fired, a2_fired)):
        for v in neurons:
            if v in f1:
                cells[(v, t)] = CellKind.FIRES_A1
                if v not in f2:
                    anomalies.append((v, t))
            elif v in f2:
                cells[(v, t)] = CellKind.MIDDLE
            else:
                cells[(v, t)] = CellKind.SILENT_A2
    return CellClassification(cells, tuple(anomalies))


def classify_cells(run: CorrespondingRun) -> CellClassification:
    """Split every (neuron, time) cell by what the guarantees say about D.

    A cell that fires in A1 but not in A2 is classified FIRES_A1 and also
    listed under ``anomalies``.
    """
    return classify_fired(_fired(run.trace_a1), _fired(run.trace_a2), run.a1.neurons)


# -- actuator --


def attach_actuator(
    net: NetworkSpec,
    v: NeuronId,
    params: DerivationParams,
    copies: CopiesMap | None = None,
    actuator: NeuronId = "a",
) -> NetworkSpec:
    """Add a reliable actuator neuron with threshold ``s_V`` fed by ``v``.

    Without ``copies`` the edge ``(v, a)`` has weight 1.  With ``copies`` the
    network is detailed and every copy of ``v`` feeds ``a`` with weight
    ``1/m``.  The actuator's threshold is never rescaled.
    """
    if actuator in net.neurons:
        raise NetworkError(f"actuator id {actuator!r} already used in the network")
    if copies is None:
        sources = [v]
        weight = Fraction(1)
    else:
        sources = list(copies.copies(v))
        weight = Fraction(1, len(sources))
    for x in sources:
        if x not in net.neurons:
            raise NetworkError(f"unknown neuron {x!r}")
        if x in net.input_neurons:
            raise NetworkError(f"cannot attach the actuator to input neuron {x!r}")
    edges = dict(net.edges)
    edges.update({(x, actuator): weight for x in sources})
    thresholds = dict(net.thresholds)
    thresholds[actuator] = params.s_V
    initial = dict(net.initial_firing)
    initial[actuator] = 0
    return NetworkSpec(
        neurons=net.neurons + (actuator,),
        input_neurons=net.input_neurons,
        edges=edges,
        thresholds=thresholds,
        initial_firing=initial,
        name=f"{net.name}+{actuator}" if net.name else actuator,
    )


@dataclass(frozen=True)
class ActuatorRun:
    base: CorrespondingRun
    source: NeuronId
    actuator: NeuronId
    a1a: NetworkSpec
    a2a: NetworkSpec
    da: NetworkSpec
    trace_a1a: ExecutionTrace
    trace_a2a: ExecutionTrace
    trace_da: ExecutionTrace

    def firing_times(self) -> dict[str, list[int]]:
        return {
            "A1": self.trace_a1a.firing_times(self.actuator),
            "A2": self.trace_a2a.firing_times(self.actuator),
            "D": self.trace_da.firing_times(self.actuator),
        }


def make_actuator_run(run: CorrespondingRun, v: NeuronId, actuator: NeuronId = "a") -> ActuatorRun:
    """Attach an actuator on ``v`` to A2 and D as already derived, then rerun.

    A2^a and D^a are built from the derived networks, never by deriving from
    A1^a, so the actuator keeps threshold ``s_V`` and is not replicated.
    """
    a1a = attach_actuator(run.a1, v, run.params, actuator=actuator)
    a2a = attach_actuator(run.a2, v, run.params, actuator=actuator)
    da = attach_actuator(run.d, v, run.params, copies=run.copies, actuator=actuator)
    return ActuatorRun(
        base=run,
        source=v,
        actuator=actuator,
        a1a=a1a,
        a2a=a2a,
        da=da,
        trace_a1a=execute(a1a, run.schedule_a),
        trace_a2a=execute(a2a, run.schedule_a),
        trace_da=execute(da, run.schedule_d, run.failure),
    )


def check_actuator_theorem(arun: ActuatorRun) -> tuple[TheoremReport, TheoremReport]:
    """Return the reports for part 1 (fires) and part 2 (silent)."""
    raw, p1, p2 = actuator_violations(
        _fired(arun.trace_a1a), _fired(arun.trace_a2a), _fired(arun.trace_da), arun.actuator
    )
    fires, silent = [], []
    for t, part in raw:
        witness = {
            "actuator_in_D": local_witness(arun.trace_da, arun.actuator, t),
            "source_in_A1": arun.trace_a1a.fires(arun.source, t - 1),
            "source_in_A2": arun.trace_a2a.fires(arun.source, t - 1),
        }
        if part == 1:
            fires.append(
                Violation(arun.actuator, t, 0, 1, f"a fires in A1^a at t={t} but not in D^a", witness)
            )
        else:
            silent.append(
                Violation(arun.actuator, t, 1, 0, f"a is silent in A2^a at t={t} but fires in D^a", witness)
            )
    return (
        TheoremReport(Theorem.ACTUATOR_FIRES, tuple(fires), p1),
        TheoremReport(Theorem.ACTUATOR_SILENT, tuple(silent), p2),
    )


@dataclass(frozen=True)
class RunReport:
    reports: tuple[TheoremReport, ...]
    cells: CellClassification

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports) and not self.cells.anomalies

    def report(self, theorem: Theorem) -> TheoremReport:
        for r in self.reports:
            if r.theorem is theorem:
                return r
        raise KeyError(theorem)


def check_run(run: CorrespondingRun, actuator_on: NeuronId | None = None) -> RunReport:
    """Run every applicable check on ``run``."""
    reports = [check_consistency(run), check_firing_theorem(run), check_nonfiring_theorem(run)]
    if actuator_on is not None:
        reports.extend(check_actuator_theorem(make_actuator_run(run, actuator_on)))
    return RunReport(tuple(reports), classify_cells(run))


def fast_trace(net: NetworkSpec, schedule: InputSchedule, failure: FailurePattern) -> list[frozenset[NeuronId]]:
    """Firing sets per time step, without building Configuration objects."""
    compiled = CompiledNetwork(net, failure)
    neurons = net.neurons
    return [
        frozenset(neurons[i] for i, b in enumerate(state) if b) for state in compiled.run_raw(schedule)
    ]
