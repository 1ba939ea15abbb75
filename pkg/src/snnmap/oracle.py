"""Exhaustive verification on tiny instances.

Enumeration order is fixed so any run can be replayed from its indices:

* schedules count in binary over the ``(time, input)`` pairs, ordered by
  time and then by input name; pair ``i`` fires in schedule ``k`` iff bit
  ``i`` of ``k`` is set;
* failure patterns count in binary over the detailed neuron list (outer
  loop) and the detailed edge list (inner loop), both in network order, and
  only the pairs satisfying both survival constraints are yielded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .check import (
    actuator_violations,
    attach_actuator,
    classify_fired,
    firing_violations,
    masking_violations,
    nonfiring_violations,
)
from .core import CompiledNetwork, FailurePattern, InputSchedule, NetworkSpec, NeuronId, execute
from .derive import CopiesMap, DerivationParams, derive_a2, derive_d

DEFAULT_CAP = 2**20


@dataclass(frozen=True)
class EnumerationLimits:
    horizon: int
    max_schedules: int = DEFAULT_CAP
    max_patterns: int = DEFAULT_CAP

    def __post_init__(self) -> None:
        if self.horizon < 0 or self.max_schedules < 1 or self.max_patterns < 1:
            raise ValueError("enumeration limits must be positive (horizon >= 0)")


def schedule_count(net: NetworkSpec, horizon: int) -> int:
    return 2 ** (len(net.input_neurons) * (horizon + 1))


def enumerate_schedules(net: NetworkSpec, horizon: int) -> Iterator[InputSchedule]:
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    inputs = sorted(net.input_neurons)
    pairs = [(t, v) for t in range(horizon + 1) for v in inputs]
    for k in range(2 ** len(pairs)):
        slots: list[set[NeuronId]] = [set() for _ in range(horizon + 1)]
        for i, (t, v) in enumerate(pairs):
            if k >> i & 1:
                slots[t].add(v)
        yield InputSchedule(frozenset(inputs), horizon, tuple(frozenset(s) for s in slots))


def enumerate_failure_patterns(
    d: NetworkSpec, cmap: CopiesMap, params: DerivationParams
) -> Iterator[FailurePattern]:
    """Yield every constraint-satisfying pattern, in binary counting order."""
    neurons = list(d.neurons)
    edges = list(d.edges)
    n_index = {x: i for i, x in enumerate(neurons)}
    e_index = {e: i for i, e in enumerate(edges)}
    need1 = params.min_surviving_copies
    need2 = params.min_surviving_edges
    copy_masks = [sum(1 << n_index[x] for x in cs) for cs in cmap.forward.values()]
    back = cmap.backward
    abstract_edges = sorted({(back[x], back[y]) for x, y in edges if x in back and y in back})
    # per (abstract edge, target copy): [(source neuron bit, edge bit)]
    bundles = [
        [(n_index[x], e_index[(x, y)]) for x in cmap.forward[u] if (x, y) in e_index]
        for u, v in abstract_edges
        for y in cmap.forward[v]
    ]
    for nmask in range(2 ** len(neurons)):
        if any(cmap.m - bin(nmask & cm).count("1") < need1 for cm in copy_masks):
            continue
        live = [[eb for nb, eb in bundle if not nmask >> nb & 1] for bundle in bundles]
        if any(len(lb) < need2 for lb in live):
            continue
        failed_neurons = frozenset(x for i, x in enumerate(neurons) if nmask >> i & 1)
        for emask in range(2 ** len(edges)):
            if all(sum(1 for eb in lb if not emask >> eb & 1) >= need2 for lb in live):
                yield FailurePattern(
                    failed_neurons,
                    frozenset(e for i, e in enumerate(edges) if emask >> i & 1),
                )


@dataclass
class OracleViolation:
    schedule_index: int
    pattern_index: int
    check: str
    neuron: NeuronId
    time: int
    schedule: InputSchedule = field(repr=False)
    failure: FailurePattern = field(repr=False)


@dataclass
class OracleSummary:
    runs: int = 0
    schedules: int = 0
    patterns: int = 0
    schedules_capped: bool = False
    patterns_capped: bool = False
    violations: list[OracleViolation] = field(default_factory=list)
    middle_cells: int = 0

    @property
    def capped(self) -> bool:
        return self.schedules_capped or self.patterns_capped

    @property
    def passed(self) -> bool:
        return not self.violations


def exhaustive_verify(
    a1: NetworkSpec,
    params: DerivationParams,
    limits: EnumerationLimits,
    actuator_on: NeuronId | None = None,
    actuator: NeuronId = "a",
) -> OracleSummary:
    """Check every (schedule, failure pattern) pair of a tiny instance.

    Every run is checked for the firing and nonfiring guarantees, for failure
    masking, for A1-fires/A2-silent anomalies, and, when ``actuator_on`` is
    given, for both actuator guarantees.
    """
    a2 = derive_a2(a1, params)
    d, cmap = derive_d(a1, params)
    summary = OracleSummary()

    if actuator_on is not None:
        a1x = attach_actuator(a1, actuator_on, params, actuator=actuator)
        a2x = attach_actuator(a2, actuator_on, params, actuator=actuator)
        dx = attach_actuator(d, actuator_on, params, copies=cmap, actuator=actuator)
    else:
        a1x, a2x, dx = a1, a2, d
    drop = frozenset({actuator}) if actuator_on is not None else frozenset()

    schedules = []
    total = schedule_count(a1, limits.horizon)
    summary.schedules_capped = total > limits.max_schedules
    for k, sched in enumerate(enumerate_schedules(a1, limits.horizon)):
        if k >= limits.max_schedules:
            break
        f1 = [c.fired() for c in execute(a1x, sched).configs]
        f2 = [c.fired() for c in execute(a2x, sched).configs]
        p1 = [f - drop for f in f1]
        p2 = [f - drop for f in f2]
        schedules.append((sched, f1, f2, p1, p2))
        cells = classify_fired(p1, p2, a1.neurons)
        summary.middle_cells += len(cells.middle())
        for v, t in cells.anomalies:
            summary.violations.append(OracleViolation(k, -1, "anomaly", v, t, sched, FailurePattern()))
    summary.schedules = len(schedules)

    for j, failure in enumerate(enumerate_failure_patterns(d, cmap, params)):
        if j >= limits.max_patterns:
            summary.patterns_capped = True
            break
        summary.patterns += 1
        compiled = CompiledNetwork(dx, failure)
        dead = failure.failed_neurons
        names = dx.neurons
        for k, (sched, f1, f2, p1, p2) in enumerate(schedules):
            lifted = [
                frozenset(c for v in fired for c in cmap.forward[v] if c not in dead)
                for fired in sched.firing
            ]
            fd = [
                frozenset(names[i] for i, b in enumerate(state) if b)
                for state in compiled.run_firing(lifted)
            ]
            summary.runs += 1
            found: list[tuple[str, NeuronId, int]] = []
            fd_plain = [f - drop for f in fd]
            bad1, _, _ = firing_violations(p1, fd_plain, cmap, params)
            found += [("firing", v, t) for v, t, _ in bad1]
            bad2, _ = nonfiring_violations(p2, fd_plain, cmap, a1.neurons)
            found += [("nonfiring", v, t) for v, t, _ in bad2]
            found += [("masking", x, t) for x, t in masking_violations(fd, failure.failed_neurons)]
            if actuator_on is not None:
                bad3, _, _ = actuator_violations(f1, f2, fd, actuator)
                found += [
                    ("actuator_fires" if part == 1 else "actuator_silent", actuator, t)
                    for t, part in bad3
                ]
            for check, v, t in found:
                summary.violations.append(OracleViolation(k, j, check, v, t, sched, failure))
    summary.violations.sort(key=lambda v: (v.schedule_index, v.pattern_index, v.check, v.time))
    return summary
