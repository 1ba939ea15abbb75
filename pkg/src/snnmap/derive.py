"""Derive the lowered-threshold and replicated networks from an abstract one.

``derive_a2`` scales every threshold by ``s_V*s_E``.  ``derive_d`` replaces
each neuron by ``m`` copies, each abstract edge by a complete bipartite bundle
of weight ``w/m`` edges, and gives every copy the scaled threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

from .core import (
    FailurePattern,
    InputSchedule,
    NetworkError,
    NetworkSpec,
    NeuronId,
    as_fraction,
    validate_network,
)


@dataclass(frozen=True)
class DerivationParams:
    m: int
    s_V: Fraction
    s_E: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "s_V", as_fraction(self.s_V))
        object.__setattr__(self, "s_E", as_fraction(self.s_E))
        if not isinstance(self.m, int) or self.m < 1:
            raise NetworkError(f"m must be a positive integer, got {self.m!r}")
        for label, s in (("s_V", self.s_V), ("s_E", self.s_E)):
            if not 0 < s <= 1:
                raise NetworkError(f"{label} must lie in (0, 1], got {s}")

    @property
    def scale(self) -> Fraction:
        return self.s_V * self.s_E

    @property
    def min_surviving_copies(self) -> Fraction:
        return self.s_V * self.m

    @property
    def min_surviving_edges(self) -> Fraction:
        return self.s_V * self.s_E * self.m


def copy_name(v: NeuronId, i: int) -> NeuronId:
    return f"{v}#{i}"


@dataclass(frozen=True)
class CopiesMap:
    """Bookkeeping between abstract neurons and their ordered detailed copies."""

    forward: Mapping[NeuronId, tuple[NeuronId, ...]]
    backward: Mapping[NeuronId, NeuronId] = field(default_factory=dict)

    def __post_init__(self) -> None:
        fwd = {v: tuple(cs) for v, cs in self.forward.items()}
        back = {c: v for v, cs in fwd.items() for c in cs}
        if sum(len(cs) for cs in fwd.values()) != len(back):
            raise NetworkError("copy lists overlap")
        if self.backward and dict(self.backward) != back:
            raise NetworkError("backward map is not the inverse of forward")
        lengths = {len(cs) for cs in fwd.values()}
        if len(lengths) > 1:
            raise NetworkError(f"copy lists have unequal lengths {sorted(lengths)}")
        object.__setattr__(self, "forward", MappingProxyType(fwd))
        object.__setattr__(self, "backward", MappingProxyType(back))

    @property
    def m(self) -> int:
        return len(next(iter(self.forward.values()), ()))

    def copies(self, v: NeuronId) -> tuple[NeuronId, ...]:
        try:
            return self.forward[v]
        except KeyError:
            raise NetworkError(f"{v!r} has no copies in this map") from None

    def original(self, x: NeuronId) -> NeuronId:
        return self.backward[x]


def derive_a2(a1: NetworkSpec, params: DerivationParams) -> NetworkSpec:
    problems = validate_network(a1)
    if problems:
        raise NetworkError("invalid abstract network: " + "; ".join(problems))
    return NetworkSpec(
        neurons=a1.neurons,
        input_neurons=a1.input_neurons,
        edges=dict(a1.edges),
        thresholds={v: params.scale * h for v, h in a1.thresholds.items()},
        initial_firing=dict(a1.initial_firing),
        name=f"A2[{a1.name}]" if a1.name else "A2",
    )


def derive_d(a1: NetworkSpec, params: DerivationParams) -> tuple[NetworkSpec, CopiesMap]:
    problems = validate_network(a1)
    if problems:
        raise NetworkError("invalid abstract network: " + "; ".join(problems))
    m = params.m
    forward = {v: tuple(copy_name(v, i) for i in range(m)) for v in a1.neurons}
    neurons = tuple(c for v in a1.neurons for c in forward[v])
    inputs = frozenset(c for v in a1.input_neurons for c in forward[v])
    edges: dict[tuple[NeuronId, NeuronId], Fraction] = {}
    for (u, v), w in a1.edges.items():
        share = w / m
        for x in forward[u]:
            for y in forward[v]:
                edges[(x, y)] = share
    thresholds = {c: params.scale * h for v, h in a1.thresholds.items() for c in forward[v]}
    initial = {c: b for v, b in a1.initial_firing.items() for c in forward[v]}
    d = NetworkSpec(
        neurons=neurons,
        input_neurons=inputs,
        edges=edges,
        thresholds=thresholds,
        initial_firing=initial,
        name=f"D[{a1.name}]" if a1.name else "D",
    )
    return d, CopiesMap(forward)


@dataclass(frozen=True)
class ConstraintViolation:
    constraint: int
    neuron: NeuronId
    required: Fraction
    actual: int
    edge: tuple[NeuronId, NeuronId] | None = None
    copy: NeuronId | None = None

    def describe(self) -> str:
        if self.constraint == 1:
            return (
                f"constraint 1: {self.actual} surviving copies of {self.neuron!r}, "
                f"need >= {self.required}"
            )
        return (
            f"constraint 2: {self.actual} surviving edges into {self.copy!r} from surviving "
            f"copies of {self.edge[0]!r} (edge {self.edge}), need >= {self.required}"
        )


@dataclass(frozen=True)
class ConstraintReport:
    violations: tuple[ConstraintViolation, ...] = ()

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.satisfied


def _abstract_edges(d: NetworkSpec, cmap: CopiesMap) -> set[tuple[NeuronId, NeuronId]]:
    back = cmap.backward
    return {(back[x], back[y]) for (x, y) in d.edges if x in back and y in back}


def validate_failure_constraints(
    d: NetworkSpec,
    cmap: CopiesMap,
    params: DerivationParams,
    failure: FailurePattern,
) -> ConstraintReport:
    """Check both survival constraints for every abstract neuron and edge.

    Constraint 2 is checked for every copy ``y`` of the edge's target, failed
    or not.
    """
    if set(cmap.backward) - set(d.neurons):
        raise NetworkError("copies map refers to neurons missing from the detailed network")
    if cmap.m != params.m:
        raise NetworkError(f"copies map has m={cmap.m} but params say m={params.m}")
    failure.check_against(d)
    dead = failure.failed_neurons
    dead_edges = failure.failed_edges
    out: list[ConstraintViolation] = []
    need1 = params.min_surviving_copies
    for v, copies in cmap.forward.items():
        alive = sum(1 for x in copies if x not in dead)
        if alive < need1:
            out.append(ConstraintViolation(1, v, need1, alive))
    need2 = params.min_surviving_edges
    for u, v in sorted(_abstract_edges(d, cmap)):
        sources = [x for x in cmap.forward[u] if x not in dead]
        for y in cmap.forward[v]:
            good = sum(1 for x in sources if (x, y) in d.edges and (x, y) not in dead_edges)
            if good < need2:
                out.append(ConstraintViolation(2, v, need2, good, edge=(u, v), copy=y))
    return ConstraintReport(tuple(out))


def lift_input(
    schedule_a: InputSchedule,
    cmap: CopiesMap,
    failure: FailurePattern,
    detailed: NetworkSpec | None = None,
) -> InputSchedule:
    """Translate an abstract input schedule to the detailed network.

    Surviving copies of a firing input fire; failed copies and copies of
    silent inputs do not.  When ``detailed`` is given, the schedule's neurons
    are also checked to be inputs there.
    """
    for v in schedule_a.inputs:
        if v not in cmap.forward:
            raise NetworkError(f"schedule input {v!r} has no copies in the map")
        if detailed is not None and not set(cmap.forward[v]) <= detailed.input_neurons:
            raise NetworkError(f"schedule neuron {v!r} is not an input neuron")
    copies = {v: cmap.forward[v] for v in schedule_a.inputs}
    detailed_inputs = frozenset(c for cs in copies.values() for c in cs)
    dead = failure.failed_neurons
    firing = tuple(
        frozenset(c for v in fired for c in copies[v] if c not in dead)
        for fired in schedule_a.firing
    )
    return InputSchedule(detailed_inputs, schedule_a.horizon, firing)
