"""Networks, configurations and the discrete-time firing dynamics.

All weights, thresholds and potentials are :class:`fractions.Fraction`, so the
firing comparison ``potential >= threshold`` is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

NeuronId = str
Edge = tuple[NeuronId, NeuronId]


class NetworkError(ValueError):
    """A network, schedule or failure pattern is malformed or mismatched."""


def as_fraction(value: int | str | Fraction) -> Fraction:
    """Coerce an exact value to a Fraction; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rational values")
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; use 'p/q' or Fraction")
    return Fraction(value)


def _freeze(mapping: Mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    """A weighted digraph of threshold neurons.

    ``neurons`` is ordered; the order is used for traces, rasters and copy
    numbering but carries no semantic weight.  Construction does not enforce
    the structural rules, call :func:`validate_network` for that (or use
    :meth:`checked`).
    """

    neurons: tuple[NeuronId, ...]
    input_neurons: frozenset[NeuronId]
    edges: Mapping[Edge, Fraction]
    thresholds: Mapping[NeuronId, Fraction]
    initial_firing: Mapping[NeuronId, int] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "neurons", tuple(self.neurons))
        object.__setattr__(self, "input_neurons", frozenset(self.input_neurons))
        object.__setattr__(
            self, "edges", _freeze({tuple(e): as_fraction(w) for e, w in self.edges.items()})
        )
        object.__setattr__(
            self, "thresholds", _freeze({v: as_fraction(h) for v, h in self.thresholds.items()})
        )
        init = {v: 0 for v in self.neurons if v not in self.input_neurons}
        init.update({v: int(b) for v, b in self.initial_firing.items()})
        object.__setattr__(self, "initial_firing", _freeze(init))

    @classmethod
    def checked(cls, *args, **kwargs) -> "NetworkSpec":
        net = cls(*args, **kwargs)
        problems = validate_network(net)
        if problems:
            raise NetworkError("; ".join(problems))
        return net

    @property
    def non_input_neurons(self) -> tuple[NeuronId, ...]:
        return tuple(v for v in self.neurons if v not in self.input_neurons)

    def innbrs(self, v: NeuronId) -> list[NeuronId]:
        return [u for (u, w) in self.edges if w == v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NetworkSpec):
            return NotImplemented
        return (
            set(self.neurons) == set(other.neurons)
            and self.input_neurons == other.input_neurons
            and dict(self.edges) == dict(other.edges)
            and dict(self.thresholds) == dict(other.thresholds)
            and dict(self.initial_firing) == dict(other.initial_firing)
        )

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<NetworkSpec{label}: {len(self.neurons)} neurons, {len(self.edges)} edges>"

    def renamed(self, rename: Mapping[NeuronId, NeuronId]) -> "NetworkSpec":
        """Return a copy with every neuron id passed through ``rename``."""
        return NetworkSpec(
            neurons=tuple(rename[v] for v in self.neurons),
            input_neurons=frozenset(rename[v] for v in self.input_neurons),
            edges={(rename[u], rename[v]): w for (u, v), w in self.edges.items()},
            thresholds={rename[v]: h for v, h in self.thresholds.items()},
            initial_firing={rename[v]: b for v, b in self.initial_firing.items()},
            name=self.name,
        )


def validate_network(net: NetworkSpec) -> list[str]:
    """Return one message per violated structural rule; empty means valid."""
    problems: list[str] = []
    seen: set[NeuronId] = set()
    for v in net.neurons:
        if v in seen:
            problems.append(f"duplicate neuron id {v!r}")
        seen.add(v)
    for v in sorted(net.input_neurons - seen):
        problems.append(f"input neuron {v!r} is not a neuron of the network")
    for (u, v) in net.edges:
        for end in (u, v):
            if end not in seen:
                problems.append(f"edge ({u!r}, {v!r}) references unknown neuron {end!r}")
        if v in net.input_neurons:
            kind = "self-loop on" if u == v else "edge into"
            problems.append(f"{kind} input neuron: edge ({u!r}, {v!r})")
    for v in net.neurons:
        if v in net.input_neurons:
            if v in net.thresholds:
                problems.append(f"input neuron {v!r} must not carry a threshold")
        elif v not in net.thresholds:
            problems.append(f"non-input neuron {v!r} has no threshold")
    for v in net.thresholds:
        if v not in seen:
            problems.append(f"threshold given for unknown neuron {v!r}")
    for v, b in net.initial_firing.items():
        if v not in seen or v in net.input_neurons:
            problems.append(f"initial firing given for {v!r}, which is not a non-input neuron")
        elif b not in (0, 1):
            problems.append(f"initial firing of {v!r} must be 0 or 1, got {b!r}")
    return problems


@dataclass(frozen=True)
class Configuration:
    """Firing state of every neuron at one time step."""

    firing: Mapping[NeuronId, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "firing", _freeze(self.firing))

    def fired(self) -> frozenset[NeuronId]:
        return frozenset(v for v, b in self.firing.items() if b)

    def __getitem__(self, v: NeuronId) -> int:
        return self.firing[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return dict(self.firing) == dict(other.firing)

    def __hash__(self) -> int:
        return hash(frozenset(self.firing.items()))

    @classmethod
    def from_fired(cls, net: NetworkSpec, fired: Iterable[NeuronId]) -> "Configuration":
        fired = set(fired)
        unknown = fired - set(net.neurons)
        if unknown:
            raise NetworkError(f"unknown neurons in configuration: {sorted(unknown)}")
        return cls({v: int(v in fired) for v in net.neurons})


@dataclass(frozen=True)
class InputSchedule:
    """Which input neurons fire at each time ``0..horizon``.

    ``firing[t]`` is the set of inputs set to 1 at time ``t``; every other input
    is 0, so the schedule is total over ``inputs``.
    """

    inputs: frozenset[NeuronId]
    horizon: int
    firing: tuple[frozenset[NeuronId], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "firing", tuple(frozenset(s) for s in self.firing))
        if self.horizon < 0:
            raise NetworkError(f"horizon must be >= 0, got {self.horizon}")
        if len(self.firing) != self.horizon + 1:
            raise NetworkError(
                f"schedule has {len(self.firing)} time slots, expected horizon+1 = {self.horizon + 1}"
            )
        for t, fired in enumerate(self.firing):
            stray = fired - self.inputs
            if stray:
                raise NetworkError(f"schedule fires non-input neurons {sorted(stray)} at t={t}")

    def fires(self, t: int, v: NeuronId) -> int:
        if v not in self.inputs:
            raise NetworkError(f"{v!r} is not an input neuron of this schedule")
        return int(v in self.firing[t])

    def at(self, t: int) -> dict[NeuronId, int]:
        return {v: int(v in self.firing[t]) for v in self.inputs}

    def as_map(self) -> dict[tuple[int, NeuronId], int]:
        return {(t, v): self.fires(t, v) for t in range(self.horizon + 1) for v in sorted(self.inputs)}

    @classmethod
    def from_times(
        cls, inputs: Iterable[NeuronId], horizon: int, times: Mapping[NeuronId, Iterable[int]]
    ) -> "InputSchedule":
        """Build a schedule from ``{input: times it fires}``."""
        slots: list[set[NeuronId]] = [set() for _ in range(horizon + 1)]
        for v, ts in times.items():
            for t in ts:
                if 0 <= t <= horizon:
                    slots[t].add(v)
        return cls(frozenset(inputs), horizon, tuple(frozenset(s) for s in slots))

    @classmethod
    def silent(cls, inputs: Iterable[NeuronId], horizon: int) -> "InputSchedule":
        return cls(frozenset(inputs), horizon, tuple(frozenset() for _ in range(horizon + 1)))

    @classmethod
    def pulse(
        cls, inputs: Iterable[NeuronId], horizon: int, fired: Iterable[NeuronId] | None = None, t: int = 0
    ) -> "InputSchedule":
        """A single pulse at time ``t`` on ``fired`` (default: all inputs)."""
        inputs = frozenset(inputs)
        fired = inputs if fired is None else frozenset(fired)
        return cls.from_times(inputs, horizon, {v: [t] for v in fired})

    @classmethod
    def every(cls, inputs: Iterable[NeuronId], horizon: int, period: int) -> "InputSchedule":
        """All inputs fire at times 0, period, 2*period, ..."""
        if period < 1:
            raise NetworkError(f"period must be >= 1, got {period}")
        inputs = frozenset(inputs)
        return cls.from_times(inputs, horizon, {v: range(0, horizon + 1, period) for v in inputs})


@dataclass(frozen=True)
class FailurePattern:
    """Initially and permanently failed neurons and edges."""

    failed_neurons: frozenset[NeuronId] = frozenset()
    failed_edges: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "failed_neurons", frozenset(self.failed_neurons))
        object.__setattr__(self, "failed_edges", frozenset(tuple(e) for e in self.failed_edges))

    @property
    def is_empty(self) -> bool:
        return not self.failed_neurons and not self.failed_edges

    def check_against(self, net: NetworkSpec) -> None:
        unknown = self.failed_neurons - set(net.neurons)
        if unknown:
            raise NetworkError(f"failed neurons not in network: {sorted(unknown)}")
        missing = self.failed_edges - set(net.edges)
        if missing:
            raise NetworkError(f"failed edges not in network: {sorted(missing)}")


NO_FAILURES = FailurePattern()


@dataclass(frozen=True)
class ExecutionTrace:
    network: NetworkSpec
    failure: FailurePattern
    configs: tuple[Configuration, ...]

    @property
    def horizon(self) -> int:
        return len(self.configs) - 1

    def fires(self, v: NeuronId, t: int) -> int:
        return self.configs[t][v]

    def fired_at(self, t: int) -> frozenset[NeuronId]:
        return self.configs[t].fired()

    def firing_times(self, v: NeuronId) -> list[int]:
        return [t for t, c in enumerate(self.configs) if c[v]]

    def events(self) -> Iterator[tuple[int, NeuronId]]:
        """Yield ``(t, neuron)`` for every firing, ordered by time then neuron order."""
        for t, c in enumerate(self.configs):
            for v in self.network.neurons:
                if c[v]:
                    yield t, v

    def restrict(self, neurons: Iterable[NeuronId]) -> list[frozenset[NeuronId]]:
        keep = set(neurons)
        return [c.fired() & keep for c in self.configs]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExecutionTrace):
            return NotImplemented
        return (
            self.network == other.network
            and self.failure == other.failure
            and self.configs == other.configs
        )


def incoming_potential(
    net: NetworkSpec,
    prev: Configuration,
    v: NeuronId,
    failure: FailurePattern = NO_FAILURES,
) -> Fraction:
    """Weighted sum of firing in-neighbours over surviving edges into ``v``."""
    if v not in net.thresholds:
        raise NetworkError(f"{v!r} is not a non-input neuron of the network")
    total = Fraction(0)
    for (u, w), weight in net.edges.items():
        if w != v or (u, w) in failure.failed_edges:
            continue
        if prev.firing[u]:
            total += weight
    return total


def step(
    net: NetworkSpec,
    prev: Configuration,
    inputs_next: Mapping[NeuronId, int],
    failure: FailurePattern = NO_FAILURES,
) -> Configuration:
    """Compute the next configuration from ``prev`` by the threshold rule."""
    missing = net.input_neurons - set(inputs_next)
    if missing:
        raise NetworkError(f"no next value given for inputs {sorted(missing)}")
    nxt: dict[NeuronId, int] = {}
    for v in net.neurons:
        if v in failure.failed_neurons:
            nxt[v] = 0
        elif v in net.input_neurons:
            nxt[v] = int(bool(inputs_next[v]))
        else:
            nxt[v] = int(incoming_potential(net, prev, v, failure) >= net.thresholds[v])
    return Configuration(nxt)


class CompiledNetwork:
    """Index-based form of a network under a fixed failure pattern.

    Weights and thresholds are scaled by the lcm of all denominators so a step
    is pure integer arithmetic; the comparison stays exact.
    """

    def __init__(self, net: NetworkSpec, failure: FailurePattern = NO_FAILURES):
        failure.check_against(net)
        self.net = net
        self.failure = failure
        self.index = {v: i for i, v in enumerate(net.neurons)}
        n = len(net.neurons)
        denoms = [w.denominator for w in net.edges.values()]
        denoms += [h.denominator for h in net.thresholds.values()]
        self.scale = math.lcm(*denoms) if denoms else 1
        self.failed = [v in failure.failed_neurons for v in net.neurons]
        self.is_input = [v in net.input_neurons for v in net.neurons]
        self.inputs = [i for i in range(n) if self.is_input[i]]
        self.non_inputs = [i for i in range(n) if not self.is_input[i] and not self.failed[i]]
        self.threshold = [0] * n
        for v, h in net.thresholds.items():
            self.threshold[self.index[v]] = int(h * self.scale)
        # outgoing surviving edges; edges out of failed neurons never carry potential
        self.out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (u, v), w in net.edges.items():
            if (u, v) in failure.failed_edges or u in failure.failed_neurons:
                continue
            self.out[self.index[u]].append((self.index[v], int(w * self.scale)))

    def advance(self, state: list[int], fired_inputs: frozenset[NeuronId]) -> list[int]:
        n = len(state)
        pot = [0] * n
        out = self.out
        for i in range(n):
            if state[i]:
                for j, w in out[i]:
                    pot[j] += w
        nxt = [0] * n
        thr = self.threshold
        for i in self.non_inputs:
            if pot[i] >= thr[i]:
                nxt[i] = 1
        neurons = self.net.neurons
        for i in self.inputs:
            if not self.failed[i] and neurons[i] in fired_inputs:
                nxt[i] = 1
        return nxt

    def run_raw(self, schedule: InputSchedule) -> list[list[int]]:
        if schedule.inputs != self.net.input_neurons:
            raise NetworkError(
                "schedule inputs do not match the network's input neurons: "
                f"{sorted(schedule.inputs ^ self.net.input_neurons)[:5]}"
            )
        return self.run_firing(schedule.firing)

    def run_firing(self, firing: Sequence[frozenset[NeuronId]]) -> list[list[int]]:
        """Run on per-time sets of firing inputs, skipping schedule validation."""
        state = [0] * len(self.net.neurons)
        for i, v in enumerate(self.net.neurons):
            if self.failed[i]:
                continue
            if self.is_input[i]:
                state[i] = int(v in firing[0])
            else:
                state[i] = self.net.initial_firing.get(v, 0)
        states = [state]
        for fired in firing[1:]:
            states.append(self.advance(states[-1], fired))
        return states

    def run(self, schedule: InputSchedule) -> ExecutionTrace:
        neurons = self.net.neurons
        configs = tuple(
            Configuration(dict(zip(neurons, s))) for s in self.run_raw(schedule)
        )
        return ExecutionTrace(self.net, self.failure, configs)


def execute(
    net: NetworkSpec,
    schedule: InputSchedule,
    failure: FailurePattern = NO_FAILURES,
) -> ExecutionTrace:
    """Run ``net`` from its initial configuration to ``schedule.horizon``."""
    return CompiledNetwork(net, failure).run(schedule)
