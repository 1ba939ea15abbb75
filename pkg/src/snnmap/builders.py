"""Line, ring and hierarchy example networks."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import NetworkError, NetworkSpec, NeuronId, as_fraction

ROOT = "v_lambda"


class LineVariant(str, enum.Enum):
    PULSE_ONLY = "pulse_only"
    SELF_LOOP_ON_1 = "self_loop_on_1"


@dataclass(frozen=True)
class LineParams:
    lmax: int
    persistent_variant: LineVariant = LineVariant.PULSE_ONLY

    def __post_init__(self) -> None:
        if self.lmax < 1:
            raise NetworkError(f"line needs lmax >= 1, got {self.lmax}")
        object.__setattr__(self, "persistent_variant", LineVariant(self.persistent_variant))


@dataclass(frozen=True)
class RingParams:
    lmax: int

    def __post_init__(self) -> None:
        if self.lmax < 2:
            raise NetworkError(f"ring needs lmax >= 2, got {self.lmax}")


@dataclass(frozen=True)
class HierarchyParams:
    lmax: int
    k: int
    r: Fraction
    layer1_self_loops: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", as_fraction(self.r))
        if self.lmax < 1:
            raise NetworkError(f"hierarchy needs lmax >= 1, got {self.lmax}")
        if self.k < 1:
            raise NetworkError(f"hierarchy needs k >= 1, got {self.k}")
        if not 0 < self.r <= 1:
            raise NetworkError(f"hierarchy needs 0 < r <= 1, got {self.r}")


def build_line(p: LineParams) -> NetworkSpec:
    neurons = tuple(str(v) for v in range(p.lmax + 1))
    edges = {(str(v), str(v + 1)): Fraction(1) for v in range(p.lmax)}
    if p.persistent_variant is LineVariant.SELF_LOOP_ON_1:
        edges[("1", "1")] = Fraction(1)
    return NetworkSpec.checked(
        neurons=neurons,
        input_neurons=frozenset({"0"}),
        edges=edges,
        thresholds={v: Fraction(1) for v in neurons[1:]},
        name=f"line(lmax={p.lmax})",
    )


def build_ring(p: RingParams) -> NetworkSpec:
    neurons = tuple(str(v) for v in range(p.lmax + 1))
    edges = {(str(v), str(v + 1)): Fraction(1) for v in range(p.lmax)}
    edges[(str(p.lmax), "1")] = Fraction(1)
    return NetworkSpec.checked(
        neurons=neurons,
        input_neurons=frozenset({"0"}),
        edges=edges,
        thresholds={v: Fraction(1) for v in neurons[1:]},
        name=f"ring(lmax={p.lmax})",
    )


def hierarchy_name(path: tuple[int, ...], k: int) -> NeuronId:
    """Name a tree node by its child-index path from the root, e.g. ``v_121``.

    Children are numbered from 1.  For ``k > 9`` the digits are dot-separated.
    """
    if not path:
        return ROOT
    sep = "." if k > 9 else ""
    return "v_" + sep.join(str(i) for i in path)


def hierarchy_level(name: NeuronId, lmax: int, k: int) -> int:
    if name == ROOT:
        return lmax
    digits = name[2:].split(".") if k > 9 else list(name[2:])
    return lmax - len(digits)


def build_hierarchy(p: HierarchyParams) -> NetworkSpec:
    """Complete k-ary tree with edges directed from children to parents.

    Leaves (level 0) are the inputs.  Every other node has threshold ``r*k``.
    With ``layer1_self_loops`` each level-1 node also gets a self-loop of
    weight ``r*k`` so it keeps firing once triggered.
    """
    neurons: list[NeuronId] = []
    edges: dict[tuple[NeuronId, NeuronId], Fraction] = {}
    inputs: set[NeuronId] = set()
    # top-down, so the root comes first and leaves last
    for depth in range(p.lmax + 1):
        for path in itertools.product(range(1, p.k + 1), repeat=depth):
            name = hierarchy_name(path, p.k)
            neurons.append(name)
            if depth == p.lmax:
                inputs.add(name)
            if path:
                edges[(name, hierarchy_name(path[:-1], p.k))] = Fraction(1)
    threshold = p.r * p.k
    if p.layer1_self_loops:
        for path in itertools.product(range(1, p.k + 1), repeat=p.lmax - 1):
            name = hierarchy_name(path, p.k)
            edges[(name, name)] = threshold
    return NetworkSpec.checked(
        neurons=tuple(neurons),
        input_neurons=frozenset(inputs),
        edges=edges,
        thresholds={v: threshold for v in neurons if v not in inputs},
        name=f"hierarchy(lmax={p.lmax}, k={p.k}, r={p.r})",
    )


def leaves(net: NetworkSpec) -> list[NeuronId]:
    return [v for v in net.neurons if v in net.input_neurons]
