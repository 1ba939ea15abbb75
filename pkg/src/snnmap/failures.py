"""Failure-pattern generators for detailed networks.

Every generator returns a pattern that satisfies both survival constraints,
or raises :class:`FailureGenerationError`.

Random patterns use :class:`random.Random` (MT19937) seeded with the policy's
64-bit seed.  Neurons are visited in network order, then edges in network
order; each element consumes one ``randrange(q)`` draw and fails when the
draw is below ``p`` for the probability ``p/q``.  Probabilities are therefore
applied exactly, and a pattern depends only on the seed, the probabilities
and the network.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import FailurePattern, NetworkError, NetworkSpec, NeuronId, as_fraction
from .derive import (
    ConstraintReport,
    CopiesMap,
    DerivationParams,
    validate_failure_constraints,
)


class FailureGenerationError(RuntimeError):
    def __init__(self, message: str, attempts: int = 0, report: ConstraintReport | None = None):
        super().__init__(message)
        self.attempts = attempts
        self.report = report


class PolicyKind(str, enum.Enum):
    NONE = "none"
    PAPER_ADVERSARIAL = "paper_adversarial"
    RANDOM_IID = "random_iid"
    MAXIMAL = "maximal"


@dataclass(frozen=True)
class GeneratorPolicy:
    kind: PolicyKind = PolicyKind.NONE
    p_neuron: Fraction = Fraction(0)
    p_edge: Fraction = Fraction(0)
    seed: int = 0
    max_attempts: int = 100

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PolicyKind(self.kind))
        object.__setattr__(self, "p_neuron", as_fraction(self.p_neuron))
        object.__setattr__(self, "p_edge", as_fraction(self.p_edge))
        for label, p in (("p_neuron", self.p_neuron), ("p_edge", self.p_edge)):
            if not 0 <= p < 1:
                raise NetworkError(f"{label} must lie in [0, 1), got {p}")
        if not 0 <= self.seed < 2**64:
            raise NetworkError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.max_attempts < 1:
            raise NetworkError(f"max_attempts must be >= 1, got {self.max_attempts}")


def _abstract_edges(d: NetworkSpec, cmap: CopiesMap) -> list[tuple[NeuronId, NeuronId]]:
    back = cmap.backward
    seen: dict[tuple[NeuronId, NeuronId], None] = {}
    for x, y in d.edges:
        if x in back and y in back:
            seen.setdefault((back[x], back[y]), None)
    return list(seen)


def _paper_adversarial(d: NetworkSpec, cmap: CopiesMap) -> FailurePattern:
    neurons = {copies[-1] for copies in cmap.forward.values()}
    edges = set()
    for u, v in _abstract_edges(d, cmap):
        lowest = cmap.forward[u][0]
        for y in cmap.forward[v]:
            edges.add((lowest, y))
    return FailurePattern(frozenset(neurons), frozenset(edges))


def _maximal(d: NetworkSpec, cmap: CopiesMap, params: DerivationParams) -> FailurePattern:
    m = params.m
    n_fail = max(0, m - math.ceil(params.s_V * m))
    dead = {c for copies in cmap.forward.values() for c in copies[m - n_fail :]}
    need = params.min_surviving_edges
    edges = set()
    for u, v in sorted(_abstract_edges(d, cmap), key=lambda e: (e[0], e[1])):
        sources = cmap.forward[u]
        for y in cmap.forward[v]:
            good = sum(1 for x in sources if x not in dead)
            for x in sources:  # lowest source index first
                if x in dead:
                    edges.add((x, y))
                elif good - 1 >= need:
                    edges.add((x, y))
                    good -= 1
    return FailurePattern(frozenset(dead), frozenset(edges))


def _bernoulli(rng: random.Random, p: Fraction) -> bool:
    if p == 0:
        return False
    return rng.randrange(p.denominator) < p.numerator


def _random_iid(d: NetworkSpec, policy: GeneratorPolicy, rng: random.Random) -> FailurePattern:
    neurons = frozenset(v for v in d.neurons if _bernoulli(rng, policy.p_neuron))
    edges = frozenset(e for e in d.edges if _bernoulli(rng, policy.p_edge))
    return FailurePattern(neurons, edges)


def generate(
    d: NetworkSpec,
    cmap: CopiesMap,
    params: DerivationParams,
    policy: GeneratorPolicy,
) -> FailurePattern:
    kind = policy.kind
    if kind is PolicyKind.NONE:
        return FailurePattern()
    if kind is PolicyKind.RANDOM_IID:
        rng = random.Random(policy.seed)
        last = None
        for _ in range(policy.max_attempts):
            pattern = _random_iid(d, policy, rng)
            last = validate_failure_constraints(d, cmap, params, pattern)
            if last.satisfied:
                return pattern
        raise FailureGenerationError(
            f"no constraint-satisfying pattern after {policy.max_attempts} attempts "
            f"(p_neuron={policy.p_neuron}, p_edge={policy.p_edge}, seed={policy.seed})",
            attempts=policy.max_attempts,
            report=last,
        )
    if kind is PolicyKind.PAPER_ADVERSARIAL:
        pattern = _paper_adversarial(d, cmap)
    else:
        pattern = _maximal(d, cmap, params)
    report = validate_failure_constraints(d, cmap, params, pattern)
    if not report.satisfied:
        raise FailureGenerationError(
            f"{kind.value} pattern violates the survival constraints for these params: "
            + report.violations[0].describe(),
            report=report,
        )
    return pattern


def reproducibility_check(
    d: NetworkSpec,
    cmap: CopiesMap,
    params: DerivationParams,
    policy: GeneratorPolicy,
) -> bool:
    """True when two generations with the same policy agree."""
    if policy.kind is not PolicyKind.RANDOM_IID:
        raise NetworkError("reproducibility_check applies to random_iid policies")
    return generate(d, cmap, params, policy) == generate(d, cmap, params, policy)
