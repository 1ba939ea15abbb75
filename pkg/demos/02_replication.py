"""Replicating a network and injecting failures into the copies."""

from __future__ import annotations

from fractions import Fraction

from snnmap import (
    DerivationParams,
    GeneratorPolicy,
    InputSchedule,
    LineParams,
    PolicyKind,
    build_line,
    derive_a2,
    derive_d,
    execute,
    generate,
    lift_input,
    validate_failure_constraints,
)
from snnmap.io import raster

line = build_line(LineParams(5))
params = DerivationParams(m=4, s_V=Fraction(3, 4), s_E=Fraction(2, 3))

# %% Lowered thresholds (A2) and the replicated network (D).
a2 = derive_a2(line, params)
d, copies = derive_d(line, params)
print("A2 thresholds:", sorted(set(a2.thresholds.values())))
print(f"D: {len(d.neurons)} neurons, {len(d.edges)} edges, weights {set(d.edges.values())}")

# %% Fail the highest copy of every neuron and one incoming edge per copy.
failure = generate(d, copies, params, GeneratorPolicy(PolicyKind.PAPER_ADVERSARIAL))
print(validate_failure_constraints(d, copies, params, failure).satisfied)

# %% Random failures are reproducible from the seed.
policy = GeneratorPolicy(PolicyKind.RANDOM_IID, Fraction(1, 8), Fraction(1, 8), seed=42)
print(generate(d, copies, params, policy) == generate(d, copies, params, policy))

# %% Surviving copies of a firing input fire; three copies of each neuron carry the pulse.
schedule = lift_input(InputSchedule.pulse(line.input_neurons, 7), copies, failure, detailed=d)
print(raster(execute(d, schedule, failure)))
