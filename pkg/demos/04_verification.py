"""Exhaustive checks on a tiny instance, random trials, and what inhibition breaks."""

from __future__ import annotations

from fractions import Fraction

from snnmap import (
    DerivationParams,
    EnumerationLimits,
    LineParams,
    NetworkSpec,
    build_line,
    exhaustive_verify,
)
from snnmap.fuzz import run_fuzz

tiny = DerivationParams(2, Fraction(1, 2), 1)

# %% Every input schedule against every admissible failure pattern.
summary = exhaustive_verify(build_line(LineParams(2)), tiny, EnumerationLimits(horizon=4), actuator_on="2")
print(f"{summary.runs} runs over {summary.patterns} failure patterns, {len(summary.violations)} violations")

# %% Random trials across all three families; failing trials would be saved as manifests.
fuzz = run_fuzz(200, seed=1)
print(f"{fuzz.passed}/{fuzz.trials} trials passed; families {fuzz.families}")

# %% With an inhibitory edge the nonfiring guarantee no longer holds.
inhibited = NetworkSpec.checked(
    ("u", "w", "v"),
    frozenset({"u", "w"}),
    {("u", "v"): Fraction(-1), ("w", "v"): Fraction(1)},
    {"v": Fraction(1, 2)},
)
summary = exhaustive_verify(inhibited, tiny, EnumerationLimits(horizon=1))
for v in summary.violations[:3]:
    print(v.check, v.neuron, v.time, sorted(v.failure.failed_neurons), sorted(v.failure.failed_edges))
