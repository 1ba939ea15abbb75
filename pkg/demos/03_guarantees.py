"""Checking the firing, nonfiring and actuator guarantees on single runs."""

from __future__ import annotations

from fractions import Fraction

from snnmap import (
    DerivationParams,
    GeneratorPolicy,
    HierarchyParams,
    InputSchedule,
    LineParams,
    PolicyKind,
    build_hierarchy,
    build_line,
    check_run,
    classify_cells,
    make_actuator_run,
    make_corresponding_run,
)

params = DerivationParams(4, Fraction(3, 4), Fraction(2, 3))

# %% Line with an input at every even time, adversarial failures and an actuator on neuron 5.
line = build_line(LineParams(5))
run = make_corresponding_run(
    line,
    params,
    GeneratorPolicy(PolicyKind.PAPER_ADVERSARIAL),
    InputSchedule.every(line.input_neurons, 7, 2),
)
result = check_run(run, actuator_on="5")
for report in result.reports:
    print(f"{report.theorem.value:16} passed={report.passed} premises={report.premises}")
print("fewest firing copies when A1 fires:", result.reports[1].min_count)

# %% The actuator sees the same external behaviour in A1, A2 and D.
pulse = InputSchedule.pulse(line.input_neurons, 8)
run = make_corresponding_run(line, params, GeneratorPolicy(PolicyKind.MAXIMAL), pulse)
print(make_actuator_run(run, "5").firing_times())

# %% Where A1 is silent but A2 fires, nothing is promised about D.
tree = build_hierarchy(HierarchyParams(3, 3, Fraction(2, 3)))
run = make_corresponding_run(tree, params, None, InputSchedule.pulse(tree.input_neurons, 4, ["v_111"]))
cells = classify_cells(run)
print("middle cells:", cells.middle())
print("root copies firing at t=3:", run.copies_firing("v_lambda", 3))
