"""The three example families and how activity moves through them."""

from __future__ import annotations

from fractions import Fraction

from snnmap import (
    HierarchyParams,
    InputSchedule,
    LineParams,
    LineVariant,
    RingParams,
    build_hierarchy,
    build_line,
    build_ring,
    execute,
)
from snnmap.io import raster

# %% A line carries a single pulse from left to right and then falls silent.
line = build_line(LineParams(5))
print(raster(execute(line, InputSchedule.pulse(line.input_neurons, 8))))

# %% One self-loop on neuron 1 turns the pulse into persistent activity.
looped = build_line(LineParams(5, LineVariant.SELF_LOOP_ON_1))
print(raster(execute(looped, InputSchedule.pulse(looped.input_neurons, 8))))

# %% A ring keeps the pulse circulating forever.
ring = build_ring(RingParams(5))
print(raster(execute(ring, InputSchedule.pulse(ring.input_neurons, 12))))

# %% A hierarchy recognises enough leaves: each parent needs r*k of its children.
tree = build_hierarchy(HierarchyParams(3, 3, Fraction(2, 3)))
spread = ["v_111", "v_112", "v_121", "v_122", "v_211", "v_212", "v_221", "v_222"]
trace = execute(tree, InputSchedule.pulse(tree.input_neurons, 4, spread))
print("root fires at", trace.firing_times("v_lambda"))

# Nineteen leaves placed badly never reach the root.
crowded = (
    "v_111 v_112 v_113 v_121 v_122 v_123 v_131 v_132 v_133 "
    "v_211 v_212 v_213 v_221 v_231 v_311 v_312 v_313 v_321 v_331"
).split()
trace = execute(tree, InputSchedule.pulse(tree.input_neurons, 4, crowded))
print("root fires at", trace.firing_times("v_lambda"))
