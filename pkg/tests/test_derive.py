from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import pulse
from snnmap import (
    CopiesMap,
    DerivationParams,
    FailurePattern,
    HierarchyParams,
    InputSchedule,
    NetworkError,
    NetworkSpec,
    build_hierarchy,
    derive_a2,
    derive_d,
    execute,
    lift_input,
    validate_failure_constraints,
    validate_network,
)
from snnmap.failures import GeneratorPolicy, generate
from test_core import networks, schedules


def test_a2_line(line5, params_4):
    a2 = derive_a2(line5, params_4)
    assert set(a2.thresholds.values()) == {Fraction(1, 2)}
    assert dict(a2.edges) == dict(line5.edges)
    assert a2.input_neurons == line5.input_neurons


def test_a2_hierarchy_seven_halves():
    a1 = build_hierarchy(HierarchyParams(3, 5, Fraction(4, 5)))
    params = DerivationParams(32, Fraction(15, 16), Fraction(14, 15))
    assert set(derive_a2(a1, params).thresholds.values()) == {Fraction(7, 2)}


def test_a2_identity(hier333):
    assert derive_a2(hier333, DerivationParams(3, 1, 1)) == hier333


def test_d_line(line5, params_4):
    d, cmap = derive_d(line5, params_4)
    assert len(d.neurons) == 24
    assert len(d.edges) == 80
    assert set(d.edges.values()) == {Fraction(1, 4)}
    assert set(d.thresholds.values()) == {Fraction(1, 2)}
    assert d.input_neurons == {"0#0", "0#1", "0#2", "0#3"}
    assert cmap.copies("3") == ("3#0", "3#1", "3#2", "3#3")
    assert validate_network(d) == []


def test_d_hierarchy_threshold_one(hier333, params_4):
    d, _ = derive_d(hier333, params_4)
    assert set(d.thresholds.values()) == {1}


def test_d_replication_one_is_a1(hier333):
    d, cmap = derive_d(hier333, DerivationParams(1, 1, 1))
    assert d.renamed(cmap.backward) == hier333


def test_derive_rejects_invalid_a1(params_4):
    bad = NetworkSpec(("0", "1"), {"0"}, {("1", "0"): 1}, {"1": 1})
    with pytest.raises(NetworkError):
        derive_d(bad, params_4)
    with pytest.raises(NetworkError):
        derive_a2(bad, params_4)


@pytest.mark.parametrize("m, sv, se", [(0, 1, 1), (2, 0, 1), (2, 1, Fraction(3, 2)), (2, -1, 1)])
def test_params_reject(m, sv, se):
    with pytest.raises(NetworkError):
        DerivationParams(m, sv, se)


def test_copies_map_invariants():
    with pytest.raises(NetworkError):
        CopiesMap({"a": ("x", "y"), "b": ("y", "z")})
    with pytest.raises(NetworkError):
        CopiesMap({"a": ("x", "y"), "b": ("z",)})
    with pytest.raises(NetworkError):
        CopiesMap({"a": ("x",)}, {"x": "b"})


def test_highest_copy_failure_pattern_satisfies_constraints(line5, params_4):
    d, cmap = derive_d(line5, params_4)
    failure = FailurePattern(
        {cmap.copies(v)[-1] for v in line5.neurons},
        {(cmap.copies(u)[0], y) for (u, v) in line5.edges for y in cmap.copies(v)},
    )
    assert validate_failure_constraints(d, cmap, params_4, failure).satisfied


def test_empty_pattern_always_satisfies(hier333, params_4):
    d, cmap = derive_d(hier333, params_4)
    assert validate_failure_constraints(d, cmap, params_4, FailurePattern()).satisfied


def test_constraint_one_violation(line5, params_4):
    d, cmap = derive_d(line5, params_4)
    report = validate_failure_constraints(d, cmap, params_4, FailurePattern(set(cmap.copies("2"))))
    assert not report.satisfied
    ones = [v for v in report.violations if v.constraint == 1]
    assert [(v.neuron, v.actual, v.required) for v in ones] == [("2", 0, 3)]


def test_constraint_two_violation_names_edge_and_copy(line5, params_4):
    d, cmap = derive_d(line5, params_4)
    failure = FailurePattern(failed_edges={("1#0", "2#1"), ("1#1", "2#1"), ("1#2", "2#1")})
    report = validate_failure_constraints(d, cmap, params_4, failure)
    assert [(v.constraint, v.neuron, v.edge, v.copy, v.actual) for v in report.violations] == [
        (2, "2", ("1", "2"), "2#1", 1)
    ]
    assert "2#1" in report.violations[0].describe()


def test_constraint_two_applies_to_failed_targets(line5, params_4):
    d, cmap = derive_d(line5, params_4)
    failure = FailurePattern({"2#3"}, {("1#0", "2#3"), ("1#1", "2#3"), ("1#2", "2#3")})
    report = validate_failure_constraints(d, cmap, params_4, failure)
    assert [v.copy for v in report.violations] == ["2#3"]


def test_non_integral_bounds_are_exact(line5):
    params = DerivationParams(3, Fraction(1, 2), 1)  # need 3/2 copies, so 2
    d, cmap = derive_d(line5, params)
    one_down = FailurePattern({"3#0"})
    two_down = FailurePattern({"3#0", "3#1"})
    assert validate_failure_constraints(d, cmap, params, one_down).satisfied
    assert not validate_failure_constraints(d, cmap, params, two_down).satisfied


def test_constraint_check_mismatches(line5, params_4):
    d, cmap = derive_d(line5, params_4)
    with pytest.raises(NetworkError):
        validate_failure_constraints(d, cmap, DerivationParams(3, 1, 1), FailurePattern())
    with pytest.raises(NetworkError):
        validate_failure_constraints(d, cmap, params_4, FailurePattern({"nope"}))
    other, _ = derive_d(line5, DerivationParams(2, 1, 1))
    with pytest.raises(NetworkError):
        validate_failure_constraints(other, cmap, params_4, FailurePattern())


def test_lift_with_failed_copy(line5, params_4):
    d, cmap = derive_d(line5, params_4)
    lifted = lift_input(pulse(line5, 3), cmap, FailurePattern({"0#3"}), detailed=d)
    assert lifted.firing[0] == {"0#0", "0#1", "0#2"}
    assert all(not f for f in lifted.firing[1:])
    assert lifted.inputs == d.input_neurons
    assert lifted.horizon == 3


def test_lift_silent(line5, params_4):
    _, cmap = derive_d(line5, params_4)
    lifted = lift_input(InputSchedule.silent({"0"}, 4), cmap, FailurePattern())
    assert all(not f for f in lifted.firing)


def test_lift_no_failures(line5, params_4):
    _, cmap = derive_d(line5, params_4)
    lifted = lift_input(InputSchedule.from_times({"0"}, 3, {"0": [0, 2]}), cmap, FailurePattern())
    assert [len(f) for f in lifted.firing] == [4, 0, 4, 0]


def test_lift_rejects_non_inputs(line5, params_4):
    d, cmap = derive_d(line5, params_4)
    with pytest.raises(NetworkError):
        lift_input(InputSchedule.silent({"3"}, 1), cmap, FailurePattern(), detailed=d)
    with pytest.raises(NetworkError):
        lift_input(InputSchedule.silent({"zz"}, 1), cmap, FailurePattern())


params_st = st.builds(
    DerivationParams,
    st.integers(1, 4),
    st.fractions(min_value=Fraction(1, 8), max_value=1, max_denominator=8).filter(lambda s: s > 0),
    st.fractions(min_value=Fraction(1, 8), max_value=1, max_denominator=8).filter(lambda s: s > 0),
)


@settings(max_examples=60, deadline=None)
@given(networks(), params_st)
def test_derivation_invariants(a1, params):
    d, cmap = derive_d(a1, params)
    a2 = derive_a2(a1, params)
    assert validate_network(d) == []
    for v, copies in cmap.forward.items():
        assert len(copies) == params.m
        for i, x in enumerate(copies):
            assert cmap.backward[x] == v
            assert cmap.copies(v)[i] == x
    for (u, v), w in a1.edges.items():
        for y in cmap.copies(v):
            assert sum(d.edges[(x, y)] for x in cmap.copies(u)) == w
    for v in a1.non_input_neurons:
        for y in cmap.copies(v):
            assert d.thresholds[y] == a2.thresholds[v] == params.scale * a1.thresholds[v]
    assert len(d.edges) == len(a1.edges) * params.m**2


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_copies_fire_in_lockstep_without_failures(data):
    a1 = data.draw(networks())
    params = data.draw(params_st)
    sched = data.draw(schedules(a1))
    d, cmap = derive_d(a1, params)
    trace = execute(d, lift_input(sched, cmap, FailurePattern()))
    for t in range(sched.horizon + 1):
        fired = trace.fired_at(t)
        for v, copies in cmap.forward.items():
            n = sum(1 for x in copies if x in fired)
            assert n in (0, params.m)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_unit_replication_reproduces_a1(data):
    a1 = data.draw(networks())
    sched = data.draw(schedules(a1))
    d, cmap = derive_d(a1, DerivationParams(1, 1, 1))
    dtrace = execute(d, lift_input(sched, cmap, FailurePattern()))
    atrace = execute(a1, sched)
    for t in range(sched.horizon + 1):
        assert {cmap.backward[x] for x in dtrace.fired_at(t)} == atrace.fired_at(t)
