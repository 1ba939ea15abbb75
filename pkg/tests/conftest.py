import sys
from fractions import Fraction

import pytest

from snnmap import (
    DerivationParams,
    HierarchyParams,
    InputSchedule,
    LineParams,
    RingParams,
    build_hierarchy,
    build_line,
    build_ring,
)

B8 = ["v_111", "v_112", "v_121", "v_122", "v_211", "v_212", "v_221", "v_222"]
B19 = (
    "v_111 v_112 v_113 v_121 v_122 v_123 v_131 v_132 v_133 "
    "v_211 v_212 v_213 v_221 v_231 v_311 v_312 v_313 v_321 v_331"
).split()


@pytest.fixture
def line5():
    return build_line(LineParams(5))


@pytest.fixture
def ring5():
    return build_ring(RingParams(5))


@pytest.fixture
def hier333():
    return build_hierarchy(HierarchyParams(3, 3, Fraction(2, 3)))


@pytest.fixture
def params_4():
    return DerivationParams(4, Fraction(3, 4), Fraction(2, 3))


def pulse(net, horizon, fired=None):
    return InputSchedule.pulse(net.input_neurons, horizon, fired)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)
