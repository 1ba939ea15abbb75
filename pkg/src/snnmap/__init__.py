"""Exact discrete-time spiking networks with replicated, failure-prone refinements."""

from .builders import (
    HierarchyParams,
    LineParams,
    LineVariant,
    RingParams,
    build_hierarchy,
    build_line,
    build_ring,
    hierarchy_name,
)
from .check import (
    ActuatorRun,
    CellKind,
    ConstraintError,
    CorrespondingRun,
    RunReport,
    Theorem,
    TheoremReport,
    attach_actuator,
    check_actuator_theorem,
    check_consistency,
    check_firing_theorem,
    check_nonfiring_theorem,
    check_run,
    classify_cells,
    make_actuator_run,
    make_corresponding_run,
)
from .core import (
    NO_FAILURES,
    CompiledNetwork,
    Configuration,
    ExecutionTrace,
    FailurePattern,
    InputSchedule,
    NetworkError,
    NetworkSpec,
    execute,
    incoming_potential,
    step,
    validate_network,
)
from .derive import (
    ConstraintReport,
    CopiesMap,
    DerivationParams,
    derive_a2,
    derive_d,
    lift_input,
    validate_failure_constraints,
)
from .failures import (
    FailureGenerationError,
    GeneratorPolicy,
    PolicyKind,
    generate,
    reproducibility_check,
)
from .oracle import (
    EnumerationLimits,
    enumerate_failure_patterns,
    enumerate_schedules,
    exhaustive_verify,
)

__version__ = "0.1.0"
