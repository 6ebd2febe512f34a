"""Discrete multitime recurrences on the integer lattice.

Define a family of step maps (one per lattice axis), verify that they
commute, and evaluate the resulting recurrence: forward by composed map
powers, on the whole lattice for bijective families, step by step for
time-dependent rules, and in closed form for monoid, additive, and
commuting-matrix specializations.
"""

from .autonomous import (
    COMPATIBLE,
    INCOMPATIBLE,
    SAMPLED_COMPATIBLE,
    AutonomousSystem,
    CompatibilityReport,
    Grid,
    PathIndependence,
    Trajectory,
    check_compatibility,
    eval_box,
    eval_forward,
    path_independence_check,
    walk_path,
)
from .closedforms import (
    MonoidActionSystem,
    eval_additive,
    eval_matrix_system,
    eval_monoid,
    matrix_power,
)
from .errors import LatticeRecError
from .extension import (
    InverseWitness,
    MapClassification,
    NonUniquePair,
    NoExtension,
    UniqueExtension,
    backward_extension_pair,
    classify,
    eval_anywhere,
    invert,
)
from .lattice import (
    MonotonePath,
    MultiIndex,
    enumerate_monotone_paths,
    leq,
    multinomial,
    unit,
)
from .limits import Limits
from .matrices import Matrix
from .monoids import (
    FiniteMonoid,
    IntegerAdditive,
    MatrixMonoid,
    RationalMultiplicative,
)
from .nonautonomous import (
    AffineIntTimed,
    AugmentedState,
    AxisPolynomial,
    MatrixTimed,
    NonAutonomousSystem,
    TablePerTime,
    TimedStepMap,
    check_compatibility_timed,
    eval_timed,
    lift,
    unlift_solution,
    verify_time_component,
)
from .statespace import (
    AffineInt,
    FiniteEnumerated,
    IntegerLine,
    IntegerVector,
    MatrixLinear,
    MapsEqualResult,
    ModularAffine,
    ModularLine,
    ModularVector,
    MonoidTranslate,
    RationalVector,
    StepMap,
    Table,
    apply,
    compose,
    iterate,
    iterate_signed,
    maps_equal,
)

__version__ = "0.1.0"
