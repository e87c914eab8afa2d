"""gstab: sampling-based asymptotic stability checks for discrete-time systems
using G-functions (sign-indefinite, possibly discontinuous, extended-real
certificates whose strict sub-level sets estimate the stability domain)."""

from .checker import (
    CheckReport,
    ClassKFit,
    LambdaSearch,
    Verdict,
    Violation,
    check_connected,
    check_global,
    check_invariance,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    delta_g,
    delta_g_batch,
    find_largest_lambda,
    read_witness_csv,
    verify_attraction,
    write_witness_csv,
)
from .exceptions import (
    ConfigError,
    DimensionMismatch,
    DimensionTooHigh,
    EmptyRegion,
    ExpressionError,
    GStabError,
    InsufficientSamples,
    NoFeasibleLambda,
    NonFiniteOutput,
    UndefinedDifference,
)
from .gfunctions import CATALOG, GFunctionSpec, ValidationReport, builtin_gfunction, eval_g, validate_gfunction
from .numerics import (
    NEG_INF,
    All,
    Ball,
    Box,
    Complement,
    ExtendedReal,
    SamplingPlan,
    SubLevel,
    as_state,
    region_contains,
    sample_region,
    xr_sub,
)
from .systems import (
    Classification,
    DiscreteSystem,
    Outcome,
    TrajectoryRecord,
    builtin_example,
    read_trajectory_csv,
    simulate,
    simulate_batch,
    step,
    verify_equilibrium,
    write_trajectory_csv,
)

__version__ = "0.1.0"
