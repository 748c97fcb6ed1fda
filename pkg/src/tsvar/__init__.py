"""tsvar: calculus of variations on time scales.

Exact delta calculus on computable bounded time scales, evaluation of
variational functionals, discrete Euler-Lagrange residuals and solving,
and excess-function (Weierstrass-type) necessary-condition scans.
"""

from .calculus import (
    DerivativeKind,
    DerivativeValue,
    GridFunction,
    delta_derivative,
    delta_integral,
    norm_strong,
    norm_weak,
)
from .dual import Dual
from .errors import (
    AtScaleMaximum,
    DomainError,
    EmptyInterval,
    ExpressionSyntaxError,
    InsufficientPoints,
    InvalidParameter,
    InvalidSpikeLocation,
    NonConvergence,
    NonDifferentiablePoint,
    PointNotInScale,
    ProblemFileError,
    ReversedBounds,
    SingularJacobian,
    TsvarError,
    UnknownIdentifier,
)
from .expressions import Lagrangian, parse_lagrangian
from .timescale import (
    DenseInterval,
    DiscretePoints,
    Geometric,
    PointClass,
    Side,
    TimeScale,
    Uniform,
    make_dense,
    make_geometric,
    make_harmonic,
    make_points,
    make_uniform,
    union,
)
from .variational import (
    Admissibility,
    SolveResult,
    SpikeWitness,
    Trajectory,
    VariationalProblem,
    el_residual,
    find_spike_below,
    functional,
    is_admissible,
    random_bounded_slope_trajectory,
    solve_el_discrete,
    spike_perturbation,
)
from .weierstrass import (
    AnalysisReport,
    ConvexityCounterexample,
    ConvexityReport,
    ExcessSample,
    SlopeKind,
    Verdict,
    check_convexity_condition,
    classify_candidate,
    default_q_grid,
    excess,
    weierstrass_scan,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "Admissibility",
    "AtScaleMaximum",
    "ConvexityCounterexample",
    "ConvexityReport",
    "DenseInterval",
    "DerivativeKind",
    "DerivativeValue",
    "DiscretePoints",
    "DomainError",
    "Dual",
    "EmptyInterval",
    "ExcessSample",
    "ExpressionSyntaxError",
    "Geometric",
    "GridFunction",
    "InsufficientPoints",
    "InvalidParameter",
    "InvalidSpikeLocation",
    "Lagrangian",
    "NonConvergence",
    "NonDifferentiablePoint",
    "PointClass",
    "PointNotInScale",
    "ProblemFileError",
    "ReversedBounds",
    "Side",
    "SingularJacobian",
    "SlopeKind",
    "SolveResult",
    "SpikeWitness",
    "TimeScale",
    "Trajectory",
    "TsvarError",
    "Uniform",
    "UnknownIdentifier",
    "VariationalProblem",
    "Verdict",
    "check_convexity_condition",
    "classify_candidate",
    "default_q_grid",
    "delta_derivative",
    "delta_integral",
    "el_residual",
    "excess",
    "find_spike_below",
    "functional",
    "is_admissible",
    "make_dense",
    "make_geometric",
    "make_harmonic",
    "make_points",
    "make_uniform",
    "norm_strong",
    "norm_weak",
    "parse_lagrangian",
    "random_bounded_slope_trajectory",
    "solve_el_discrete",
    "spike_perturbation",
    "union",
    "weierstrass_scan",
]
