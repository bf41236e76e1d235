"""Truncated matrix Stieltjes moment problem, end to end.

Given Hermitian matrix moments ``S_0 .. S_m``, this package decides
solvability through block Hankel positivity, realizes the data as a
non-negative Hermitian shift operator on a finite-dimensional space, decides
determinacy through the gap between the extremal contractive extensions, and
parameterizes the full family of solutions through the resolvent formula of
the boundary machinery, with every output verified by moment round trips.
"""

from .errors import (
    BadPoint,
    CompletionInfeasible,
    InconsistentTruncation,
    MomentProblemError,
    NoConvergence,
    NotHermitian,
    NotIndeterminate,
    NotPSD,
    NotStieltjesClass,
    OrderTooHigh,
    OrderTooLow,
    ParameterDegenerate,
    PoleHit,
    PropertyViolated,
    SchemaError,
    WeylLimitDivergent,
)
from .extensions import (
    ContractionPicture,
    DeterminacyVerdict,
    ExtendedOperator,
    cayley,
    determinacy,
    extend_ext,
    extremal_extensions,
    resolvent_from_contraction,
    sample_sc_extensions,
    spectral_solution,
    transform_from_contraction,
)
from .gns import HilbertRep, build_space, project_onto
from .hankel import (
    BlockHankel,
    MomentSequence,
    ScalarGram,
    SolvabilityReport,
    build_gamma,
    build_gamma_tilde,
    check_solvable,
    load_moments,
    moment_sequence,
    scalarize,
)
from .krein import (
    GammaWeyl,
    TauParameter,
    build_gamma_weyl,
    check_stieltjes_class,
    constant_tau_of_extension,
    extension_of_constant_tau,
    krein_resolvent,
    make_tau,
    solution_transform,
)
from .pipeline import Analysis, Tolerances, analyze, solve_tau_grid, solve_with_tau
from .shiftop import (
    DefectData,
    ShiftOperator,
    build_shift,
    check_nonneg_hermitian,
    defect_subspace,
)
from .solutions import (
    SolutionMeasure,
    TransformSamples,
    measure_distance,
    moments_of_measure,
    perron_invert,
    random_discrete_measure,
    solution_measure,
    transform_of_measure,
    verify_moments,
)

__version__ = "0.1.0"
