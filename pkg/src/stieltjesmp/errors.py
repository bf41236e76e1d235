"""Exception hierarchy for the moment-problem pipeline.

Every error raised by this package derives from :class:`MomentProblemError`,
so callers can catch one base class at pipeline boundaries.
"""


class MomentProblemError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(MomentProblemError):
    """A structured document (JSON input, tau description) is malformed."""


class NotHermitian(MomentProblemError):
    """An input matrix deviates from Hermitian symmetry beyond tolerance."""


class OrderTooHigh(MomentProblemError):
    """A block Hankel matrix of the requested order needs moments past the data."""


class OrderTooLow(MomentProblemError):
    """The moment sequence is too short to determine the shift operator."""


class NotPSD(MomentProblemError):
    """A Gram matrix that must be positive semi-definite is not."""


class InconsistentTruncation(MomentProblemError):
    """The kernel of the truncated Gram is not mapped into the kernel of its
    shift, so the data do not determine a well-defined shift operator."""


class BadPoint(MomentProblemError):
    """An evaluation point z lies on [0, inf) where resolvents are undefined."""


class PropertyViolated(MomentProblemError):
    """A verified operator property (Hermitian symmetry, non-negativity,
    contractivity) fails; carries a witness vector when available."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CompletionInfeasible(MomentProblemError):
    """The contractive-completion range condition is violated beyond
    tolerance; the input operator data are numerically inconsistent."""


class NotIndeterminate(MomentProblemError):
    """Boundary-parameter machinery requested for an operator with trivial
    defect (the problem is determinate)."""


class WeylLimitDivergent(MomentProblemError):
    """The Weyl function has no finite limit at 0 (an eigenvalue of the
    Friedrichs extension at 0 overlaps the defect space)."""


class NotStieltjesClass(MomentProblemError):
    """A parameter function fails the sampled kernel test for the admissible
    Stieltjes parameter class."""

    def __init__(self, message, worst_eig=None):
        super().__init__(message)
        self.worst_eig = worst_eig


class ParameterDegenerate(MomentProblemError):
    """The parameter block of Krein's formula is numerically singular."""


class PoleHit(MomentProblemError):
    """A transform was evaluated at (or too close to) an atom of the measure."""


class NoConvergence(MomentProblemError):
    """Richardson extrapolation across the inversion schedule did not settle."""
