"""Exception hierarchy for the genmeas package."""


class GenmeasError(Exception):
    """Base class for all genmeas errors."""


class DimensionMismatch(GenmeasError):
    """Operands have incompatible dimensions."""


class NotHermitian(GenmeasError):
    """Matrix fails the Hermiticity check at the given tolerance."""


class NotPSD(GenmeasError):
    """Matrix has an eigenvalue below the allowed negative tolerance."""


class ZeroProbabilityBranch(GenmeasError):
    """Conditioning on an outcome whose probability is numerically zero."""


class NonFiniteThreshold(GenmeasError):
    """Trajectory simulation requested with an infinite readout threshold."""


class InvalidOrdering(GenmeasError):
    """Threshold computation requested for p + q < 1 (R0 would be negative)."""


class MaxDurationExceeded(GenmeasError):
    """Trajectory failed to reach a threshold within the duration cap."""


class OutOfRange(GenmeasError):
    """Angle pair maps outside the valid probability range."""


class UnknownVariant(GenmeasError):
    """Unrecognized circuit variant name."""


class NotComplete(GenmeasError):
    """Kraus set violates the completeness condition."""

    def __init__(self, deviation: float):
        self.deviation = float(deviation)
        super().__init__(f"completeness violated: deviation {deviation:.3e}")


class NormExceeded(GenmeasError):
    """Operator has |N|^2 with an eigenvalue above 1."""


class SingularRemainder(GenmeasError):
    """Reduction hit a (near-)singular intermediate remainder operator."""

    def __init__(self, step: int, sigma_min: float):
        self.step = step
        self.sigma_min = float(sigma_min)
        super().__init__(
            f"remainder at step {step} is singular (smallest singular value "
            f"{sigma_min:.3e}); try a different outcome ordering"
        )


class UnknownLeaf(GenmeasError):
    """Requested leaf label does not exist in the protocol."""


class LengthMismatch(GenmeasError):
    """Probability distributions have different lengths."""


class NotDensityMatrix(GenmeasError):
    """Matrix is not a valid density matrix."""


class TraceNotUnit(GenmeasError):
    """Process matrix trace differs from 1 where a trace-preserving map is required."""


class RankViolation(GenmeasError):
    """Fidelity variant requires a rank-1 (purity-preserving) ideal process."""


class ZeroTrace(GenmeasError):
    """Partial fidelity undefined for a zero-trace process matrix."""


class LabelMismatch(GenmeasError):
    """Outcome labels of the two measurement descriptions do not match."""


class IncompleteSet(GenmeasError):
    """POVM elements do not sum to the identity."""
