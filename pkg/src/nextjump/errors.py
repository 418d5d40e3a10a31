"""Exception types shared across the package."""


class NextJumpError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameter(NextJumpError, ValueError):
    """A physical parameter is out of range or non-finite."""


class RegimeMismatch(NextJumpError, ValueError):
    """Parameters are inconsistent with the requested dynamical regime."""


class TruncationOverflow(NextJumpError, RuntimeError):
    """Amplitude leaked into the top of the retained ladder; enlarge n_max."""


class StepSizeUnderflow(NextJumpError, RuntimeError):
    """The adaptive integrator could not meet its tolerance."""


class TailTooHeavy(NextJumpError, ValueError):
    """Survival at the end of the record is too large to integrate reliably."""


class NonMonotoneRecord(NextJumpError, ValueError):
    """A survival record violates monotone decay."""


class TooFewSamples(NextJumpError, ValueError):
    """Not enough uncensored Monte Carlo draws for the requested statistic."""


class QuadratureFailure(NextJumpError, RuntimeError):
    """Adaptive quadrature did not converge."""


class DegenerateCubic(NextJumpError, ValueError):
    """The characteristic polynomial degenerated below cubic order."""
