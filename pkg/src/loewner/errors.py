"""Exception types shared across the package."""


class LoewnerError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LoewnerError, ValueError):
    """Time outside the declared domain of a driver."""


class ParameterError(LoewnerError, ValueError):
    """Invalid parameter (e.g. non-positive scaling factor)."""


class RegularityError(LoewnerError, ValueError):
    """Operation requires more smoothness than the driver has."""


class StiffnessError(LoewnerError, RuntimeError):
    """Integrator could not proceed: step underflow or collision with the
    moving singularity where none is admissible."""

    def __init__(self, message, t=None, state=None, distance=None):
        super().__init__(message)
        self.t = t
        self.state = state
        self.distance = distance


class ConditioningError(LoewnerError, RuntimeError):
    """A fit or solve is too ill-conditioned to trust."""


class GridError(LoewnerError, ValueError):
    """Incompatible or malformed rasters."""


class PhaseError(LoewnerError, ValueError):
    """Operation not applicable to this phase region."""


class ContinuationError(LoewnerError, RuntimeError):
    """Newton continuation failed to advance."""

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class TraceTooShortError(LoewnerError, ValueError):
    """A trace does not cover the time range the analysis needs."""


class SingularityError(LoewnerError, ValueError):
    """Evaluation at the logarithmic singularity 2/c."""
