"""Exception types shared across the package."""


class CapacityError(ValueError):
    """An exact computation was requested on an instance too large for it."""


class NonConvergenceError(RuntimeError):
    """An iterative solver hit its iteration limit."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoContractionError(ValueError):
    """No contraction coefficient is available for the given parameters."""


class UnsupportedMotifError(ValueError):
    """A closed form was requested for a motif it does not cover."""


class HypothesisFailure(RuntimeError):
    """A bound's hypotheses do not hold for the supplied model."""
