"""Exception hierarchy shared by all modules."""


class OrthoError(Exception):
    """Base class for errors raised by this package."""


class ArgumentError(OrthoError, ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedDimensionError(ArgumentError):
    pass


class CapacityError(OrthoError):
    """The requested object would be too large to enumerate."""


class DegenerateError(OrthoError, ArithmeticError):
    """A construction produced a degenerate (zero) output."""


class DegenerateBoundError(OrthoError, ValueError):
    """A closed-form bound leaves its valid range for the given parameters."""


class SamplingExhaustedError(OrthoError, RuntimeError):
    """Rejection sampling ran out of attempts."""

    def __init__(self, message, attempts=0, accepted=0):
        super().__init__(message)
        self.attempts = attempts
        self.accepted = accepted


class NonConvergenceError(OrthoError, RuntimeError):
    """An iterative procedure stopped before meeting its tolerance."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
