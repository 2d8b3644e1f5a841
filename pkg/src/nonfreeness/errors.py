"""Exception hierarchy shared by every module."""


class NonfreenessError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(NonfreenessError, ValueError):
    """Input violates a structural invariant (bad index, norm, shape...)."""


class NumberSymmetryViolation(ValidationError):
    """A state mixes particle-number sectors coherently."""


class CapacityError(NonfreenessError):
    """Requested mode count exceeds the configured dense/pure limit."""


class NumericalError(NonfreenessError, ArithmeticError):
    """An eigensolve failed or produced values outside their allowed range."""
