"""Exception hierarchy.

Two families: :class:`ValidationError` for violated preconditions (bad
geometry, bad bracket, bad arguments) and :class:`NumericalError` for
failures that happen while integrating or iterating.
"""


class NoseConeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NoseConeError, ValueError):
    pass


class NumericalError(NoseConeError, ArithmeticError):
    pass


class GeometryMismatch(ValidationError):
    pass


class NoBracket(ValidationError):
    pass


class SingularAbscissa(NumericalError):
    pass


class SingularSlope(NumericalError):
    pass


class MaxStepsExceeded(NumericalError):
    pass


class EventNotReached(NumericalError):
    pass


class DegenerateChord(NumericalError):
    pass


class SecantBreakdown(NumericalError):
    pass


class MaxIterationsExceeded(NumericalError):
    pass


class PhiDomainError(NumericalError):
    pass
