"""Exception types raised by the library."""


class ResonanceError(Exception):
    """Base class for all computation failures."""


class ZeroMomentum(ResonanceError, ZeroDivisionError):
    pass


class DegenerateCoefficient(ResonanceError):
    pass


class BoundaryZero(ResonanceError):
    """The function being counted vanishes (numerically) on a contour."""


class Incomplete(ResonanceError):
    pass


class NoConvergence(ResonanceError):
    pass


class ToleranceNotMet(ResonanceError):
    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class PoleEvaluation(ResonanceError, ZeroDivisionError):
    pass


class Disagreement(ResonanceError):
    """Two independent routes to the same quantity disagree."""


class GridMismatch(ResonanceError, ValueError):
    pass


class IndexOutOfRange(ResonanceError, IndexError):
    pass
