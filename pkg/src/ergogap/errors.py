"""Exception types shared across the package."""


class ErgogapError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(ErgogapError):
    pass


class NoConvergence(ErgogapError):
    pass


class DimensionMismatch(ErgogapError):
    pass


class BadDims(DimensionMismatch):
    pass


class BadIndex(ErgogapError):
    pass


class NotQubit(ErgogapError):
    pass


class BadProbability(ErgogapError):
    pass


class BadBloch(ErgogapError):
    pass


class BadBeta(ErgogapError):
    pass


class InvalidState(ErgogapError):
    """Raised by state validation; ``violations`` lists every failed check.

    Each violation is a ``(name, magnitude)`` pair, e.g. ``("TraceNotOne", 2.0)``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(", ".join(f"{name}({value:.6g})" for name, value in self.violations))
