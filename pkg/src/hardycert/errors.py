"""Exception hierarchy shared by every module."""


class HardyError(Exception):
    """Base class for all errors raised by this package."""


class DivergenceError(HardyError, ValueError):
    """A tail sum was requested for a weight family whose series diverges."""


class OutOfRangeError(HardyError, IndexError):
    """An index lies outside tabulated data and no tail rule is available."""


class DomainError(HardyError, ValueError):
    """A quantity left the domain where it is defined (log of a nonpositive number, ...)."""


class RegimeError(HardyError, ValueError):
    """Parameters violate the regime an inequality is stated for."""


class InvalidRegionError(HardyError, ValueError):
    """A statement was evaluated outside its hypothesis region."""

    def __init__(self, statement, reason):
        super().__init__(f"{statement}: {reason}")
        self.statement = statement
        self.reason = reason


class SearchError(HardyError, RuntimeError):
    """A root or parameter search failed to bracket a solution."""
