"""Exception and warning types shared across the toolkit."""


class PSLabError(Exception):
    """Base class for errors raised by ps_lab."""


class DomainError(PSLabError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class InvalidModulus(PSLabError, ValueError):
    """A modulus that must be a positive integer is zero or negative."""


class PrecisionExhausted(PSLabError):
    """A certified floor could not be decided at the precision cap.

    Raised when the interval enclosure of m**e still straddles an integer
    after the working precision has been escalated to its maximum.
    """


class ArcsOverlap(PSLabError):
    """Two arcs of a dissection intersect; the parameters are out of regime."""


class QuadratureNotConverged(PSLabError):
    """An oscillatory integral did not reach the requested error target."""


class BudgetExceeded(PSLabError):
    """The requested computation exceeds the documented desk-scale budget."""


class GridTooLarge(PSLabError):
    """An experiment grid exceeds the direct-summation budget."""


class GridTooSmallWarning(UserWarning):
    """A sampling grid is too coarse for the identity being checked."""
