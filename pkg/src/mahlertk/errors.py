"""Exception hierarchy shared by all modules."""


class MahlerError(Exception):
    """Base class for all toolkit errors."""


class ArityMismatch(MahlerError):
    """Point length does not match the number of variables."""


class DimensionMismatch(MahlerError):
    """Matrix / point / variable dimensions disagree."""


class PoleAtPoint(MahlerError):
    """A denominator vanishes at the evaluation point."""

    def __init__(self, point, message=None):
        self.point = tuple(point)
        super().__init__(message or f"denominator vanishes at {self.point}")


class ParseError(MahlerError):
    """Malformed polynomial / JSON input."""


class SingularMatrix(MahlerError):
    """The system matrix has identically zero determinant."""


class SingularTransform(MahlerError):
    """The monomial transformation matrix is singular."""


class ZeroLeadingCoefficient(MahlerError):
    """Scalar Mahler equation with p_0 = 0 cannot be put in companion form."""


class DivergenceRisk(MahlerError):
    """Series evaluation requested outside the open unit polydisc."""


class MissingTailBound(MahlerError):
    """A truncated series without a tail constant cannot be evaluated rigorously."""


class NotRegular(MahlerError):
    """Rigorous evaluation requires a regularity certificate."""


class PrecisionUnreachable(MahlerError):
    """The iteration cap was hit before the target precision was met."""


class InsufficientOrder(MahlerError):
    """Stored series order is too small for the requested verification."""


class InsufficientPrecision(MahlerError):
    """Input enclosures are too wide for the requested search."""


class BlockMismatch(MahlerError):
    """Block structure of a matrix does not match the monomial index."""


class AmbiguousFloor(MahlerError):
    """Interval refinement could not separate a floor value."""


class ResourceCap(MahlerError):
    """An exact computation would exceed the configured size cap."""
