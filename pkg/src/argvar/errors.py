"""Exception hierarchy shared by every module."""


class ArgvarError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ArgvarError, ValueError):
    """A point lies outside the domain where an expression or metric is defined."""


class ZeroValueError(DomainError):
    """A function value is numerically zero where a nonzero value is required."""


class CurveError(ArgvarError, ValueError):
    """A curve violates its structural invariants."""


class CuspError(CurveError):
    """Consecutive tangents reverse direction at a vertex."""


class RegionError(ArgvarError, ValueError):
    """A region violates its structural invariants."""


class ContainmentError(ArgvarError, ValueError):
    """A set is not contained in the region it is measured against."""


class DisconnectedError(ArgvarError):
    """A discretized set is not path connected."""


class UnsupportedShapeError(ArgvarError, NotImplementedError):
    """No closed-form construction exists for the given shape."""


class BranchPointError(DomainError):
    """A curve or region passes through the branch point of a cover."""


class TangencyError(ArgvarError):
    """A curve meets the cut of a cover tangentially."""


class NonconvergenceError(ArgvarError, RuntimeError):
    """An adaptive refinement hit its maximum depth without converging."""


class ZeroFunctionError(ArgvarError, ValueError):
    """A function is numerically identically zero on a compact set."""


class ZeroOnCurveError(ZeroValueError):
    """A function vanishes (numerically) on a curve."""


class BoundaryZeroError(ZeroOnCurveError):
    """A function vanishes (numerically) on the boundary of a region."""


class NonIntegerWindingError(ArgvarError):
    """An argument-principle winding number failed to settle on an integer."""


class HypothesisError(ArgvarError):
    """A hypothesis of an inequality is not met by the measured geometry."""

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis


class ParseError(ArgvarError, ValueError):
    """A scenario file could not be parsed."""


class ValidationError(ArgvarError, ValueError):
    """A parsed scenario violates a declared invariant."""
