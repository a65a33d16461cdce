"""Exception hierarchy.

Errors split into two families so the command-line front end can map them to
exit codes: :class:`ValidationError` (bad input, exit 1) and
:class:`NumericError` (a computation broke down, exit 2).
"""


class LCurveError(Exception):
    """Base class for every error raised by lcurve."""


class ValidationError(LCurveError, ValueError):
    """Input rejected before any numerics ran."""


class NumericError(LCurveError, ArithmeticError):
    """A numerical procedure failed; ``node`` is the offending grid index if known."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class DimensionMismatch(ValidationError):
    pass


class SpecError(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class ParseError(ValidationError):
    """Expression text could not be parsed.

    ``offset`` is the 0-based byte offset, ``column`` the 1-based column and
    ``expected`` the set of token kinds that would have been accepted.
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.column = offset + 1
        self.expected = frozenset(expected)
        detail = f"column {self.column}: {message}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class DomainError(NumericError):
    """Expression evaluated outside its real domain."""


class NullResidual(NumericError):
    """Pseudo-Gram-Schmidt met a (near) null residual."""


class LinearDependence(NumericError):
    pass


class DegenerateCurvature(NumericError):
    """A curvature needed to build the frame vanishes."""

    def __init__(self, message, node=None, index=None):
        super().__init__(message, node)
        self.index = index


class NotUnitSpeed(NumericError):
    pass


class DriftExceeded(NumericError):
    pass


class CurvatureZero(NumericError):
    """A curvature required by a characterization vanishes on the grid."""


class DomainViolation(NumericError):
    """No admissible node for the hyperbolic reparametrization (|G| >= c everywhere)."""
