"""Exception types shared across the package."""


class MZKError(Exception):
    """Base class for all library errors."""


class DomainError(MZKError, ValueError):
    """An argument lies outside the region where the quantity is real/defined."""


class PoleError(MZKError, ArithmeticError):
    """Evaluation hit a pole (vanishing denominator)."""


class DegenerateInputError(MZKError, ValueError):
    """The polynomial has no usable degree (constant or linear)."""


class UnsupportedStructureError(MZKError):
    """A root structure that no classification row covers.

    Every pattern has a row, so this signals a tolerance failure in root
    clustering.  ``pattern`` carries the offending structure name.
    """

    def __init__(self, message, pattern=None):
        super().__init__(message)
        self.pattern = pattern


class NotASolutionError(MZKError):
    """Samples whose first integrals are not constant."""

    def __init__(self, message, deviations=None):
        super().__init__(message)
        self.deviations = deviations or {}


class NoRootInBracketError(MZKError, ValueError):
    pass


class BlowUpError(MZKError, ArithmeticError):
    pass


class InsufficientDomainError(MZKError):
    """More than half of the residual sample points were unusable."""


class BoundaryCaseWarning(UserWarning):
    """A classification sign test fell inside its dead zone."""
