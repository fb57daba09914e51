"""Typed errors raised across the package."""


class ZigzagError(Exception):
    """Base class for all package errors."""


class InvalidSpecError(ZigzagError, ValueError):
    """A scheme, order or configuration value is not admissible."""


class InvalidOrderError(InvalidSpecError):
    """Order is non-positive, or odd for a centred family."""


class UnsupportedLimitError(InvalidSpecError):
    """No infinite-order rule exists for the requested family."""


class StencilSizeError(InvalidSpecError):
    """The field is too short for the stencil span."""


class CoefficientOverflowError(ZigzagError, OverflowError):
    """A floating-point coefficient path left the double range."""


class SingularSystemError(ZigzagError, ZeroDivisionError):
    """A linear system has no unique solution (duplicate nodes, zero pivot)."""

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class AnalysisError(ZigzagError, RuntimeError):
    """A stability search could not bracket or resolve its target."""


class SolverError(ZigzagError, RuntimeError):
    """A time integration failed numerically."""

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot
