"""Exception types raised by the library."""


class ExtLagError(Exception):
    """Base class for library errors."""


class MeshError(ExtLagError, ValueError):
    """Malformed mesh or invalid mesh request."""


class SpaceError(ExtLagError, ValueError):
    """Invalid finite element space request or degenerate element."""


class QuadratureError(ExtLagError, ValueError):
    """No rule of the requested degree."""


class FactorizationError(ExtLagError, ArithmeticError):
    """Singular or numerically broken factorization.

    Attributes
    ----------
    pivot : int or None
        Index of the offending pivot when it can be located.
    """

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class ConvergenceError(ExtLagError, RuntimeError):
    """Iterative eigensolver did not converge.

    Attributes
    ----------
    partial : object
        Whatever converged before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
