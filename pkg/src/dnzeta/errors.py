"""Exception types shared across the package."""


class DnZetaError(Exception):
    """Base class for all package-specific errors."""


class PoleError(DnZetaError):
    """A special function was evaluated at (or too close to) a pole."""


class DomainError(DnZetaError):
    """Arguments lie outside the domain an algorithm is certified for."""


class BarnesZeroError(DnZetaError):
    """The Barnes G function vanishes at the requested point, so its
    logarithm is undefined.  Callers that expect zeros (e.g. determinant
    formulas with removable singularities) catch this and branch."""


class InvalidSequenceError(DnZetaError):
    """An eigenvalue sequence violates its declared invariants."""


class InsufficientDataError(DnZetaError):
    """A statistical estimate was requested from too small a sample."""


class ConvergenceError(DnZetaError):
    """An iterative scheme failed to reach its target tolerance."""


class TruncationError(DnZetaError):
    """A finite-dimensional truncation is too small for the requested
    operation, so the result would carry an uncontrolled projection
    error.  Raised instead of silently returning a polluted matrix."""


class EnumerationBudgetError(DnZetaError):
    """A word enumeration exceeded its word-count budget.

    The ``partial`` attribute carries the spectrum computed from the
    deepest word length that fit inside the budget, with its
    ``complete_up_to`` certificate shrunk to match.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
