"""Exception hierarchy shared by all normrel modules."""


class NormrelError(Exception):
    """Base class for every error raised by the package."""


class InvalidInputError(NormrelError, ValueError):
    """Malformed or out-of-domain input (bad permutation, non-squarefree radicand, ...)."""


class CapExceededError(NormrelError):
    """A configured size cap (group order, enumeration budget) was exceeded."""


class NotAbelianError(InvalidInputError):
    pass


class CyclicGroupError(InvalidInputError):
    pass


class BudgetExceededError(NormrelError):
    """A numeric or search budget ran out before a certified answer was reached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class VerificationError(NormrelError):
    """An exact re-check of a computed object failed.  Never expected in practice."""


class BadReductionError(NormrelError):
    """An element does not reduce to a unit modulo the chosen prime."""
