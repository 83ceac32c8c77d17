"""Exception hierarchy shared by the transforms, denoisers and CLI."""


class LrhaarError(Exception):
    """Base class for all package errors."""


class LengthError(LrhaarError, ValueError):
    """Input length is not a power of two, or lengths disagree."""


class ShapeError(LrhaarError, ValueError):
    """A decomposition has inconsistent per-scale lengths."""


class DomainError(LrhaarError, ValueError):
    """Data outside the support of the selected noise family."""


class InfeasibleCoefficientError(LrhaarError, ValueError):
    """An (s, g) pair that no pair of child means can produce.

    ``scale`` and ``location`` follow the 1-based (j, k) convention of the
    transforms and are ``None`` when the pair was solved in isolation.
    """

    def __init__(self, message, scale=None, location=None):
        super().__init__(message)
        self.scale = scale
        self.location = location
