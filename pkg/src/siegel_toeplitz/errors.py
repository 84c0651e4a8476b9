"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class UnsupportedClassError(ValueError):
    """A symbol does not belong to a class the operation supports."""


class NonMemberError(ValueError):
    """A matrix function fails a structural condition required by a functional."""


class IntegrationError(RuntimeError):
    """Adaptive integration ran out of budget before reaching its tolerance.

    The best available estimate is attached as ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
