"""Exception hierarchy shared by all levelsetlab modules."""


class LevelSetLabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(LevelSetLabError, ValueError):
    """Parameters or inputs violate a documented invariant."""


class DomainError(ValidationError):
    """A point lies outside the domain of the queried function."""


class CapacityError(LevelSetLabError):
    """A configured size budget (table rows, cover size, k) would be exceeded."""


class UncertifiedError(LevelSetLabError):
    """A quantity is requested where the construction certifies no finite bound."""
