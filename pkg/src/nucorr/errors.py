"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a documented constraint (range, finiteness, normalization)."""


class SingularityError(DomainError):
    """A derivative was requested at a point where it diverges."""
