"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the physical or mathematical domain of an operation."""


class NoIntensityError(DomainError):
    """The pair-emission intensity vanishes, so the conditional polarization
    state is undefined at the requested direction."""
