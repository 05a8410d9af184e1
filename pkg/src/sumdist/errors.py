"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class QuantileOutOfRange(ValueError):
    """A requested quantile level is not bracketed by the distribution table."""
