"""Exception types shared across the package."""


class ExpWl1Error(Exception):
    """Base class for all package errors."""


class DomainError(ExpWl1Error):
    """An argument is outside the mathematical domain of the operation."""


class DimensionError(ExpWl1Error):
    """Vector/matrix dimensions do not line up."""


class BudgetError(ExpWl1Error):
    """An exhaustive enumeration would exceed the configured budget."""


class CertificationError(ExpWl1Error):
    """Expansion certification is missing or impossible (eps_2k >= 1/6)."""
