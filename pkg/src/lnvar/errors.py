"""Exception types shared across the package."""


class LnvarError(Exception):
    """Base class for all lnvar errors."""


class DomainError(LnvarError, ValueError):
    """Input outside the mathematical domain of an operation."""


class EmptySampleError(DomainError):
    """The operation needs at least one observation."""


class SampleTooSmallError(DomainError):
    """The operation needs more observations than the accumulator holds."""


class DegenerateDistributionError(DomainError):
    """The zero-variance (point mass) case has no density."""


class BudgetExceededError(LnvarError):
    """A simulation would exceed the configured draw budget."""

    def __init__(self, message: str, cost: int, budget: int):
        super().__init__(message)
        self.cost = cost
        self.budget = budget
