"""Exceptions shared across the package."""


class FanbarError(Exception):
    pass


class PreconditionError(FanbarError, ValueError):
    """An argument violates a documented precondition."""


class InvalidInput(FanbarError, ValueError):
    """Malformed value, e.g. a non-binary code where a binary one is needed."""


class BudgetExceeded(FanbarError):
    """A bounded search ran out of budget before reaching an answer.

    This is never a negative answer: the object searched for may still exist.
    """

    def __init__(self, message="budget exhausted", consumed=None):
        super().__init__(message)
        self.consumed = consumed


class CorruptGraph(FanbarError):
    """Two graph entries with comparable inputs disagree."""

    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


class WitnessViolation(FanbarError):
    """A supplied witness (modulus, bound, perfection oracle) failed a check."""


class NoInhabitant(FanbarError):
    """An enumeration produced nothing within budget."""
