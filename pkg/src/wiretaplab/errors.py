"""Shared exception types."""


class BudgetError(RuntimeError):
    """A bounded search or enumeration exceeded its iteration budget.

    Distinct from a proven negative result: the answer is unknown.
    """
