from __future__ import annotations


class SizeGuardError(RuntimeError):
    pass


class BudgetExceededError(SizeGuardError):
    pass


class InexactDivisionError(ArithmeticError):
    pass


class GraphError(ValueError):
    pass


class GraphFormatError(ValueError):
    pass


class CharacterError(KeyError):
    pass


class CheckFailed(AssertionError):
    pass
