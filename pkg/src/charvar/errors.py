"""Exception hierarchy.

Domain errors map to CLI exit code 2, budget errors to exit code 3.
"""

import os

DEFAULT_BUDGET = 10_000_000


class CharvarError(Exception):
    pass


class DomainError(CharvarError):
    pass


class ShapeMismatch(DomainError, ValueError):
    pass


class FieldMismatch(DomainError, ValueError):
    pass


class Singular(DomainError, ArithmeticError):
    pass


class NoMarkedPoints(DomainError):
    pass


class NoHoles(DomainError):
    pass


class InvalidBasepoint(DomainError):
    pass


class CannotEliminate(DomainError):
    pass


class NotComposable(DomainError):
    pass


class EigenvaluesNotInField(DomainError):
    pass


class NotInvariant(DomainError):
    pass


class NotClassifiable(DomainError):
    """The flag admits no adapted shuffled Jordan basis."""


class TypeShapeMismatch(DomainError):
    pass


class NotInBorel(DomainError):
    pass


class WrongSubgroup(DomainError):
    pass


class PinningViolated(DomainError):
    pass


class InvalidSegment(DomainError):
    pass


class IndexOutOfRange(DomainError, IndexError):
    pass


class NothingToEliminate(DomainError):
    pass


class EnumerationTooLarge(CharvarError):
    pass


def budget():
    """Enumeration cap in points; the CHARVAR_BUDGET environment variable overrides it."""
    raw = os.environ.get("CHARVAR_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CHARVAR_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError("CHARVAR_BUDGET must be positive")
    return value


def check_budget(count, what="enumeration"):
    cap = budget()
    if count > cap:
        raise EnumerationTooLarge(f"{what} needs {count} items, budget is {cap}")
    return count
