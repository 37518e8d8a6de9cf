"""Exception types shared across the package."""

from __future__ import annotations


class MersenneLabError(Exception):
    """Base class for all package errors."""


class CapExceeded(MersenneLabError, ValueError):
    """A configured resource cap would be exceeded."""


class InexactDivisionError(MersenneLabError, ArithmeticError):
    """An exact-path division left a remainder.

    Every division on an exact path is provably exact,
    so this signals an internal consistency failure and must never be
    swallowed.
    """

    def __init__(self, numerator: int, denominator: int, context: str = "") -> None:
        self.numerator = numerator
        self.denominator = denominator
        self.context = context
        msg = f"inexact division {numerator} / {denominator}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class UndefinedRatio(MersenneLabError, ZeroDivisionError):
    """The coefficient ratio is taken inside a zero lane (0 / 0)."""


class ConsistencyError(MersenneLabError, AssertionError):
    """Two routes that must agree produced different answers."""
