"""Exception types shared across the package."""

from __future__ import annotations


class HolonormError(Exception):
    """Base class for errors raised by this package."""


class ParseError(HolonormError, ValueError):
    """Malformed expression text. Carries the character offset of the fault."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class InputError(HolonormError, ValueError):
    """A caller-supplied value violates a precondition."""


class PoleError(HolonormError, ArithmeticError):
    """Clean pole signal: a division met a denominator below the pole threshold.

    Callers that understand poles (the mu certifier) consume this; everyone
    else treats it as out of domain.
    """


class ContainmentError(HolonormError, ArithmeticError):
    """An analytic disc failed the verified-containment check."""
