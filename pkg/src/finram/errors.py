"""Shared exceptions and the search-space guard.

Every exhaustive search in the package goes through :func:`check_guard`
before it starts enumerating, so oversized instances fail loudly instead
of hanging.
"""

from __future__ import annotations

DEFAULT_GUARD = 10_000_000


class FinramError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FinramError):
    """Malformed or inconsistent input (exit code 2 at the CLI)."""


class ParseError(InputError):
    """Syntax error in a structure/formula/pool file, with position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SignatureMismatch(InputError):
    """Two structures that must share a signature do not."""


class GuardExceeded(FinramError):
    """An enumeration would exceed the configured guard (exit code 3)."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(
            f"search space for {what} has {size} items, exceeding guard {limit}"
        )
        self.what = what
        self.size = size
        self.limit = limit


class HypothesisNotSatisfied(FinramError):
    """A checked identity's hypothesis fails on the given instance (exit 1)."""


def check_guard(size: int, what: str, limit: int | None = None) -> None:
    lim = DEFAULT_GUARD if limit is None else limit
    if lim <= 0:
        raise InputError(f"guard limit must be positive, got {lim}")
    if size > lim:
        raise GuardExceeded(what, size, lim)
