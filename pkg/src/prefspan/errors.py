"""Exception types shared across the package."""

from __future__ import annotations


class PrefspanError(Exception):
    """Base class; ``code`` is a stable machine-readable tag when set."""

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        self.code = code


class InputError(PrefspanError):
    """Malformed or inconsistent input data (bad ids, contradictions)."""


class PreconditionError(PrefspanError):
    """An operation was called outside its stated preconditions."""


class OracleScaleExceeded(PrefspanError):
    """An exhaustive enumeration grew past its configured cap."""


class ConflictError(PrefspanError):
    """A session action that the current state forbids."""


class NotFoundError(PrefspanError):
    """Lookup of an unknown stored object or identifier."""
