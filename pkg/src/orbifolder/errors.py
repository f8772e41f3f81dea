"""Exception hierarchy shared by every module.

Validation failures mean the input or a constructed object violates a
structural contract; cap failures mean a resource guard fired before the
computation was attempted.  The CLI maps them to distinct exit codes.
"""

from __future__ import annotations

__all__ = [
    "OrbifolderError",
    "ValidationError",
    "CapExceededError",
    "InvarianceViolationError",
    "ModelInconsistencyError",
]


class OrbifolderError(Exception):
    """Base class for all library errors."""


class ValidationError(OrbifolderError):
    """Input or constructed object violates a structural contract."""


class CapExceededError(OrbifolderError):
    """A configured resource cap would be exceeded; nothing was computed."""


class InvarianceViolationError(ValidationError):
    """A function claimed to be isomorphism-invariant is not."""


class ModelInconsistencyError(ValidationError):
    """A computed quantity violates an integrality or consistency law."""
