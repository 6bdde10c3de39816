"""Exception hierarchy shared by every module."""
from __future__ import annotations


class TconvexError(Exception):
    """Base class for library errors."""


class TruncationError(TconvexError):
    """A quantity is not determined at the working truncation order."""


class UndecidableError(TruncationError):
    """A comparison cannot be decided from the known terms."""


class DenominatorLimitError(TconvexError):
    """An exponent denominator exceeded the configured limit."""


class UnsupportedExtension(TconvexError):
    """A computation needs a coefficient field beyond Q(sqrt d)."""


class DomainError(TconvexError):
    """Argument outside the domain of a partial map (e.g. res of a non-unit)."""


class ParseError(TconvexError):
    def __init__(self, message: str, position: int = -1, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        detail = message
        if text and position >= 0:
            detail = f"{message} at position {position}\n  {text}\n  {' ' * position}^"
        super().__init__(detail)


class UnsupportedFormula(TconvexError):
    """A formula is outside the fragment handled by a decision procedure."""


class SamplingExhausted(TconvexError):
    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(f"{message} (after {attempts} attempts)")


class UnresolvedRoots(TconvexError):
    """Root clusters could not be separated at the working truncation."""
