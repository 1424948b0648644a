"""Exception types shared across the toolkit."""

from __future__ import annotations


class PmkitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(PmkitError):
    """Invalid or incomplete configuration (schema mapping, plan, CLI config)."""


class ParseError(PmkitError):
    """Malformed input row or line; carries the 1-based position."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InsufficientDataError(PmkitError):
    """A sampling pool is too small for the requested split sizes."""
