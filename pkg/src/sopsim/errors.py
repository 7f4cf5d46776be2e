"""Exception hierarchy shared by all modules.

Each class carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class SopsimError(Exception):
    exit_code = 1


class UsageError(SopsimError):
    exit_code = 1


class ParseError(SopsimError, ValueError):
    """Malformed input text. ``lineno`` is 1-based, or None when not line-bound."""

    exit_code = 2

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(SopsimError, ValueError):
    exit_code = 3

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ResourceCapError(SopsimError):
    exit_code = 4


class FourierPrecisionError(SopsimError, ArithmeticError):
    exit_code = 4
