"""Exception hierarchy shared by all modules.

Three broad categories map onto CLI exit codes: input parsing,
configuration/selection, and numerical computation.
"""
from __future__ import annotations


class ChiroptError(Exception):
    """Base class for all package errors."""


class ParseError(ChiroptError):
    """Malformed input text. Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IntegralRangeError(ParseError):
    """Orbital index outside [1, NORB] in an integral record."""


class IntegralConsistencyError(ParseError):
    """Duplicate record whose value conflicts with an earlier one."""


class DimensionError(ChiroptError):
    """Mismatched array dimensions between combined inputs."""


class SelectionError(ChiroptError):
    """Invalid active-space selection (odd electron count, empty space, ...)."""


class ConfigError(ChiroptError):
    """Invalid run configuration."""


class ComputeError(ChiroptError):
    """Numerical failure inside an engine stage."""
