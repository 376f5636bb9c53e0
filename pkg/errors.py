"""
Exception hierarchy shared by the library, the CLI and the HTTP service.

Every error carries a human readable ``detail`` and the process ``exit_code``
the CLI should use, the same way an HTTPException pairs a status with a detail.
"""

from typing import List, Optional


class ZonoError(Exception):
    """Base class for all domain errors."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DimensionMismatchError(ZonoError):
    pass


class DomainError(ZonoError):
    """A factor value lies outside [-1, 1]."""


class EnumerationCapError(ZonoError):
    def __init__(self, num_factors: int, cap: int):
        super().__init__(
            f"Enumeration of 2^{num_factors} hypercube vertices exceeds the cap of 2^{cap}"
        )
        self.num_factors = num_factors
        self.cap = cap


class InvalidSetError(ZonoError):
    def __init__(self, violations: List[str]):
        super().__init__("; ".join(violations) if violations else "Invalid set")
        self.violations = list(violations)


class ParseError(ZonoError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column


class SolverError(ZonoError):
    """The simplex pivot budget was exhausted."""


class UnsupportedExpressionError(ZonoError):
    pass


class FactorMismatchError(ZonoError):
    pass


class ComplexityOverflowError(ZonoError):
    pass


class FileAccessError(ZonoError):
    """An input or output file could not be read or written."""


class RangeOverflowError(ZonoError):
    """A computed bound left the floating-point range."""
