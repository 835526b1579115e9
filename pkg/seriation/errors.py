"""
Error hierarchy for the seriation library.

Every error raised on purpose by the library derives from SeriationError, so the
CLI can map it onto an exit code in one place.
"""

from typing import Iterable, Optional, Sequence


class SeriationError(Exception):
    """Base class for all library errors."""


class MatrixParseError(SeriationError, ValueError):
    """A token of a matrix file could not be read as a non-negative integer."""

    def __init__(self, message: str, row: Optional[int] = None, col: Optional[int] = None):
        self.row = row
        self.col = col
        if row is not None and col is not None:
            message = f"{message} (row {row}, column {col})"
        elif row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)


class MatrixShapeError(SeriationError, ValueError):
    """A matrix is not rectangular, or its labels do not fit its shape."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FixtureNotFoundError(SeriationError, LookupError):
    """Unknown fixture or permutation table name."""

    def __init__(self, name: str, valid: Iterable[str]):
        self.name = name
        self.valid = sorted(valid)
        super().__init__(f"unknown fixture '{name}'; valid names: {', '.join(self.valid)}")

    def __str__(self) -> str:
        return self.args[0]


class DomainError(SeriationError, ValueError):
    """An argument lies outside the domain of an operation."""


class ContractError(DomainError):
    """A precondition between operations was violated (e.g. a disconnected Laplacian)."""


class NumericError(SeriationError, ArithmeticError):
    """The eigensolver failed or returned a result outside tolerance."""

    def __init__(self, message: str, component: Optional[Sequence] = None):
        self.component = tuple(component) if component is not None else None
        if self.component is not None:
            message = f"{message} [component {list(self.component)}]"
        super().__init__(message)


class CapacityError(SeriationError):
    """Enumeration was refused because the frontier count exceeds the cap."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(
            f"tree has {count} admissible frontiers, more than the enumeration cap of {cap}"
        )


class TreeFormatError(SeriationError, ValueError):
    """A serialized tree could not be read."""

    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")
