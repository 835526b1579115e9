"""
Matrix input/output for seriation data.

Reads unit x feature abundance matrices from delimited text, binarizes them,
embeds them in the bipartite adjacency form and serves the case-study matrices
as named fixtures.
"""

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from seriation.errors import DomainError, FixtureNotFoundError, MatrixParseError, MatrixShapeError

logger = logging.getLogger(__name__)

Label = Union[int, str]

_INT_TOKEN = re.compile(r"\+?\d+")
_NEGATIVE_TOKEN = re.compile(r"-\d+(\.\d*)?([eE][+-]?\d+)?")
_REAL_TOKEN = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")
_LABEL_INT = re.compile(r"[+-]?\d+")
_MAX_ENTRY = int(np.iinfo(np.int64).max)


def _default_labels(count: int) -> Tuple[int, ...]:
    return tuple(range(1, count + 1))


def _check_labels(labels: Sequence[Label], count: int, axis: str) -> Tuple[Label, ...]:
    labels = tuple(labels) if labels else _default_labels(count)
    if len(labels) != count:
        raise MatrixShapeError(f"{len(labels)} {axis} labels for {count} {axis}s")
    if len(set(labels)) != len(labels):
        seen = set()
        dupes = [x for x in labels if x in seen or seen.add(x)]
        raise MatrixShapeError(f"duplicate {axis} labels: {dupes}")
    return labels


@dataclass(frozen=True, eq=False)
class AbundanceMatrix:
    """
    Non-negative integer unit x feature counts.

    Rows are the units to be ordered, columns the features they show. Labels
    default to 1-based integers so trees read like the case-study figures.
    """

    entries: np.ndarray
    row_labels: Tuple[Label, ...] = field(default=())
    col_labels: Tuple[Label, ...] = field(default=())

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.ndim != 2:
            raise MatrixShapeError(f"expected a 2-dimensional matrix, got {entries.ndim} dimension(s)")
        if entries.dtype.kind == "b":
            entries = entries.astype(np.int64)
        elif entries.dtype.kind == "f":
            if not np.all(np.isfinite(entries)) or not np.array_equal(entries, np.round(entries)):
                raise DomainError("abundance entries must be integers")
        elif entries.dtype.kind not in "iu":
            raise DomainError(f"abundance entries must be integers, got dtype {entries.dtype}")
        entries = np.array(entries, dtype=np.int64)
        if entries.size and entries.min() < 0:
            i, j = np.argwhere(entries < 0)[0]
            raise DomainError(f"negative entry {entries[i, j]} at row {i + 1}, column {j + 1}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "row_labels", _check_labels(self.row_labels, entries.shape[0], "row"))
        object.__setattr__(self, "col_labels", _check_labels(self.col_labels, entries.shape[1], "column"))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @property
    def is_binary(self) -> bool:
        return bool(np.all((self.entries == 0) | (self.entries == 1)))

    def has_default_labels(self) -> bool:
        return (self.row_labels == _default_labels(self.rows)
                and self.col_labels == _default_labels(self.cols))

    def to_lists(self) -> List[List[int]]:
        return self.entries.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbundanceMatrix):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.entries, other.entries)
                and self.row_labels == other.row_labels
                and self.col_labels == other.col_labels)

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.rows}x{self.cols}, rows={list(self.row_labels)})"


@dataclass(frozen=True, eq=False, repr=False)
class BinaryMatrix(AbundanceMatrix):
    """An AbundanceMatrix whose entries are restricted to {0, 1}."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_binary:
            raise DomainError("binary matrix entries must be 0 or 1")


def _split(line: str, delimiter: Optional[str]) -> List[str]:
    if delimiter is None:
        delimiter = "," if "," in line else None
    elif delimiter.isspace():
        delimiter = None
    if delimiter is None:
        return line.split()
    return [token.strip() for token in line.split(delimiter)]


def _parse_entry(token: str, row: int, col: int) -> int:
    if _INT_TOKEN.fullmatch(token):
        value = int(token)
        if value > _MAX_ENTRY:
            raise MatrixParseError(f"entry '{token}' exceeds the 64-bit count range", row=row, col=col)
        return value
    if not token:
        raise MatrixParseError("empty entry", row=row, col=col)
    if _NEGATIVE_TOKEN.fullmatch(token):
        raise MatrixParseError(f"negative entry '{token}'", row=row, col=col)
    if _REAL_TOKEN.fullmatch(token):
        raise MatrixParseError(f"real-valued entry '{token}' is not an integer count", row=row, col=col)
    raise MatrixParseError(f"non-numeric entry '{token}'", row=row, col=col)


def _parse_label(token: str) -> Label:
    return int(token) if _LABEL_INT.fullmatch(token) else token


def parse_matrix(text: str, delimiter: Optional[str] = None, header: bool = False,
                 index: bool = False) -> AbundanceMatrix:
    """
    Parse delimited text into an AbundanceMatrix.

    Args:
        text: Matrix text, one unit per line. Blank lines and lines starting
            with '#' are skipped.
        delimiter: Token separator. None picks ',' for lines containing a comma
            and whitespace otherwise.
        header: First data line holds the column labels.
        index: First token of every row is the row label (with header=True the
            header's first token is a placeholder and is ignored).

    Returns:
        AbundanceMatrix with 1-based default labels where none were given.

    Raises:
        MatrixShapeError: Ragged rows or label counts that do not fit.
        MatrixParseError: Empty input, or a token that is not a non-negative integer.
    """
    col_labels: Optional[List[Label]] = None
    row_labels: List[Label] = []
    rows: List[List[int]] = []
    width: Optional[int] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _split(line, delimiter)
        if header and col_labels is None:
            col_labels = [_parse_label(t) for t in (tokens[1:] if index else tokens)]
            header_line = lineno
            continue
        if index:
            row_labels.append(_parse_label(tokens[0]))
            tokens = tokens[1:]
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise MatrixShapeError(f"expected {width} entries, found {len(tokens)}", line=lineno)
        row = len(rows) + 1
        rows.append([_parse_entry(tok, row=row, col=j + 1) for j, tok in enumerate(tokens)])

    if not rows:
        raise MatrixParseError("no data rows in input")
    if col_labels is not None and len(col_labels) != width:
        raise MatrixShapeError(f"{len(col_labels)} column labels for {width} columns", line=header_line)

    matrix = AbundanceMatrix(np.array(rows, dtype=np.int64), tuple(row_labels), tuple(col_labels or ()))
    logger.debug("parsed %dx%d matrix", matrix.rows, matrix.cols)
    return matrix


def read_matrix(path: Union[str, Path], delimiter: Optional[str] = None, header: bool = False,
                index: bool = False) -> AbundanceMatrix:
    """Read a matrix file (see parse_matrix for the format)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise MatrixParseError(f"{path} is not UTF-8 text: {e.reason}") from e
    return parse_matrix(text, delimiter=delimiter, header=header, index=index)


def serialize_matrix(matrix: AbundanceMatrix, delimiter: str = ",", labels: Optional[bool] = None) -> str:
    """
    Write a matrix in the format read by parse_matrix.

    With labels=None a header row and index column are written only when the
    labels differ from the defaults; parse the result with header=True and
    index=True in that case.
    """
    if labels is None:
        labels = not matrix.has_default_labels()
    lines = []
    if labels:
        lines.append(delimiter.join(["unit"] + [str(c) for c in matrix.col_labels]))
    for label, row in zip(matrix.row_labels, matrix.entries.tolist()):
        tokens = [str(v) for v in row]
        lines.append(delimiter.join(([str(label)] if labels else []) + tokens))
    return "\n".join(lines) + "\n"


def binarize(matrix: AbundanceMatrix) -> BinaryMatrix:
    """Set every non-zero entry to 1; labels are preserved."""
    return BinaryMatrix((matrix.entries > 0).astype(np.int64), matrix.row_labels, matrix.col_labels)


def bipartite_block(matrix: AbundanceMatrix) -> np.ndarray:
    """
    Adjacency matrix of the bipartite unit/feature graph, [[0_n, B], [B^T, 0_m]].

    Abundance input is binarized first.
    """
    b = matrix.entries if matrix.is_binary else binarize(matrix).entries
    n, m = b.shape
    return np.block([
        [np.zeros((n, n), dtype=np.int64), b],
        [b.T, np.zeros((m, m), dtype=np.int64)],
    ])


def permute_matrix(matrix: AbundanceMatrix, order: Sequence[Label]) -> AbundanceMatrix:
    """Reorder the rows of a matrix by a sequence of row labels."""
    order = list(order)
    if len(order) != matrix.rows or set(order) != set(matrix.row_labels):
        raise DomainError(f"{order} is not a permutation of the row labels")
    position = {label: i for i, label in enumerate(matrix.row_labels)}
    rows = [position[label] for label in order]
    return type(matrix)(matrix.entries[rows, :], tuple(order), matrix.col_labels)


# Case-study matrices, printed verbatim. Row roles follow the chat coding:
# Pest, Blogger, Boss and Promoter for the four principal role columns.
FIXTURES: Dict[str, Tuple[str, str]] = {
    "actors27x31": ("actors27x31.csv", "actors episode: rows 1-4 actors (Pest, Blogger, Boss, Promoter), "
                                        "5-26 observers, 27 instructor"),
    "observers25x24": ("observers25x24.csv", "observer chats: 20 role columns and 4 interaction columns"),
    "b2": ("b2.csv", "observer group g2 (Pest, Blogger, Boss, Promoter)"),
    "b3": ("b3.csv", "observer group g3 (Pest, Blogger, Boss, Promoter)"),
    "b4": ("b4.csv", "observer group g4 (Pest, Blogger, Boss, Promoter)"),
    "b5": ("b5.csv", "observer group g5, last row all zero"),
    "b6": ("b6.csv", "observer group g6, two Pest rows"),
    "fig1_tree_units": ("fig1_tree_units.csv", "constructed units whose tree is P(P(1,2,3), Q(4,5,6))"),
}

PERMUTATION_TABLES: Dict[str, str] = {
    "fig1": "table_fig1.csv",
    "g5": "table_g5.csv",
    "g3": "table_g3.csv",
    "actors_block": "table_actors_block.csv",
}


def _fixture_text(filename: str) -> str:
    return resources.files("seriation").joinpath("fixtures").joinpath(filename).read_text()


def fixture_names() -> List[str]:
    return list(FIXTURES)


@lru_cache(maxsize=None)
def fixture(name: str) -> AbundanceMatrix:
    """
    Return one of the embedded case-study matrices.

    Raises:
        FixtureNotFoundError: Unknown name; the message lists the valid ones.
    """
    if name not in FIXTURES:
        raise FixtureNotFoundError(name, FIXTURES)
    return parse_matrix(_fixture_text(FIXTURES[name][0]))


def permutation_table(name: str) -> List[Tuple[int, ...]]:
    """Return a printed permutation table as a list of label tuples, in printed order."""
    if name not in PERMUTATION_TABLES:
        raise FixtureNotFoundError(name, PERMUTATION_TABLES)
    table = parse_matrix(_fixture_text(PERMUTATION_TABLES[name]))
    return [tuple(row) for row in table.to_lists()]
