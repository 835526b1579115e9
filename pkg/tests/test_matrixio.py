#!/usr/bin/env python3
"""
Tests for matrix parsing, binarization, bipartite embedding and fixtures.
"""

import numpy as np
import pytest

from seriation.errors import DomainError, FixtureNotFoundError, MatrixParseError, MatrixShapeError
from seriation.matrixio import (
    AbundanceMatrix,
    BinaryMatrix,
    binarize,
    bipartite_block,
    fixture,
    fixture_names,
    parse_matrix,
    permutation_table,
    permute_matrix,
    read_matrix,
    serialize_matrix,
)


def test_parse_comma_and_whitespace():
    """Delimiter is picked per line when none is given."""
    assert parse_matrix("1,0,2\n0,3,0\n").to_lists() == [[1, 0, 2], [0, 3, 0]]
    assert parse_matrix("1 0 2\n0   3 0\n").to_lists() == [[1, 0, 2], [0, 3, 0]]
    assert parse_matrix("1;0\n0;1", delimiter=";").to_lists() == [[1, 0], [0, 1]]


def test_parse_skips_comments_and_blank_lines():
    matrix = parse_matrix("# header comment\n\n1,1\n\n# middle\n0,1\n")
    assert matrix.shape == (2, 2)
    assert matrix.row_labels == (1, 2)
    assert matrix.col_labels == (1, 2)


def test_parse_header_and_index():
    text = "unit,a,b,c\nx,1,0,0\ny,0,2,1\n"
    matrix = parse_matrix(text, header=True, index=True)
    assert matrix.row_labels == ("x", "y")
    assert matrix.col_labels == ("a", "b", "c")
    assert matrix.to_lists() == [[1, 0, 0], [0, 2, 1]]


def test_parse_integer_labels_become_ints():
    matrix = parse_matrix("u,10,20\n7,1,0\n9,0,1\n", header=True, index=True)
    assert matrix.row_labels == (7, 9)
    assert matrix.col_labels == (10, 20)


def test_parse_ragged_row_reports_line():
    with pytest.raises(MatrixShapeError) as excinfo:
        parse_matrix("# c\n1,0,1\n1,0\n")
    assert excinfo.value.line == 3
    assert "line 3" in str(excinfo.value)


@pytest.mark.parametrize("text, row, col, fragment", [
    ("1,0\n0,-1\n", 2, 2, "negative"),
    ("1,0.5\n", 1, 2, "real-valued"),
    ("1,x\n", 1, 2, "non-numeric"),
    ("1,,0\n", 1, 2, "empty"),
])
def test_parse_bad_tokens(text, row, col, fragment):
    with pytest.raises(MatrixParseError) as excinfo:
        parse_matrix(text)
    assert excinfo.value.row == row
    assert excinfo.value.col == col
    assert fragment in str(excinfo.value)


def test_parse_empty_input():
    with pytest.raises(MatrixParseError):
        parse_matrix("# only a comment\n\n")


def test_header_width_mismatch():
    with pytest.raises(MatrixShapeError):
        parse_matrix("a,b\n1,0,1\n", header=True)


def test_serialize_round_trip_default_labels():
    matrix = fixture("b2")
    text = serialize_matrix(matrix)
    assert not text.startswith("unit")
    assert parse_matrix(text) == matrix


def test_serialize_round_trip_labelled():
    matrix = AbundanceMatrix(np.array([[1, 2], [0, 3]]), ("p", "q"), (5, 6))
    text = serialize_matrix(matrix)
    assert text.splitlines()[0] == "unit,5,6"
    assert parse_matrix(text, header=True, index=True) == matrix


def test_read_matrix(temp_workdir):
    path = temp_workdir / "m.csv"
    path.write_text("0 1\n1 1\n")
    assert read_matrix(path).to_lists() == [[0, 1], [1, 1]]


def test_parse_entry_beyond_int64():
    with pytest.raises(MatrixParseError) as excinfo:
        parse_matrix("1,0\n0,99999999999999999999\n")
    assert (excinfo.value.row, excinfo.value.col) == (2, 2)
    assert "64-bit" in str(excinfo.value)
    assert parse_matrix(f"{2 ** 63 - 1}\n").to_lists() == [[2 ** 63 - 1]]


def test_read_matrix_not_utf8(temp_workdir):
    path = temp_workdir / "bin.csv"
    path.write_bytes(b"\xff\xfe1,0\n")
    with pytest.raises(MatrixParseError) as excinfo:
        read_matrix(path)
    assert "UTF-8" in str(excinfo.value)


def test_abundance_matrix_validation():
    with pytest.raises(DomainError):
        AbundanceMatrix(np.array([[1, -2]]))
    with pytest.raises(DomainError):
        AbundanceMatrix(np.array([[0.5]]))
    with pytest.raises(MatrixShapeError):
        AbundanceMatrix(np.array([1, 2, 3]))
    with pytest.raises(MatrixShapeError):
        AbundanceMatrix(np.eye(2, dtype=int), row_labels=("a", "a"))
    assert AbundanceMatrix(np.array([[1.0, 2.0]])).to_lists() == [[1, 2]]


def test_entries_are_read_only():
    matrix = fixture("b3")
    with pytest.raises(ValueError):
        matrix.entries[0, 0] = 5


def test_binary_matrix_rejects_counts():
    with pytest.raises(DomainError):
        BinaryMatrix(np.array([[2, 0]]))


def test_binarize():
    matrix = parse_matrix("0,3,1\n5,0,0\n")
    binary = binarize(matrix)
    assert isinstance(binary, BinaryMatrix)
    assert binary.to_lists() == [[0, 1, 1], [1, 0, 0]]
    assert binarize(binary) == binary


def test_bipartite_block_single_edge():
    assert bipartite_block(BinaryMatrix(np.array([[1]]))).tolist() == [[0, 1], [1, 0]]


def test_bipartite_block_structure():
    b = fixture("b4")
    block = bipartite_block(b)
    n, m = b.shape
    assert block.shape == (n + m, n + m)
    assert np.array_equal(block, block.T)
    assert not block[:n, :n].any()
    assert not block[n:, n:].any()
    assert np.array_equal(block[:n, n:], binarize(b).entries)


def test_permute_matrix():
    matrix = fixture("b2")
    permuted = permute_matrix(matrix, [2, 3, 4, 1])
    assert permuted.row_labels == (2, 3, 4, 1)
    assert permuted.to_lists()[0] == matrix.to_lists()[1]
    with pytest.raises(DomainError):
        permute_matrix(matrix, [1, 2, 3])
    with pytest.raises(DomainError):
        permute_matrix(matrix, [1, 2, 3, 3])


@pytest.mark.parametrize("name, shape", [
    ("actors27x31", (27, 31)),
    ("observers25x24", (25, 24)),
    ("b2", (4, 8)),
    ("b3", (4, 8)),
    ("b4", (4, 8)),
    ("b5", (5, 8)),
    ("b6", (5, 8)),
    ("fig1_tree_units", (6, 3)),
])
def test_fixture_shapes(name, shape):
    assert fixture(name).shape == shape
    assert name in fixture_names()


def test_fixture_printed_entries():
    actors = fixture("actors27x31")
    assert actors.entries[0, 25] == 18
    assert actors.entries[0].tolist()[25:] == [18, 8, 7, 6, 5, 2]
    assert fixture("b6").entries[3, 6] == 15
    assert fixture("b2").to_lists()[0] == [1, 0, 0, 0, 16, 0, 2, 0]
    assert binarize(fixture("b2")).entries[0].sum() == 3
    assert binarize(fixture("b3")).to_lists()[0] == [1, 0, 0, 0, 1, 0, 0, 0]
    observers = fixture("observers25x24")
    assert observers.to_lists()[0][20:] == [16, 0, 2, 0]
    assert observers.to_lists()[1][20:] == [5, 1, 0, 0]


def test_fixture_zero_rows():
    actors = fixture("actors27x31")
    assert [i + 1 for i in np.flatnonzero(actors.entries.sum(axis=1) == 0)] == [6, 21]
    observers = fixture("observers25x24")
    assert [i + 1 for i in np.flatnonzero(observers.entries.sum(axis=1) == 0)] == [14, 17, 22, 25]
    assert not fixture("b5").entries[4].any()


def test_unknown_fixture_lists_valid_names():
    with pytest.raises(FixtureNotFoundError) as excinfo:
        fixture("b7")
    message = str(excinfo.value)
    assert "b7" in message
    for name in fixture_names():
        assert name in message


def test_permutation_tables():
    assert len(permutation_table("fig1")) == 24
    assert len(permutation_table("g5")) == 24
    assert len(permutation_table("g3")) == 12
    assert permutation_table("actors_block")[0] == (4, 3, 1, 2, 27)
    with pytest.raises(FixtureNotFoundError):
        permutation_table("g7")
