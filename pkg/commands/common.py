#!/usr/bin/env python3
"""
Helpers shared by the command handlers: input loading and error reporting.
"""

import logging
import re
import sys
from contextlib import contextmanager
from typing import List, NoReturn

import typer

from cli_context import ExitCode, RunConfig
from seriation.errors import CapacityError, NumericError, SeriationError
from seriation.matrixio import AbundanceMatrix, Label, binarize, fixture, parse_matrix

logger = logging.getLogger(__name__)

_INT_LABEL = re.compile(r"[+-]?\d+")


def fail(message: str, code: ExitCode) -> NoReturn:
    """Print an error to stderr and exit with the given code."""
    typer.echo(f"Error: {message}", err=True)
    raise typer.Exit(int(code))


def exit_code_for(error: SeriationError) -> ExitCode:
    if isinstance(error, CapacityError):
        return ExitCode.CAPACITY
    if isinstance(error, NumericError):
        return ExitCode.NUMERIC
    return ExitCode.INPUT_ERROR


@contextmanager
def handle_errors():
    """Turn library errors into an error message and the matching exit code."""
    try:
        yield
    except SeriationError as e:
        logger.debug("command failed", exc_info=True)
        fail(str(e), exit_code_for(e))


def read_source(path) -> str:
    """Read a file, or standard input for '-'."""
    try:
        if str(path) == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as e:
        fail(f"cannot read {path}: not UTF-8 text ({e.reason})", ExitCode.INPUT_ERROR)
    except OSError as e:
        fail(f"cannot read {path}: {e.strerror}", ExitCode.INPUT_ERROR)


def load_matrix(config: RunConfig) -> AbundanceMatrix:
    """The input matrix of a run, binarized when the run asks for it."""
    with handle_errors():
        if config.fixture is not None:
            matrix = fixture(config.fixture)
        else:
            matrix = parse_matrix(read_source(config.input_path), delimiter=config.delimiter,
                                  header=config.header, index=config.index)
        logger.info("loaded %dx%d matrix from %s", matrix.rows, matrix.cols, config.source_name)
        return binarize(matrix) if config.binarize else matrix


def parse_labels(text: str) -> List[Label]:
    """Split '2,3,4,1' (or space separated) into labels; integer tokens become ints."""
    tokens = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    return [int(t) if _INT_LABEL.fullmatch(t) else t for t in tokens]
