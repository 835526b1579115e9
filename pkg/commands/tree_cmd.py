#!/usr/bin/env python3
"""
'seriate tree ...' command handlers: queries on a serialized PQ-tree.

A tree file holds either a bare node document or a 'seriate --format json'
report, whose 'tree' member is used.
"""

import json
import logging

import typer

from cli_context import ExitCode, OutputFormat, TreeQueryConfig
from commands.common import fail, handle_errors, parse_labels, read_source
from seriation.errors import TreeFormatError
from seriation.pqtree import (
    PQTree,
    canonicalize,
    contains,
    count_frontiers,
    enumerate_frontiers,
    equivalent,
    from_dict,
    to_text,
)

logger = logging.getLogger(__name__)


def load_tree(path: str) -> PQTree:
    """Read a tree file ('-' for standard input); exits 2 on malformed input."""
    text = read_source(path)
    with handle_errors():
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise TreeFormatError(f"invalid JSON: {e.msg} at line {e.lineno} column {e.colno}") from e
        if isinstance(document, dict) and "kind" not in document and "tree" in document:
            document = document["tree"]
        return from_dict(document)


def _answer(value: bool):
    typer.echo("true" if value else "false")
    if not value:
        raise typer.Exit(int(ExitCode.NEGATIVE))


def run_frontiers(path: str, config: TreeQueryConfig):
    """Print every admissible frontier, one per line; exits 5 beyond config.max_enumerate."""
    tree = load_tree(path)
    with handle_errors():
        frontiers = enumerate_frontiers(tree, cap=config.max_enumerate)
    if config.format is OutputFormat.JSON:
        typer.echo(json.dumps([list(p) for p in frontiers]))
        return
    for perm in frontiers:
        typer.echo(",".join(str(x) for x in perm))


def run_count(path: str):
    typer.echo(str(count_frontiers(load_tree(path))))


def run_contains(path: str, permutation: str):
    """Print true/false and exit 0/1."""
    tree = load_tree(path)
    with handle_errors():
        member = contains(tree, parse_labels(permutation))
    _answer(member)


def run_render(path: str, fmt: OutputFormat = OutputFormat.ASCII):
    if fmt not in (OutputFormat.JSON, OutputFormat.DOT, OutputFormat.ASCII):
        fail("render supports formats json, dot, ascii", ExitCode.INPUT_ERROR)
    tree = load_tree(path)
    typer.echo(to_text(tree, fmt.value), nl=fmt is not OutputFormat.DOT)


def run_canonical(path: str):
    typer.echo(to_text(canonicalize(load_tree(path)), "json"))


def run_equivalent(first: str, second: str):
    """Print true/false and exit 0/1."""
    _answer(equivalent(load_tree(first), load_tree(second)))
