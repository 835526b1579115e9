#!/usr/bin/env python3
"""
'seriate similarity' command handler: prints S = B B^T of the input matrix.
"""

import json
import logging
from typing import Optional, Sequence

import numpy as np
import typer

from cli_command import CLICommand
from cli_context import ExitCode, OutputFormat
from commands.common import fail, handle_errors, load_matrix, parse_labels
from seriation.matrixio import AbundanceMatrix, Label, binarize, bipartite_block, serialize_matrix
from seriation.spectral import permute_square, similarity

logger = logging.getLogger(__name__)

SIMILARITY_FORMATS = (OutputFormat.TEXT, OutputFormat.JSON, OutputFormat.CSV)


def format_square(entries: np.ndarray, labels: Sequence[Label], fmt: OutputFormat) -> str:
    """
    Render a square integer matrix.

    text is right-aligned columns, csv the parse_matrix format (labelled when
    the labels are not 1..n) and json an object with labels and rows.
    """
    if fmt is OutputFormat.JSON:
        return json.dumps({"labels": list(labels), "matrix": entries.tolist()})
    if fmt is OutputFormat.CSV:
        return serialize_matrix(AbundanceMatrix(entries, tuple(labels), tuple(labels))).rstrip("\n")
    width = max((len(str(v)) for v in entries.flat), default=1)
    return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in entries.tolist())


def run_similarity_command(cmd: CLICommand, order: Optional[str] = None, bipartite: bool = False):
    """
    Main entry point for 'seriate similarity'.

    Args:
        cmd: CLICommand carrying the resolved RunConfig
        order: Optional comma separated unit labels to reorder S by
        bipartite: Print the bipartite unit/feature adjacency instead of S
    """
    config = cmd.context
    if config.format not in SIMILARITY_FORMATS:
        fail(f"similarity supports formats {', '.join(f.value for f in SIMILARITY_FORMATS)}",
             ExitCode.INPUT_ERROR)

    matrix = load_matrix(config)
    if not matrix.is_binary:
        typer.echo("warning: binarized: abundance data binarized before computing similarity", err=True)
        matrix = binarize(matrix)

    with handle_errors():
        if bipartite:
            entries = bipartite_block(matrix)
            labels = list(range(1, entries.shape[0] + 1))
        else:
            result = similarity(matrix)
            if order:
                result = permute_square(result, parse_labels(order))
            entries, labels = result.entries, list(result.labels)

    logger.debug("similarity of order %d", entries.shape[0])
    typer.echo(format_square(entries, labels, config.format))
