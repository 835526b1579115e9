#!/usr/bin/env python3
"""
'seriate seriate' command handler: runs the full pipeline and emits the tree
and its diagnostics.
"""

import json
import logging
from pathlib import Path
from typing import List, Optional

import typer

from cli_command import CLICommand
from cli_context import ExitCode, OutputFormat
from commands.common import fail, handle_errors, load_matrix
from seriation.pqtree import frontier, to_text
from seriation.spectral import ComponentReport, SeriationResult, spectral_seriation

logger = logging.getLogger(__name__)

SERIATE_FORMATS = (OutputFormat.JSON, OutputFormat.DOT, OutputFormat.ASCII, OutputFormat.TEXT)


def _component_lines(report: ComponentReport, depth: int, n_eigs: int) -> List[str]:
    indent = "  " * depth
    units = " ".join(str(u) for u in report.units)
    if report.fiedler is None:
        line = f"{indent}[{units}] trivial"
    else:
        info = report.fiedler
        eigenvalues = " ".join(f"{x:.6g}" for x in info.eigenvalues[:n_eigs])
        line = (f"{indent}[{units}] fiedler {info.value:.6g} multiplicity {info.multiplicity}"
                f" eigenvalues {eigenvalues}")
        if report.ill_posed:
            line += " ILL-POSED"
    lines = [line]
    for child in report.children:
        lines.extend(_component_lines(child, depth + 1, n_eigs))
    return lines


def format_report(result: SeriationResult) -> str:
    """Human-readable diagnostics of a seriation run."""
    lines = [
        f"units: {len(result.tree)}",
        f"components: {len(result.components)}",
        f"frontier: {' '.join(str(x) for x in frontier(result.tree))}",
        f"count: {result.count}",
    ]
    nontrivial = [c for c in result.components if not c.trivial]
    if nontrivial:
        lines.append("spectra:")
        for component in nontrivial:
            lines.extend(_component_lines(component, 1, result.tolerances.n_eigs))
    if result.warnings:
        lines.append("warnings:")
        lines.extend(f"  {w}" for w in result.warnings)
    else:
        lines.append("warnings: none")
    return "\n".join(lines)


def run_seriate_command(cmd: CLICommand, report_path: Optional[Path] = None):
    """
    Main entry point for 'seriate seriate'.

    Exits 3 when some component was ill-posed; the tree is still printed.

    Args:
        cmd: CLICommand carrying the resolved RunConfig
        report_path: Also write the JSON report to this file
    """
    config = cmd.context
    if config.format not in SERIATE_FORMATS:
        fail(f"seriate supports formats {', '.join(f.value for f in SERIATE_FORMATS)}", ExitCode.INPUT_ERROR)

    matrix = load_matrix(config)
    with handle_errors():
        result = spectral_seriation(matrix, config.tolerances, config.policy, config.workers)

    for notice in result.warnings:
        typer.echo(f"warning: {notice}", err=True)

    report = result.report()
    if config.format is OutputFormat.JSON:
        typer.echo(json.dumps(report, indent=2))
    elif config.format is OutputFormat.DOT:
        typer.echo(to_text(result.tree, "dot"), nl=False)
    elif config.format is OutputFormat.ASCII:
        typer.echo(to_text(result.tree, "ascii"))
        typer.echo(format_report(result))
    else:
        typer.echo(format_report(result))

    if report_path is not None:
        try:
            report_path.write_text(json.dumps(report, indent=2) + "\n")
        except OSError as e:
            fail(f"cannot write report {report_path}: {e.strerror}", ExitCode.INPUT_ERROR)
        logger.info("report written to %s", report_path)

    if result.ill_posed:
        raise typer.Exit(int(ExitCode.ILL_POSED))
