#!/usr/bin/env python3

import logging
import sys
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from typing_extensions import Annotated

from _version import __version__
from cli_command import CLICommand
from cli_context import ExitCode, OutputFormat, resolve_run_config, resolve_tree_config
from commands import tree_cmd
from commands.common import fail
from commands.seriate_cmd import run_seriate_command
from commands.similarity_cmd import run_similarity_command
from config_manager import (
    effective_config,
    list_config,
    remove_config_value,
    set_config_value,
    setup_defaults,
)
from env_loader import cli_init
from seriation.matrixio import FIXTURES, fixture, fixture_names
from seriation.spectral import IllPosedPolicy

# Initialize CLI - load environment variables as first step
cli_init()

app = typer.Typer(
    name="seriate",
    help="Spectral seriation of unit x feature data, with PQ-trees of the admissible orderings",
    add_completion=False
)

InputOpt = Annotated[Optional[Path], typer.Option("--input", "-i", help="Matrix file ('-' for stdin)")]
FixtureOpt = Annotated[Optional[str], typer.Option("--fixture", "-f", help="Embedded fixture name (see 'seriate fixtures')")]
BinarizeOpt = Annotated[bool, typer.Option("--binarize", help="Binarize abundance data without a warning")]
DelimiterOpt = Annotated[Optional[str], typer.Option("--delimiter", help="Token separator (default: comma or whitespace)")]
HeaderOpt = Annotated[bool, typer.Option("--header", help="First data line holds column labels")]
IndexOpt = Annotated[bool, typer.Option("--index", help="First token of each row is its label")]


def _invalid(e: ValidationError):
    problems = "; ".join(f"{'.'.join(str(p) for p in err['loc']) or 'input'}: {err['msg']}" for err in e.errors())
    fail(problems, ExitCode.INPUT_ERROR)


def _run_config(command: str, **flags) -> CLICommand:
    """Resolve flags against env and config into a CLICommand with its RunConfig."""
    try:
        config = resolve_run_config(**flags)
    except ValidationError as e:
        _invalid(e)
    return CLICommand(command, context=config)


def _version_callback(value: bool):
    if value:
        typer.echo(f"seriate {__version__}")
        raise typer.Exit()


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging on stderr")] = False,
    version: Annotated[Optional[bool], typer.Option("--version", callback=_version_callback, is_eager=True,
                                                    help="Print the version and exit")] = None,
):
    """
    Seriate CLI - Main entry point.

    If no command is provided, prints version.
    """
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if ctx.invoked_subcommand is None:
        typer.echo(f"seriate {__version__}")


@app.command()
def similarity(
    input_path: InputOpt = None,
    fixture_name: FixtureOpt = None,
    binarize: BinarizeOpt = False,
    fmt: Annotated[OutputFormat, typer.Option("--format", help="text, json or csv")] = OutputFormat.TEXT,
    order: Annotated[Optional[str], typer.Option("--order", help="Reorder S by these labels, e.g. 2,3,4,1")] = None,
    bipartite: Annotated[bool, typer.Option("--bipartite", help="Print the bipartite unit/feature adjacency")] = False,
    delimiter: DelimiterOpt = None,
    header: HeaderOpt = False,
    index: IndexOpt = False,
):
    """
    Print the similarity matrix S = B B^T.

    Example: seriate similarity --fixture b2
    """
    cmd = _run_config(
        "similarity", input_path=input_path, fixture=fixture_name, binarize=binarize, format=fmt,
        delimiter=delimiter, header=header, index=index,
    )
    run_similarity_command(cmd, order=order, bipartite=bipartite)


@app.command()
def seriate(
    input_path: InputOpt = None,
    fixture_name: FixtureOpt = None,
    binarize: BinarizeOpt = False,
    eig_tol: Annotated[Optional[float], typer.Option("--eig-tol", help="Eigenpair residual tolerance [default: 1e-08]")] = None,
    mult_tol: Annotated[Optional[float], typer.Option("--mult-tol", help="Fiedler multiplicity tolerance [default: 1e-08]")] = None,
    tie_tol: Annotated[Optional[float], typer.Option("--tie-tol", help="Fiedler entry tie tolerance [default: 1e-08]")] = None,
    eigs: Annotated[Optional[int], typer.Option("--eigs", help="Smallest eigenvalues reported per component [default: 3]")] = None,
    policy: Annotated[Optional[IllPosedPolicy], typer.Option("--policy", help="Ill-posed components [default: p-collapse]")] = None,
    fmt: Annotated[OutputFormat, typer.Option("--format", help="json, dot, ascii or text")] = OutputFormat.JSON,
    workers: Annotated[Optional[int], typer.Option("--workers", help="Threads for independent components")] = None,
    report: Annotated[Optional[Path], typer.Option("--report", help="Also write the JSON report here")] = None,
    delimiter: DelimiterOpt = None,
    header: HeaderOpt = False,
    index: IndexOpt = False,
):
    """
    Seriate the rows of a matrix and print the PQ-tree of admissible orderings.

    Exit code 3 means some component was ill-posed; the result is still printed.

    Example: seriate seriate --fixture b2 --format ascii
    """
    cmd = _run_config(
        "seriate", input_path=input_path, fixture=fixture_name, binarize=binarize,
        eig_tol=eig_tol, mult_tol=mult_tol, tie_tol=tie_tol, n_eigs=eigs, policy=policy,
        format=fmt, workers=workers, delimiter=delimiter, header=header, index=index,
    )
    run_seriate_command(cmd, report_path=report)


@app.command()
def fixtures():
    """List the embedded fixture matrices."""
    for name in fixture_names():
        matrix = fixture(name)
        typer.echo(f"{name}\t{matrix.rows}x{matrix.cols}\t{FIXTURES[name][1]}")


# Tree command group
tree_app = typer.Typer(help="Query and render serialized PQ-trees")
app.add_typer(tree_app, name="tree")

TreeFile = Annotated[str, typer.Argument(help="Tree JSON file or seriate report ('-' for stdin)")]


@tree_app.command("frontiers")
def tree_frontiers(
    tree_file: TreeFile,
    max_enumerate: Annotated[Optional[int], typer.Option("--max-enumerate", help="Refuse to list more frontiers [default: 1000000]")] = None,
    fmt: Annotated[OutputFormat, typer.Option("--format", help="text or json")] = OutputFormat.TEXT,
):
    """
    List every admissible frontier.

    Example: seriate tree frontiers g2.json
    """
    try:
        config = resolve_tree_config(max_enumerate=max_enumerate, format=fmt)
    except ValidationError as e:
        _invalid(e)
    tree_cmd.run_frontiers(tree_file, config)


@tree_app.command("count")
def tree_count(tree_file: TreeFile):
    """Print the exact number of admissible frontiers."""
    tree_cmd.run_count(tree_file)


@tree_app.command("contains")
def tree_contains(
    tree_file: TreeFile,
    permutation: Annotated[str, typer.Argument(help="Comma separated labels, e.g. 2,3,4,1")],
):
    """
    Print true (exit 0) or false (exit 1) for membership of a permutation.

    Example: seriate tree contains g2.json 2,3,4,1
    """
    tree_cmd.run_contains(tree_file, permutation)


@tree_app.command("render")
def tree_render(
    tree_file: TreeFile,
    fmt: Annotated[OutputFormat, typer.Option("--format", help="ascii, dot or json")] = OutputFormat.ASCII,
):
    """Render a tree as an ascii outline, DOT source or compact JSON."""
    tree_cmd.run_render(tree_file, fmt)


@tree_app.command("canonical")
def tree_canonical(tree_file: TreeFile):
    """Print the canonical form of a tree as JSON."""
    tree_cmd.run_canonical(tree_file)


@tree_app.command("equivalent")
def tree_equivalent(first: TreeFile, second: TreeFile):
    """Print true (exit 0) if both trees have the same frontier set, else false (exit 1)."""
    tree_cmd.run_equivalent(first, second)


# Config command group
config_app = typer.Typer(help="Manage configuration")
app.add_typer(config_app, name="config")


@config_app.command("list")
def config_list(
    effective: Annotated[bool, typer.Option("--effective", help="Include defaults and SERIATE_* overrides")] = False,
):
    """List configuration values."""
    config = effective_config() if effective else list_config()
    if not config:
        typer.echo("No configuration values set.")
    else:
        for key, value in config.items():
            typer.echo(f"{key}={value}")


@config_app.command("set")
def config_set(
    key_value: Annotated[str, typer.Argument(help="Configuration in format key=value")]
):
    """
    Set a configuration value.

    Example: seriate config set tie_tol=1e-6
    """
    if "=" not in key_value:
        fail("Expected format key=value", ExitCode.INPUT_ERROR)

    key, value = key_value.split("=", 1)
    key = key.strip().lower()
    value = value.strip()

    if not key:
        fail("Key cannot be empty", ExitCode.INPUT_ERROR)

    try:
        set_config_value(key, value)
    except KeyError as e:
        fail(e.args[0], ExitCode.INPUT_ERROR)
    typer.echo(f"Set {key}={value}")


@config_app.command("remove")
def config_remove(
    key: Annotated[str, typer.Argument(help="Configuration key to remove")]
):
    """
    Remove a configuration value.

    Example: seriate config remove tie_tol
    """
    if remove_config_value(key):
        typer.echo(f"Removed {key}")
    else:
        fail(f"Key '{key}' not found", ExitCode.NEGATIVE)


@config_app.command("init")
def config_init():
    """Write the default value of every key not yet stored."""
    written = setup_defaults()
    if written:
        for key in written:
            typer.echo(f"Set {key} (default)")
    else:
        typer.echo("All defaults already set.")


def cli_main():
    """Entry point that can be used with CLICommand."""
    app()


if __name__ == "__main__":
    app()
