#!/usr/bin/env python3
"""
CLI Command class for parsing and executing seriate commands.
"""

import shlex
import sys
from pathlib import Path
from typing import List, Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from cli_context import RunConfig


class CLICommand:
    """
    A seriate command line, optionally carrying the RunConfig it resolved to.

    The command can be executed either as an installed command (e.g. 'seriate count t.json')
    or using Python directly (e.g. 'python3 seriate_cli.py tree count t.json').
    """

    def __init__(self, command: str, use_python: bool = False, context: Optional["RunConfig"] = None):
        """
        Initialize a CLI command.

        Args:
            command: The command string (e.g. "seriate --fixture b2" or "tree count g2.json")
            use_python: If True, run seriate_cli.py with the current interpreter
            context: Optional RunConfig for the command handlers
        """
        self.command = command.strip()
        self.use_python = use_python
        self.context = context
        self._parse_command()

    def _parse_command(self):
        """Split the command with shell quoting rules."""
        parts = shlex.split(self.command)
        if not parts:
            self.subcommand = None
            self.args = []
        else:
            self.subcommand = parts[0]
            self.args = parts[1:]

    @property
    def executable_args(self) -> List[str]:
        """
        Get the executable arguments for subprocess.

        Returns:
            List of arguments suitable for subprocess.run()
        """
        tail = ([self.subcommand] if self.subcommand else []) + self.args
        if self.use_python:
            cli_path = Path(__file__).parent / "seriate_cli.py"
            return [sys.executable, str(cli_path)] + tail
        return ["seriate"] + tail

    @property
    def command_str(self) -> str:
        if self.use_python:
            return f"python3 seriate_cli.py {self.command}"
        return f"seriate {self.command}"

    def __repr__(self) -> str:
        context_info = f", context={self.context.source_name}" if self.context else ""
        return f"CLICommand(command='{self.command}', use_python={self.use_python}{context_info})"

    def __str__(self) -> str:
        return self.command_str
