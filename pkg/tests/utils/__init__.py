"""Test utilities for seriate tests."""

from .cli_runner import self_run_cli

__all__ = ["self_run_cli"]
