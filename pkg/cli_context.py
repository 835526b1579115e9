#!/usr/bin/env python3
"""
Run configuration shared by the seriate CLI commands.

A RunConfig holds everything one invocation resolved from its flags, the
SERIATE_* environment and the stored config, validated in one place.
"""

from enum import Enum, IntEnum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, PositiveInt, model_validator

from seriation.spectral import IllPosedPolicy, Tolerances


class ExitCode(IntEnum):
    """Process exit codes; stable across releases."""
    OK = 0
    NEGATIVE = 1        # a yes/no query answered no
    INPUT_ERROR = 2
    ILL_POSED = 3       # result emitted, but some component was ill-posed
    NUMERIC = 4
    CAPACITY = 5


class OutputFormat(str, Enum):
    JSON = "json"
    DOT = "dot"
    ASCII = "ascii"
    TEXT = "text"
    CSV = "csv"


class TreeQueryConfig(BaseModel):
    """Resolved settings of a 'seriate tree' query."""

    model_config = ConfigDict(frozen=True)

    max_enumerate: PositiveInt = 10 ** 6
    format: OutputFormat = OutputFormat.TEXT


class RunConfig(BaseModel):
    """
    Resolved settings of one CLI run.

    Exactly one of input_path and fixture names the data source; input_path
    "-" reads standard input.
    """

    model_config = ConfigDict(frozen=True)

    input_path: Optional[Path] = None
    fixture: Optional[str] = None
    binarize: bool = False
    tolerances: Tolerances = Tolerances()
    policy: IllPosedPolicy = IllPosedPolicy.P_COLLAPSE
    format: OutputFormat = OutputFormat.JSON
    workers: PositiveInt = 1
    delimiter: Optional[str] = None
    header: bool = False
    index: bool = False

    @model_validator(mode="after")
    def _one_source(self):
        if (self.input_path is None) == (self.fixture is None):
            raise ValueError("give exactly one input source: --input PATH or --fixture NAME")
        return self

    @property
    def source_name(self) -> str:
        return f"fixture {self.fixture}" if self.fixture else str(self.input_path)


def resolve_run_config(**flags) -> RunConfig:
    """
    Build a RunConfig from CLI flags.

    Flags left as None fall back to the SERIATE_* environment, then the stored
    config, then the ConfigKey defaults.

    Raises:
        pydantic.ValidationError: The resolved values are invalid.
    """
    from config_manager import effective_config

    stored = effective_config()

    def pick(name: str):
        value = flags.pop(name, None)
        return stored[name] if value is None else value

    tolerances = Tolerances(
        eig_tol=pick("eig_tol"),
        mult_tol=pick("mult_tol"),
        tie_tol=pick("tie_tol"),
        n_eigs=pick("n_eigs"),
    )
    return RunConfig(
        tolerances=tolerances,
        policy=pick("policy"),
        **{k: v for k, v in flags.items() if v is not None},
    )


def resolve_tree_config(max_enumerate: Optional[int] = None,
                        format: OutputFormat = OutputFormat.TEXT) -> TreeQueryConfig:
    """
    Build a TreeQueryConfig; an unset cap falls back like resolve_run_config.

    Raises:
        pydantic.ValidationError: The resolved cap is not a positive integer.
    """
    from config_manager import effective_config

    if max_enumerate is None:
        max_enumerate = effective_config()["max_enumerate"]
    return TreeQueryConfig(max_enumerate=max_enumerate, format=format)
