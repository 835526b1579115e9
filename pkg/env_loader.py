#!/usr/bin/env python3
"""
Environment variable loader for the seriate CLI.
Loads environment variables from .env.local file using python-dotenv.
"""

import os
from dotenv import load_dotenv, find_dotenv

ENV_PREFIX = "SERIATE_"


def cli_init():
    """
    Initialize the CLI by loading environment variables.
    This should be called as the first step when the CLI starts.

    Loads variables from .env.local (or the file named by ENV); variables
    already set in the environment win.
    """
    _env_name = os.getenv(key="ENV", default=".env.local")
    _env_file = find_dotenv(_env_name)

    load_dotenv(dotenv_path=_env_file)


def env_overrides():
    """
    Config values given as SERIATE_<KEY> environment variables.

    Returns:
        dict mapping lowercase config key names to their string values, for
        every ConfigKey whose variable is set and non-empty.
    """
    from config_manager import ConfigKey

    overrides = {}
    for key in ConfigKey:
        value = os.environ.get(f"{ENV_PREFIX}{key.name}")
        if value:
            overrides[key.key] = value.strip()
    return overrides
