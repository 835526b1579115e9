#!/usr/bin/env python3
"""
Pytest configuration and fixtures for the seriate tests.
"""

import pytest

from config_manager import ConfigKey
from seriation.pqtree import PQTree, p_node, q_node, to_text


@pytest.fixture(scope="session", autouse=True)
def load_env():
    """
    Session-scoped fixture to load environment variables before any tests run.

    This fixture calls the cli_init function from env_loader to load
    environment variables from the .env.local file.
    """
    from env_loader import cli_init

    cli_init()


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """
    Point the config dir at a temp directory and clear SERIATE_* overrides.

    Subprocess runs inherit the environment, so CLI tests are isolated too.

    Yields:
        Path: The temporary config directory
    """
    config_dir = tmp_path / "config"
    monkeypatch.setenv("SERIATE_CONFIG_DIR", str(config_dir))
    for key in ConfigKey:
        monkeypatch.delenv(f"SERIATE_{key.name}", raising=False)
    yield config_dir


@pytest.fixture
def temp_workdir(tmp_path):
    """
    Function-scoped fixture that provides a temporary working directory.

    Yields:
        Path: Temporary directory path
    """
    yield tmp_path


@pytest.fixture
def fig1_tree():
    """The example tree P(P(1,2,3), Q(4,5,6)) with 24 frontiers."""
    return PQTree(p_node(p_node(1, 2, 3), q_node(4, 5, 6)))


@pytest.fixture
def g2_tree():
    return PQTree(q_node(2, 3, 4, 1))


@pytest.fixture
def write_tree(temp_workdir):
    """Write a tree as JSON into the temp dir and return the file path as str."""
    def _write(tree: PQTree, name: str = "tree.json") -> str:
        path = temp_workdir / name
        path.write_text(to_text(tree, "json"))
        return str(path)
    return _write
