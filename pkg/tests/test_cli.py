#!/usr/bin/env python3
"""
End-to-end tests: run the seriate CLI in a subprocess and check output and exit codes.
"""

import json

import pytest

from _version import __version__
from seriation.pqtree import PQTree, p_node, q_node, to_text
from tests.utils import self_run_cli


def test_no_command_prints_version():
    result = self_run_cli("")
    assert result.returncode == 0
    assert result.stdout.strip() == f"seriate {__version__}"

    result = self_run_cli("--version")
    assert result.returncode == 0
    assert __version__ in result.stdout


def test_fixtures_listing():
    result = self_run_cli("fixtures")
    assert result.returncode == 0
    assert "actors27x31\t27x31" in result.stdout
    assert "b5\t5x8" in result.stdout
    print("✓ fixtures listed")


def test_similarity_fixture_b2():
    result = self_run_cli("similarity --fixture b2")
    assert result.returncode == 0, result.stderr
    assert result.stdout.splitlines() == ["3 1 1 2", "1 3 2 2", "1 2 4 3", "2 2 3 5"]
    assert "binarized" in result.stderr


def test_similarity_json_and_order():
    result = self_run_cli("similarity --fixture b2 --format json --order 2,3,4,1")
    assert result.returncode == 0, result.stderr
    document = json.loads(result.stdout)
    assert document["labels"] == [2, 3, 4, 1]
    assert document["matrix"][0] == [3, 2, 2, 1]


def test_similarity_identity_file(temp_workdir):
    path = temp_workdir / "eye.csv"
    path.write_text("1,0,0\n0,1,0\n0,0,1\n")
    result = self_run_cli(f"similarity --input {path}")
    assert result.returncode == 0
    assert result.stdout.splitlines() == ["1 0 0", "0 1 0", "0 0 1"]
    assert result.stderr == ""


def test_similarity_bipartite(temp_workdir):
    path = temp_workdir / "one.csv"
    path.write_text("1\n")
    result = self_run_cli(f"similarity --input {path} --bipartite --format csv")
    assert result.returncode == 0
    assert result.stdout.splitlines() == ["0,1", "1,0"]


def test_similarity_ragged_file(temp_workdir):
    path = temp_workdir / "ragged.csv"
    path.write_text("1,0,1\n1,0\n")
    result = self_run_cli(f"similarity --input {path}")
    assert result.returncode == 2
    assert "line 2" in result.stderr


@pytest.mark.parametrize("command", [
    "similarity",
    "similarity --fixture b2 --input x.csv",
    "seriate --fixture b2 --tie-tol 0",
    "seriate --fixture b2 --format csv",
    "similarity --fixture b2 --format dot",
    "seriate --input does-not-exist.csv",
])
def test_input_errors_exit_2(command):
    result = self_run_cli(command)
    assert result.returncode == 2, result.stdout


def test_unknown_fixture_lists_names():
    result = self_run_cli("seriate --fixture nope")
    assert result.returncode == 2
    assert "b2" in result.stderr and "actors27x31" in result.stderr


def test_seriate_b2_ascii():
    result = self_run_cli("seriate --fixture b2 --format ascii")
    assert result.returncode == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == "Q"
    assert "count: 2" in lines
    frontier = next(line for line in lines if line.startswith("frontier:"))
    assert frontier in ("frontier: 2 3 4 1", "frontier: 1 4 3 2")
    print("✓ b2 seriated to a Q root")


def test_seriate_b5_ill_posed():
    result = self_run_cli("seriate --fixture b5")
    assert result.returncode == 3
    report = json.loads(result.stdout)
    assert report["count"] == "24"
    assert any(w["kind"] == "ill-posed" and sorted(w["units"]) == [2, 3, 4] for w in report["warnings"])
    assert "warning: ill-posed" in result.stderr


def test_seriate_single_unit(temp_workdir):
    path = temp_workdir / "one.csv"
    path.write_text("4\n")
    result = self_run_cli(f"seriate --input {path} --format text")
    assert result.returncode == 0
    assert "count: 1" in result.stdout.splitlines()


def test_seriate_dot_and_report(temp_workdir):
    report_path = temp_workdir / "report.json"
    result = self_run_cli(f"seriate --fixture fig1_tree_units --format dot --report {report_path}")
    assert result.returncode == 3
    assert result.stdout.startswith("digraph")
    assert json.loads(report_path.read_text())["count"] == "24"


def test_seriate_numeric_failure():
    result = self_run_cli("seriate --fixture b2 --eig-tol 1e-30")
    assert result.returncode == 4
    assert "residual" in result.stderr


def test_seriate_actors_count():
    result = self_run_cli("seriate --fixture actors27x31 --workers 4")
    assert result.returncode == 0, result.stderr
    assert json.loads(result.stdout)["count"] == "8992005822220861440000"


def test_seriate_reads_stdin():
    result = self_run_cli("seriate --input - --format text", stdin="1 1 0\n0 1 1\n0 0 1\n")
    assert result.returncode == 0, result.stderr
    assert "count: 2" in result.stdout


def test_report_feeds_tree_commands(temp_workdir):
    report_path = temp_workdir / "g2.json"
    result = self_run_cli(f"seriate --fixture b2 --report {report_path}")
    assert result.returncode == 0

    yes = self_run_cli(f"tree contains {report_path} 2,3,4,1")
    assert yes.returncode == 0
    assert yes.stdout.strip() == "true"

    no = self_run_cli(f"tree contains {report_path} 2,4,3,1")
    assert no.returncode == 1
    assert no.stdout.strip() == "false"


def test_tree_count(write_tree, fig1_tree):
    result = self_run_cli(f"tree count {write_tree(fig1_tree)}")
    assert result.returncode == 0
    assert result.stdout.strip() == "24"


def test_tree_count_stdin(fig1_tree):
    result = self_run_cli("tree count -", stdin=to_text(fig1_tree, "json"))
    assert result.stdout.strip() == "24"


def test_tree_frontiers(write_tree, g2_tree):
    result = self_run_cli(f"tree frontiers {write_tree(g2_tree)}")
    assert result.returncode == 0
    assert result.stdout.splitlines() == ["1,4,3,2", "2,3,4,1"]


def test_tree_frontiers_capacity(write_tree, fig1_tree):
    result = self_run_cli(f"tree frontiers {write_tree(fig1_tree)} --max-enumerate 10")
    assert result.returncode == 5
    assert "24" in result.stderr


def test_tree_frontiers_capacity_from_config(write_tree, fig1_tree, monkeypatch):
    monkeypatch.setenv("SERIATE_MAX_ENUMERATE", "5")
    result = self_run_cli(f"tree frontiers {write_tree(fig1_tree)}")
    assert result.returncode == 5


def test_tree_contains_bad_permutation(write_tree, g2_tree):
    result = self_run_cli(f"tree contains {write_tree(g2_tree)} 1,2,3")
    assert result.returncode == 2


def test_tree_render(write_tree, fig1_tree):
    path = write_tree(fig1_tree)
    ascii_out = self_run_cli(f"tree render {path}")
    assert ascii_out.stdout.splitlines()[0] == "P"
    dot_out = self_run_cli(f"tree render {path} --format dot")
    assert "ordering=out" in dot_out.stdout


def test_tree_invalid_json(temp_workdir):
    path = temp_workdir / "bad.json"
    path.write_text('{"kind":"p","children":[{"kind":"leaf","label":1.5}]}')
    result = self_run_cli(f"tree count {path}")
    assert result.returncode == 2
    assert "$.children[0].label" in result.stderr


def test_tree_canonical_and_equivalent(write_tree):
    first = write_tree(PQTree(q_node(p_node(3, 1), q_node(2))), "a.json")
    second = write_tree(PQTree(p_node(2, p_node(1, 3))), "b.json")
    third = write_tree(PQTree(q_node(1, 2, 3)), "c.json")

    canonical = self_run_cli(f"tree canonical {first}")
    assert canonical.stdout.strip() == (
        '{"kind":"p","children":[{"kind":"p","children":[{"kind":"leaf","label":1},'
        '{"kind":"leaf","label":3}]},{"kind":"leaf","label":2}]}'
    )
    assert self_run_cli(f"tree equivalent {first} {second}").returncode == 0
    different = self_run_cli(f"tree equivalent {first} {third}")
    assert different.returncode == 1
    assert different.stdout.strip() == "false"


def test_config_commands(isolated_config):
    assert self_run_cli("config list").stdout.strip() == "No configuration values set."

    result = self_run_cli("config set tie_tol=1e-6")
    assert result.returncode == 0
    assert "tie_tol=1e-6" in self_run_cli("config list").stdout

    assert self_run_cli("config set bogus=1").returncode == 2
    assert self_run_cli("config set novalue").returncode == 2

    assert self_run_cli("config remove tie_tol").returncode == 0
    assert self_run_cli("config remove tie_tol").returncode == 1

    init = self_run_cli("config init")
    assert "policy" in init.stdout
    assert (isolated_config / "config.json").exists()


def test_policy_from_environment(monkeypatch):
    monkeypatch.setenv("SERIATE_POLICY", "first-vector")
    result = self_run_cli("seriate --fixture b6")
    assert result.returncode == 3
    assert json.loads(result.stdout)["policy"] == "first-vector"


def test_flag_beats_stored_config():
    self_run_cli("config set policy=first-vector")
    stored = json.loads(self_run_cli("seriate --fixture b5").stdout)
    assert stored["policy"] == "first-vector"
    flagged = json.loads(self_run_cli("seriate --fixture b5 --policy p-collapse").stdout)
    assert flagged["policy"] == "p-collapse"


def test_seriate_defaults_without_tolerance_flags():
    """Every tolerance falls back to its stored default."""
    result = self_run_cli("seriate --fixture b2 --format text")
    assert result.returncode == 0, result.stderr
    assert "count: 2" in result.stdout.splitlines()
    assert self_run_cli("similarity --fixture b2").returncode == 0


@pytest.mark.parametrize("key", ["eig_tol", "mult_tol", "tie_tol"])
def test_config_set_tolerance(key):
    result = self_run_cli(f"config set {key}=1e-7")
    assert result.returncode == 0, result.stderr
    assert f"{key}=1e-7" in self_run_cli("config list").stdout


def test_tie_tol_from_environment(monkeypatch):
    monkeypatch.setenv("SERIATE_TIE_TOL", "1e-6")
    result = self_run_cli("seriate --fixture b2")
    assert result.returncode == 0, result.stderr
    assert json.loads(result.stdout)["tolerances"]["tie_tol"] == 1e-6


def test_seriate_entry_too_large(temp_workdir):
    path = temp_workdir / "big.csv"
    path.write_text("1,0\n0,99999999999999999999\n")
    result = self_run_cli(f"seriate --input {path}")
    assert result.returncode == 2
    assert "row 2, column 2" in result.stderr


def test_seriate_input_not_utf8(temp_workdir):
    path = temp_workdir / "bin.csv"
    path.write_bytes(b"\xff\xfe1,0\n0,1\n")
    result = self_run_cli(f"seriate --input {path}")
    assert result.returncode == 2
    assert "UTF-8" in result.stderr


@pytest.mark.parametrize("cap", ["0", "many"])
def test_tree_frontiers_bad_cap_from_environment(write_tree, g2_tree, monkeypatch, cap):
    monkeypatch.setenv("SERIATE_MAX_ENUMERATE", cap)
    result = self_run_cli(f"tree frontiers {write_tree(g2_tree)}")
    assert result.returncode == 2
    assert "max_enumerate" in result.stderr
