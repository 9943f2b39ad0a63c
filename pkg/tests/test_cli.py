import io
import json
import subprocess
import sys

import pytest

from conftest import DATA, corpus
from treeflow.cli import cli_main, parse_config


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_main(list(map(str, argv)), out, err)
    return code, out.getvalue(), err.getvalue()


def test_solve_star_with_certificate():
    code, out, _ = run("solve", DATA / "star.tree", "--certificate")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "value 2"
    assert "kappa 1" in lines and "W 1" in lines


def test_solve_json():
    code, out, _ = run("solve", "--format", "json", "--certificate", "--decompose", DATA / "dominating.tree")
    doc = json.loads(out)
    assert code == 0 and doc["alpha"] == 3 and doc["pairs"] == [[1, 3, 2], [3, 4, 1]]


@pytest.mark.parametrize("path", corpus(), ids=lambda p: p.name)
def test_round_trip_over_corpus(tmp_path, path):
    code, out, _ = run("solve", path, "--certificate", "--decompose")
    assert code == 0
    sol = tmp_path / "out.sol"
    sol.write_text(out)
    code, report, _ = run("verify", path, sol)
    assert code == 0 and report.splitlines()[-1] == "PASS (6/6 checks)"


def test_verify_failure_exit_code(tmp_path):
    sol = tmp_path / "star.sol"
    sol.write_text("value 2\nf 1 2 1\nf 1 3 1\nf 1 4 1\nX 2\nX 3\nX 4\nW 1\n")
    code, report, _ = run("verify", DATA / "star.tree", sol)
    assert code == 3 and "FAIL" in report


def test_parse_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.tree"
    bad.write_text("p tree 3 2\ne 1 2 5\n")
    code, _, err = run("solve", bad)
    assert code == 2 and "edge count mismatch" in err
    sol = tmp_path / "bad.sol"
    sol.write_text("value two\n")
    assert run("verify", DATA / "star.tree", sol)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["solve"],
        ["solve", "--format", "xml", "x.tree"],
        ["gen", "--n", "5"],
        ["gen", "--n", "5", "--terminals", "9", "--max-cap", "3", "--seed", "1"],
        ["bench", "--sizes", "a,b", "--seed", "1"],
        ["bench", "--sizes", "100", "--seed", "1", "--threads", "0"],
        ["solve", "/nonexistent/file.tree"],
    ],
)
def test_usage_errors_exit_1(argv):
    assert run(*argv)[0] == 1


def test_gen_is_deterministic(tmp_path):
    target = tmp_path / "g.tree"
    code, _, _ = run("gen", "--n", "30", "--terminals", "8", "--max-cap", "5", "--seed", "9", "-o", target)
    assert code == 0
    code, out, _ = run("gen", "--n", "30", "--terminals", "8", "--max-cap", "5", "--seed", "9")
    assert out == target.read_text()
    assert out.splitlines()[0] == "p tree 30 8"


def test_bench_rows_and_oracle_check():
    code, out, _ = run("bench", "--sizes", "200,400", "--seed", "7", "--oracle-check", "20", "--threads", "2")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split() == ["n", "seconds", "ns/edge"]
    assert [line.split()[0] for line in lines[1:3]] == ["200", "400"]
    assert lines[-1].startswith("oracle check: ") and "mismatch" not in out


def test_config_dataclass():
    cfg = parse_config(["bench", "--sizes", "65536,2097152", "--seed", "7"])
    assert cfg.subcommand == "bench" and cfg.sizes == [65536, 2097152] and cfg.threads == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "treeflow", "solve", str(DATA / "star.tree")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("value 2\n")
