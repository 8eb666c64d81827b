"""CLI contract: output formats, exit codes, determinism."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from commprob.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_pr_family(capsys):
    code, out, err = run(capsys, "pr", "--family", "dihedral", "--params", "7")
    assert code == 0 and out == "5/14\n" and err == ""


def test_pr_perms(capsys):
    code, out, _ = run(
        capsys, "pr", "--perms", "(1 2 3 4)", "(1 3)", "--degree", "4"
    )
    assert code == 0 and out == "5/8\n"


def test_pr_cayley_file(capsys, tmp_path):
    path = tmp_path / "c3.json"
    path.write_text(json.dumps([[0, 1, 2], [1, 2, 0], [2, 0, 1]]))
    code, out, _ = run(capsys, "pr", "--cayley", str(path))
    assert code == 0 and out == "1\n"


def test_pr_catalog_entry(capsys):
    code, out, _ = run(
        capsys, "pr", "--catalog", str(DATA / "exponent7_catalog.jsonl"),
        "--name", "Heisenberg7",
    )
    assert code == 0 and out == "55/343\n"


def test_pr_json_schema(capsys):
    code, out, _ = run(
        capsys, "pr", "--family", "dihedral", "--params", "4", "--json", "--bounds"
    )
    assert code == 0
    data = json.loads(out)
    assert data["pr"] == "5/8" and data["order"] == 8 and data["k"] == 5
    assert any(b["bound"] == "gustafson" and b["holds"] for b in data["bounds"])


def test_egyptian_solve_lines(capsys):
    code, out, _ = run(capsys, "egyptian", "solve", "--terms", "3", "--target", "1")
    assert code == 0
    assert out == "3 3 3\n4 4 2\n6 3 2\n"


def test_egyptian_gap(capsys):
    code, out, _ = run(capsys, "egyptian", "gap", "--terms", "2", "--below", "1/2")
    assert code == 0 and out == "max_below = 10/21  epsilon = 1/42\n"


def test_egyptian_descend(capsys):
    code, out, _ = run(
        capsys, "egyptian", "descend", "--terms", "1", "--from", "1", "--count", "3"
    )
    assert out == "1/2\n1/3\n1/4\n"


def test_egyptian_limit_point(capsys):
    code, out, _ = run(
        capsys, "egyptian", "limit-point", "--terms", "3", "--value", "10/21"
    )
    assert code == 0 and out == "yes (m=2: 7 3)\n"
    code, out, _ = run(
        capsys, "egyptian", "limit-point", "--terms", "2", "--value", "5/6"
    )
    assert out == "no\n"


def test_spectrum_gap(capsys):
    code, out, _ = run(capsys, "spectrum", "gap", "--index", "2", "--at", "5/8")
    assert code == 0 and out == "max_below = 13/21  epsilon = 1/168\n"


def test_spectrum_gap_json_roundtrip(capsys):
    code, out, _ = run(
        capsys, "spectrum", "gap", "--index", "2", "--at", "1/2", "--json"
    )
    data = json.loads(out)
    assert data["max_below"] == "83/168" and data["epsilon"] == "1/168"
    assert data["index"] == 2 and isinstance(data["witness"], list)


def test_decompose_auto_subgroup(capsys):
    code, out, _ = run(capsys, "decompose", "--family", "symmetric", "--params", "3")
    assert code == 0
    assert "x-list: 1 3 3 3" in out and "pr = 1/2" in out


def test_decompose_explicit_generators(capsys):
    # element 2 generates the rotation subgroup of S3 under BFS numbering
    code, out, _ = run(
        capsys, "decompose", "--family", "symmetric", "--params", "3",
        "--subgroup", "2", "--json",
    )
    data = json.loads(out)
    assert data["x_list"] == [1, 3, 3, 3] and data["pr"] == "1/2"


def test_survey_scan_catalog(capsys):
    code, out, _ = run(
        capsys, "survey", "--catalog", str(DATA / "exponent7_catalog.jsonl"),
        "--scan", "5/2401..1/343", "--closed",
    )
    assert code == 0 and out == "EMPTY (universe: 4 groups)\n"


def test_survey_csv(capsys):
    code, out, _ = run(capsys, "survey", "--corpus", "8", "--csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "name,order,k,pr"
    assert any(line.startswith("D4,8,5,5/8") for line in lines)


def test_scan_subcommand(capsys):
    code, out, _ = run(
        capsys, "scan", "--corpus", "24", "--interval", "7/16..1/2", "--open"
    )
    assert code == 0 and out.startswith("EMPTY (universe:")


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["pr"])  # no source
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["pr", "--family", "dihedral", "--params", "4",
              "--perms", "(1 2)", "--degree", "2"])  # two sources
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["nosuchcommand"])
    assert e.value.code == 2


def test_domain_errors_exit_1(capsys):
    code, out, err = run(capsys, "pr", "--family", "nosuch", "--params", "3")
    assert code == 1 and out == "" and "error:" in err
    code, _, err = run(
        capsys, "pr", "--catalog", str(DATA / "exponent7_catalog.jsonl"),
        "--name", "missing",
    )
    assert code == 1 and "no entry named" in err
    code, _, err = run(capsys, "spectrum", "gap", "--index", "1", "--at", "1")
    assert code == 1 and "no candidate value" in err


def test_decompose_bad_subgroup_is_domain_error(capsys):
    # a non-normal order-2 subgroup of S3 cannot anchor a decomposition
    code, _, err = run(
        capsys, "decompose", "--family", "symmetric", "--params", "3",
        "--subgroup", "1",
    )
    assert code == 1 and "error:" in err


def test_stdout_determinism(capsys):
    argv = ["survey", "--corpus", "16", "--json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
