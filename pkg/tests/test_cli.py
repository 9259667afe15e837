"""Command-line interface: exit codes, output schemas, determinism."""

from __future__ import annotations

import csv
import io
import json

import pytest

from polycm.cli import main

CLASSIFY_SMALL = [
    "classify", "--m-max", "2", "--n-max", "2",
    "--grid-count", "12", "--orders", "3",
]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_json_schema(capsys):
    code, out, _ = run(capsys, CLASSIFY_SMALL)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"config", "entries", "findings", "summary"}
    assert len(doc["entries"]) == 4
    by_key = {(e["m"], e["n"]): e for e in doc["entries"]}
    assert by_key[(1, 2)]["verdict"] == "CM_nontrivial"
    assert by_key[(2, 2)]["verdict"] == "sign_changing_nonmonotonic"
    assert by_key[(2, 2)]["sign_x_negative"] is not None
    assert by_key[(1, 1)]["verdict"] == "CM_trivial"
    assert doc["summary"]["CM_trivial"] == 2
    assert doc["summary"]["CM_nontrivial"] == 1


def test_classify_deterministic(capsys):
    _, first, _ = run(capsys, CLASSIFY_SMALL)
    _, second, _ = run(capsys, CLASSIFY_SMALL)
    assert first == second


def test_check_cm_pass_and_fail(capsys):
    code, out, _ = run(
        capsys,
        ["check-cm", "--m", "1", "--n", "2", "--orders", "4", "--grid-count", "20"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["verdict"] == "consistent_with_CM"
    assert doc["findings"] == []

    code, out, _ = run(
        capsys,
        ["check-cm", "--m", "2", "--n", "2", "--orders", "0",
         "--grid-min", "1", "--grid-max", "10", "--grid-count", "5"],
    )
    assert code == 1
    doc = json.loads(out)
    assert doc["summary"]["verdict"] == "violation"
    assert doc["findings"]


def test_check_cm_entry_rows_pair_value_with_error(capsys):
    _, out, _ = run(
        capsys,
        ["check-cm", "--m", "1", "--n", "3", "--orders", "1",
         "--grid-count", "4", "--grid-min", "0.5", "--grid-max", "5"],
    )
    doc = json.loads(out)
    for row in doc["entries"]:
        assert set(row) >= {"order", "x", "signed_value", "abs_error", "status"}
        assert row["abs_error"] >= 0.0
        assert row["status"] in ("positive", "inconclusive", "violation")


def test_kernels_commands(capsys):
    code, out, _ = run(capsys, ["kernels", "--kernel", "omega"])
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["monotonicity"] == "increasing"
    assert all(row["passed"] for row in doc["summary"]["limit_checks"])

    code, out, _ = run(capsys, ["kernels", "--kernel", "h", "--k", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["monotonicity"] == "decreasing"
    inf_rows = [r for r in doc["summary"]["limit_checks"] if r["end"] == "infinity"]
    assert inf_rows[0]["approach_certified"] is True


def test_inequalities_command(capsys):
    code, out, _ = run(
        capsys, ["inequalities", "--k-max", "2", "--grid-count", "10"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["failures"] == 0
    assert doc["summary"]["checks"] == 3 * 10
    assert len(doc["entries"]) == 3 * 10


def test_bounds_command_reports_findings_without_failing(capsys):
    code, out, _ = run(
        capsys,
        ["bounds", "--m", "1", "--n", "1", "--grid-min", "0.5",
         "--grid-max", "5", "--grid-count", "9"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["derived_ok"] is True
    assert doc["findings"]


def test_usage_errors(capsys):
    code, _, err = run(capsys, ["classify", "--grid-min", "-1"])
    assert code == 2
    assert "usage error" in err
    code, _, err = run(capsys, ["kernels", "--kernel", "omega", "--grid-count", "1"])
    assert code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_capability_exit_code(capsys):
    code, _, err = run(
        capsys,
        ["check-cm", "--m", "1", "--n", "2", "--orders", "70", "--grid-count", "4"],
    )
    assert code == 3
    assert "capability" in err


def test_csv_format(capsys):
    code, out, _ = run(
        capsys,
        ["inequalities", "--k-max", "1", "--grid-count", "5", "--format", "csv"],
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    header, body = rows[0], rows[1:]
    assert "x" in header and "k" in header
    assert len(body) == 10
    assert all(len(r) == len(header) for r in body)


def test_text_format(capsys):
    code, out, _ = run(
        capsys, ["kernels", "--kernel", "tanh", "--format", "text"]
    )
    assert code == 0
    assert "tanh" in out


def test_out_file_matches_stdout(tmp_path, capsys):
    argv = ["inequalities", "--k-max", "1", "--grid-count", "4"]
    _, streamed, _ = run(capsys, argv)
    target = tmp_path / "report.json"
    code = main(argv + ["--out", str(target)])
    capsys.readouterr()
    assert code == 0
    assert target.read_text(encoding="utf-8") == streamed


def test_json_sorts_keys(capsys):
    _, out, _ = run(capsys, ["kernels", "--kernel", "kappa"])
    doc = json.loads(out)
    assert list(doc) == sorted(doc)
