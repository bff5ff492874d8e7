import json
import subprocess
import sys

import pytest

from closefact.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_flagship(capsys):
    code, out, err = run_cli(
        capsys,
        "verify", "--n", "665165362680", "--A", "902460", "--B", "737058",
        "--offsets", "60:49,169:138,267:218",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] is True
    assert doc["skews"] == {"d21": "1", "d31": "3", "d32": "4"}
    assert doc["n"] == "665165362680"


def test_verify_invalid_tuple_exits_1_with_verdict_on_stdout(capsys):
    code, out, err = run_cli(
        capsys, "verify", "--n", "12", "--A", "4", "--B", "3", "--offsets", "1:1"
    )
    assert code == 1
    doc = json.loads(out)
    assert doc["valid"] is False
    assert doc["error"]["code"] == "offset-identity"


def test_skews_command(capsys):
    code, out, _ = run_cli(capsys, "skews", "--offsets", "6:5,17:14,27:22")
    assert code == 0
    assert json.loads(out) == {"d21": "1", "d31": "3", "d32": "4"}


def test_skews_domain_error_exits_1(capsys):
    code, out, err = run_cli(capsys, "skews", "--offsets", "1:1,2:2,3:3")
    assert code == 1
    assert out == ""
    assert "error" in err


def test_pell_classify_obstructed(capsys):
    code, out, _ = run_cli(capsys, "pell", "classify", "12", "1", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "obstructed"
    assert doc["certificate"]["kind"] == "residue-sweep"
    assert doc["certificate"]["modulus"] == 4


def test_pell_classify_solvable(capsys):
    code, out, _ = run_cli(capsys, "pell", "classify", "6", "4", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["status"] == "solvable"
    assert ["1", "1"] in doc["witnesses"]


def test_pell_classify_unknown(capsys):
    code, out, _ = run_cli(capsys, "pell", "classify", "1", "34", "-1", "--bound", "2000")
    doc = json.loads(out)
    assert doc["status"] == "unknown"
    assert doc["search_bound"] == 2000


def test_pell_classify_custom_moduli(capsys):
    code, out, _ = run_cli(capsys, "pell", "classify", "10", "3", "3", "--moduli", "4,9")
    doc = json.loads(out)
    assert doc["status"] == "obstructed"
    assert doc["certificate"]["modulus"] == 9


def test_cases_csv_group(capsys):
    code, out, _ = run_cli(capsys, "cases", "--format", "csv", "--group", "1,2,3")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert lines[1].split(",")[:8] == ["1", "1", "2", "3", "1", "1", "12", "1"]


def test_flag_value_syntax_errors_are_usage_errors():
    for argv in (
        ["cases", "--group", "1,2,3,4"],
        ["skews", "--offsets", "1:2,3"],
        ["verify", "--n", "12", "--A", "4", "--B", "3", "--offsets", "xy"],
        ["pell", "classify", "10", "3", "3", "--moduli", "a,b"],
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2, argv


def test_cases_paper_diff(capsys):
    code, out, _ = run_cli(capsys, "cases", "--paper-diff")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"tables", "table17"}
    assert doc["tables"]["13"]["extra_in_engine"] == [[3, 1, 8, 10]]


def test_family_k4(capsys):
    code, out, _ = run_cli(capsys, "family", "--index", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["n"] == "665165362680"
    assert doc["unit"] == {"x": "49", "y": "20"}
    assert doc["ratio"]["decimal"] == "0.04741264431"


def test_family_k3(capsys):
    code, out, _ = run_cli(capsys, "family", "--k3", "2")
    doc = json.loads(out)
    assert doc["n"] == "180"
    assert doc["bound"]["holds"] is True


def test_family_requires_exactly_one_mode(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["family", "--index", "1", "--k3", "2"])
    assert exc.value.code == 2


def test_search_csv(capsys):
    code, out, _ = run_cli(
        capsys, "search", "--amax", "25", "--cmax", "6", "--k", "3", "--format", "csv"
    )
    assert code == 0
    assert "180,15,12,3,3:2;5:3" in out.splitlines()


def test_search_json_decimal_strings(capsys):
    code, out, _ = run_cli(capsys, "search", "--amax", "25", "--cmax", "6", "--k", "3")
    doc = json.loads(out)
    assert doc["count"] == len(doc["results"]) > 0
    assert all(isinstance(r["n"], str) for r in doc["results"])


def test_report_json(capsys):
    code, out, _ = run_cli(capsys, "report")
    doc = json.loads(out)
    assert code == 0
    assert doc["census"]["supremum"]["ratio"] == "0.04742065558"
    assert doc["flagship"]["n"] == "665165362680"
    assert len(doc["flagship"]["factor_pairs"]) == 4
    assert all(f["cubic_bound_holds"] for f in doc["family_crosscheck"]["k3"])


def test_report_markdown(capsys):
    code, out, _ = run_cli(capsys, "report", "--format", "markdown")
    assert code == 0
    assert "Supremum: 0.04742065558" in out
    assert "665165362680" in out


def test_usage_errors_exit_2():
    for argv in (["bogus"], ["verify", "--n", "1"], ["cases", "--format", "yaml"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_determinism_byte_identical():
    cmd = [sys.executable, "-m", "closefact", "family", "--index", "2"]
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    assert first.stdout == second.stdout
    assert first.stdout.startswith(b"{")


def test_console_entry_point_version():
    out = subprocess.run(
        [sys.executable, "-m", "closefact", "--version"], capture_output=True, check=True
    )
    assert out.stdout.decode().startswith("closefact ")
