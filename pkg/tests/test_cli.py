from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from ramrec import cli
from ramrec.engine import CheckReport

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "output_schema.json").read_text())
FIRST = ["--x", "t+1/t", "--y", "(1/3)*t^3"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--output", "json")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert data["exit_code"] == code
    return data


def test_free_energy(capsys):
    assert run(capsys, "free", "--g", "2", *FIRST) == (0, "-13/72", "")


def test_swapped_w03_is_zero(capsys):
    assert run(capsys, "wgn", "--g", "0", "--n", "3", "--swap", *FIRST) == (0, "0", "")


def test_wgn_marker(capsys):
    code, out, _ = run(capsys, "wgn", "--g", "1", "--n", "1", "--swap", *FIRST)
    assert code == 0
    assert out == "(1/3)/p0^3 · dp0"


def test_swap_compare_reports_both_values(capsys):
    code, out, _ = run(capsys, "swap-compare", "--gmax", "2", "--x", "t+1/t", "--y", "(t-2)^4")
    assert code == 0
    assert "unequal" in out
    assert "-343/22674816" in out
    assert "-160471/14511882240" in out


def test_ram_listing(capsys):
    code, out, _ = run(capsys, "ram", "--x", "t^5+t^4", "--y", "t+1/t", "--terms", "4")
    assert code == 0
    assert "t = -4/5: index 2" in out
    assert "theta_1(s) = -s + (5/2)*s^2 - (25/4)*s^3 + (325/16)*s^4 + O(s^5)" in out
    assert "t = 0: index 4" in out


def test_check_all_passes(capsys):
    code, out, _ = run(capsys, "check", "--all", *FIRST)
    assert code == 0
    assert out and all(line.startswith("PASS") for line in out.splitlines())


def test_check_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_checks", lambda *a, **k: [CheckReport("forced", False)])
    code, out, _ = run(capsys, "check", "--symmetry", *FIRST)
    assert code == 1
    assert out == "FAIL  forced"


def test_check_needs_a_battery(capsys):
    code, _, err = run(capsys, "check", *FIRST)
    assert code == 2
    assert err.startswith("ramrec: ")


def test_coincident_ramification_exit(capsys):
    code, out, err = run(capsys, "free", "--g", "2", "--x", "t+1/t", "--y", "(t-1)^2")
    assert code == 2
    assert out == ""
    assert err.startswith("ramrec: coincident-ramification: ")
    assert len(err.splitlines()) == 1


def test_no_ramification_exit(capsys):
    code, _, err = run(capsys, "ram", "--x", "t", "--y", "t^2")
    assert code == 2
    assert err.startswith("ramrec: no-ramification: ")


def test_parse_error_exit(capsys):
    code, _, err = run(capsys, "free", "--g", "2", "--x", "t+", "--y", "t")
    assert code == 3
    assert err.startswith("ramrec: parse-error: position=2: ")
    assert "in x" in err


def test_config_file_and_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "curve.cfg"
    cfg.write_text("# first example\nx = t + 1/t\ny = (1/3)*t^3\ntruncation_order = 40\n")
    monkeypatch.delenv(cli.ENV_TRUNCATION, raising=False)
    data = run_json(capsys, "free", "--g", "2", "--config", str(cfg))
    assert data["result"]["value"] == "-13/72"
    assert data["curve"]["truncation_order"] == 40
    monkeypatch.setenv(cli.ENV_TRUNCATION, "44")
    assert run_json(capsys, "free", "--g", "2", "--config", str(cfg))["curve"]["truncation_order"] == 44
    data = run_json(capsys, "free", "--g", "2", "--config", str(cfg), "--truncation", "48", "--y", "t")
    assert data["curve"]["truncation_order"] == 48
    assert data["result"]["value"] == "-1/240"


def test_bad_config_key(capsys, tmp_path):
    cfg = tmp_path / "curve.cfg"
    cfg.write_text("x = t\nz = 1\n")
    code, _, err = run(capsys, "ram", "--config", str(cfg))
    assert code == 2
    assert "unknown key" in err


def test_base_point_flag(capsys):
    data = run_json(capsys, "free", "--g", "2", *FIRST, "--base-point", "1/2")
    assert data["curve"]["base_point"] == "1/2"
    assert data["result"]["value"] == "-13/72"


def test_verify_truncation_flag(capsys):
    assert run(capsys, "free", "--g", "3", "--verify-truncation", *FIRST) == (0, "2741/648", "")


@pytest.mark.parametrize(
    "argv",
    [
        ["ram", "--x", "t^5+t^4", "--y", "t+1/t"],
        ["wgn", "--g", "1", "--n", "2", *FIRST],
        ["wgn", "--g", "0", "--n", "3", "--swap", *FIRST],
        ["free", "--g", "2", *FIRST],
        ["check", "--w03", "--symmetry", *FIRST],
        ["swap-compare", "--x", "t+1/t", "--y", "t"],
    ],
)
def test_json_matches_schema(capsys, argv):
    run_json(capsys, *argv)


def test_text_and_json_agree(capsys):
    argv = ["wgn", "--g", "1", "--n", "2", *FIRST]
    _, text, _ = run(capsys, *argv)
    data = run_json(capsys, *argv)
    assert text == f"{data['result']['text']} {data['result']['marker']}"
    free = ["free", "--g", "3", "--swap", *FIRST]
    assert run(capsys, *free)[1] == run_json(capsys, *free)["result"]["value"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ramrec.cli", "free", "--g", "2", *FIRST],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "-13/72"
