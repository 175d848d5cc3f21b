import json
import subprocess
import sys
from pathlib import Path

import pytest

from ncbrackets.cli import main

FIXDIR = Path("fixtures")


def run_cli(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr().out
    return code, out


def test_check_hyp_exit_zero(capsys):
    code, out = run_cli(["check", FIXDIR / "hyp.txt"], capsys)
    assert code == 0
    assert "summary:" in out and "0 fail" in out


def test_check_bad_exit_one_with_witness(capsys):
    code, out = run_cli(["check", FIXDIR / "bad.txt"], capsys)
    assert code == 1
    assert "[fail] CD.c" in out
    assert "witness=(x,x)" in out


def test_parse_error_exit_two(tmp_path, capsys):
    bad = tmp_path / "broken.txt"
    bad.write_text("[generators]\nu : E\n[pairing]\n<u,w> = 1 ox 1\n")
    code, out = run_cli(["check", bad], capsys)
    assert code == 2
    assert "error:" in out


def test_missing_file_exit_two(capsys):
    code = main(["check", "no-such-file.txt"])
    assert code == 2


def test_json_output_deterministic(capsys):
    code1, out1 = run_cli(["check", FIXDIR / "hyp.txt", "--json", "--seed", "3"], capsys)
    code2, out2 = run_cli(["check", FIXDIR / "hyp.txt", "--json", "--seed", "3"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["exit_code"] == 0
    assert payload["report"]["summary"]["fail"] == 0


def test_seed_changes_sampled_witnesses(capsys):
    _, out1 = run_cli(["check", FIXDIR / "bad.txt", "--json", "--seed", "1"], capsys)
    _, out2 = run_cli(["check", FIXDIR / "bad.txt", "--json", "--seed", "2"], capsys)
    assert json.loads(out1) != json.loads(out2)


def test_convert_then_check(tmp_path, capsys):
    code, out = run_cli(["convert", FIXDIR / "hyp.txt"], capsys)
    assert code == 0
    converted = tmp_path / "hyp_dpva.txt"
    converted.write_text(out)
    code, out = run_cli(["check", converted], capsys)
    assert code == 0


def test_roundtrip_command(capsys):
    code, out = run_cli(["roundtrip", FIXDIR / "hyp.txt"], capsys)
    assert code == 0
    assert "roundtrip-tables" in out


def test_rep_command_emits_induced_table(capsys):
    code, out = run_cli(["rep", FIXDIR / "linear_poisson.txt", "--N", "2", "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["induced"]["N"] == 2
    assert payload["induced"]["poisson"]["{x_11,x_12}"] == "-x_12"


def test_rep_dimension_cap(capsys):
    code, out = run_cli(["rep", FIXDIR / "linear_poisson.txt", "--N", "7"], capsys)
    assert code == 2


def test_appendix_command(capsys):
    code, out = run_cli(["appendix", FIXDIR / "hyp.txt"], capsys)
    assert code == 0
    assert "pairing-transport" in out


def test_convention_flag(capsys):
    code, _ = run_cli(
        ["check", FIXDIR / "linear_poisson.txt", "--convention", "paper"], capsys
    )
    assert code == 1  # antisymmetric table fails the flip-fixed convention
    code, _ = run_cli(
        ["check", FIXDIR / "linear_poisson.txt", "--convention", "vdb"], capsys
    )
    assert code == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ncbrackets.cli", "check", str(FIXDIR / "zero.txt")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
