import json
import subprocess
import sys
from pathlib import Path

import pytest

from padic_coleman.cli import run
from padic_coleman.padic import parse, render

CURVES = Path(__file__).resolve().parent.parent / "curves"
TORSION = str(CURVES / "torsion_p11.json")
RANK_ONE = str(CURVES / "rank_one_p7.json")


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_integrate_basis_torsion_example(capsys):
    code, out, _ = call(capsys, "integrate-basis", "--curve", TORSION, "--from", "(-1,1)", "--to", "(0,1/4)")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "w0: O(11^6)"
    assert lines[1] == "w1: O(11^6)"
    assert lines[2] == "w2: 7*11 + 6*11^2 + 3*11^3 + 11^4 + 5*11^5 + O(11^6)"
    assert lines[-1].startswith("audited_prec: ")


def test_integrate_from_infinity(capsys):
    code, out, _ = call(capsys, "integrate", "--curve", RANK_ONE, "--from", "inf", "--to", "(3,6)", "--coeffs", "1,0,0,0")
    assert code == 0
    assert out.splitlines()[0] == "integral: 6*7 + 6*7^2 + 3*7^3 + 3*7^4 + 2*7^5 + O(7^6)"


def test_validate_bad_reduction(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"p": 5, "digits": 6, "f": ["0", "60", "-112", "65", "-14", "1"]}))
    code, out, err = call(capsys, "validate", "--curve", str(f))
    assert code != 0 and out == ""
    assert err.startswith("ERROR BAD_REDUCTION ")
    assert len(err.strip().splitlines()) == 1


def test_validate_good(capsys):
    code, out, _ = call(capsys, "validate", "--curve", TORSION)
    assert code == 0 and "genus: 2" in out


@pytest.mark.parametrize("argv,code", [
    (["integrate-basis", "--curve", RANK_ONE, "--from", "(3,5)", "--to", "(3,6)"], "NOT_ON_CURVE"),
    (["integrate-basis", "--curve", RANK_ONE, "--from", "(0,0)", "--to", "(3,6)"], "DISC_TYPE"),
    (["integrate", "--curve", RANK_ONE, "--from", "inf", "--to", "(3,6)", "--coeffs", "0,0,1,0"], "BAD_FORM"),
    (["tiny", "--curve", RANK_ONE, "--from", "(3,6)", "--to", "(3,-6)"], "DISC_TYPE"),
    (["validate", "--curve", "/nonexistent.json"], "PARSE_ERROR"),
    (["integrate-basis", "--curve", RANK_ONE, "--from", "3,6", "--to", "(3,6)"], "PARSE_ERROR"),
])
def test_error_codes(capsys, argv, code):
    status, out, err = call(capsys, *argv)
    assert status != 0
    assert err.split()[:2] == ["ERROR", code]


def test_malformed_curve_file(capsys, tmp_path):
    f = tmp_path / "c.json"
    f.write_text("{not json")
    status, _, err = call(capsys, "validate", "--curve", str(f))
    assert status != 0 and err.startswith("ERROR PARSE_ERROR")
    f.write_text(json.dumps({"p": 7, "f": [0.5, 1]}))
    status, _, err = call(capsys, "validate", "--curve", str(f))
    assert status != 0 and err.startswith("ERROR BAD_CURVE")


def test_json_matches_text(capsys):
    argv = ["integrate-basis", "--curve", TORSION, "--from", "(-1,1)", "--to", "(0,1/4)"]
    _, text, _ = call(capsys, *argv)
    _, js, _ = call(capsys, *argv, "--json")
    doc = json.loads(js)
    lines = text.splitlines()
    assert [ln.split(": ", 1)[1] for ln in lines[:-1]] == doc["values"]
    assert int(lines[-1].split(": ")[1]) == doc["audited_prec"]


def test_outputs_round_trip_through_parser(capsys):
    _, js, _ = call(capsys, "frobenius", "--curve", RANK_ONE, "--json")
    doc = json.loads(js)
    for row in doc["matrix"]:
        for s in row:
            assert render(parse(s, 7)) == s
    _, js, _ = call(capsys, "zeta-numerator", "--curve", RANK_ONE, "--json")
    doc = json.loads(js)
    assert doc["nearest_integers"] == [1, 0, -2, 0, 49]
    for s in doc["values"]:
        assert render(parse(s, 7)) == s


def test_teichmuller_and_tiny(capsys):
    code, out, _ = call(capsys, "teichmuller", "--curve", RANK_ONE, "--point", "(3,6)")
    assert code == 0
    assert out.splitlines()[0] == "x: 3 + 4*7 + 6*7^2 + 3*7^3 + 2*7^5 + O(7^6)"
    code, out, _ = call(capsys, "tiny", "--curve", RANK_ONE, "--from", "(3,6)", "--to", "(10,-120)")
    assert code == 0 and len(out.splitlines()) == 5


def test_padic_point_coordinates(capsys):
    # the Teichmuller point of (3, 6), entered as digit strings
    _, out, _ = call(capsys, "teichmuller", "--curve", RANK_ONE, "--point", "(3,6)", "--digits", "12")
    x, y = (ln.split(": ", 1)[1] for ln in out.splitlines()[:2])
    code, out, err = call(capsys, "integrate-basis", "--curve", RANK_ONE, "--digits", "6",
                          "--from", f"({x},{y})", "--to", "(10,120)")
    assert code == 0, err


def test_deterministic_subprocess():
    cmd = [sys.executable, "-m", "padic_coleman", "integrate-basis", "--curve", TORSION,
           "--from", "(-1,1)", "--to", "(0,1/4)"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and a
