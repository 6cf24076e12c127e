"""End-to-end command-line behaviour: exit codes, determinism, formats."""

import json
from pathlib import Path

import pytest

from homconf.cli import main

FIXTURE = str(Path(__file__).parent / "fixtures" / "vir.ws")


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_passing_check_exits_zero(capsys):
    code, out, _ = run(capsys, FIXTURE, "check", "algebra", "vir")
    assert code == 0
    assert "overall: pass" in out


def test_failing_check_exits_one_with_witness(capsys):
    code, out, _ = run(capsys, FIXTURE, "check", "oop", "T1",
                       "--module", "M2")
    assert code == 1
    assert "(-1*d - 2*l) * e" in out
    assert "overall: fail" in out


def test_input_error_exits_two(capsys):
    code, _, err = run(capsys, FIXTURE, "cobound", "c0")
    assert code == 2
    assert "c0" in err


@pytest.mark.parametrize("bad", [
    ["missing-file.ws", "check", "algebra", "vir"],
    [FIXTURE, "frobnicate"],
    [FIXTURE, "check", "algebra"],
    [FIXTURE, "check", "rotabaxter", "N", "--p", "0"],
    ["--report", "yaml", FIXTURE, "check", "algebra", "vir"],
])
def test_malformed_invocations_exit_two(capsys, bad):
    code, _, err = run(capsys, *bad)
    assert code == 2
    assert err


def test_reports_are_byte_identical(capsys):
    outputs = set()
    for _ in range(2):
        _, out, _ = run(capsys, "--report", "json", FIXTURE,
                        "deform", "obstruct", "SD")
        outputs.add(out)
    assert len(outputs) == 1


def test_json_and_text_statuses_agree(capsys):
    commands = [
        ["check", "oop", "T1", "--module", "M2"],
        ["check", "algebra", "vir"],
        ["deform", "check", "SD"],
        ["mc", "M"],
    ]
    for command in commands:
        code_t, text, _ = run(capsys, FIXTURE, *command)
        code_j, blob, _ = run(capsys, "--report", "json", FIXTURE, *command)
        assert code_t == code_j
        doc = json.loads(blob)
        assert (f"overall: {doc['overall']}") in text
        for entry in doc["entries"]:
            assert f"[{entry['status']:8s}] {entry['id']}" in text


def test_witness_suppression(capsys):
    _, out, _ = run(capsys, FIXTURE, "check", "oop", "T1", "--module", "M2")
    assert "suppressed" in out
    _, full, _ = run(capsys, "--all-witnesses", FIXTURE,
                     "check", "oop", "T1", "--module", "M2")
    assert "suppressed" not in full
    assert full.count("(-1*d - 2*l) * e") == 2


def test_result_lines_for_computations(capsys):
    code, out, _ = run(capsys, FIXTURE, "deform", "extend", "SD",
                       "--max-deg", "2")
    assert code == 0
    assert "matrix 1*d^2" in out
    code, out, _ = run(capsys, FIXTURE, "search-oop", "M",
                       "--max-deg", "0", "--coeffs", "-1,0,1/2,1,2")
    assert code == 0
    assert "5 candidate(s) found" in out
    assert out.count("candidate 5: matrix 2") == 1


def test_prelie_command(capsys):
    code, out, _ = run(capsys, FIXTURE, "prelie", "T1")
    assert code == 0
    assert "product 1 1 : 1*d + 1*l" in out


def test_json_document_shape(capsys):
    _, blob, _ = run(capsys, "--report", "json", FIXTURE,
                     "check", "algebra", "vir")
    doc = json.loads(blob)
    assert set(doc) == {"version", "command", "entries", "overall", "results"}
    assert doc["command"] == "check algebra vir"
    assert all(set(e) == {"id", "status", "witness"} for e in doc["entries"])
