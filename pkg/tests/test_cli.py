import json

import pytest

from cli import EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_roots_g2(capsys):
    code, report = run(capsys, "roots", "--system", "G2", "--alpha", "[1,0]")
    assert code == EXIT_OK
    assert report["schema"] == 1
    assert len(report["roots"]) == 12
    assert len(report["b_set"]) == 5
    assert report["covered"]
    assert len({step["root"] for step in report["deletion"]}) == 11


def test_roots_a2(capsys):
    code, report = run(capsys, "roots", "--system", "A2", "--alpha", "[1,0]")
    assert code == EXIT_OK
    assert {step["rule"] for step in report["deletion"]} == {"B"}


@pytest.mark.parametrize("alpha", ["[2,0]", "[1,a]", "1,0"])
def test_roots_invalid_literal(capsys, alpha):
    code, report = run(capsys, "roots", "--system", "G2", "--alpha", alpha)
    assert code == EXIT_USAGE
    assert report is None


def test_check_refuses_missing_unit(capsys):
    code = main(["check", "--system", "B2", "--ring", "zmod:4"])
    captured = capsys.readouterr()
    assert code == EXIT_USAGE
    assert captured.out == ""
    assert "1/2" in captured.err


def test_check_unknown_suite(capsys):
    code, _ = run(capsys, "check", "--system", "A2", "--ring", "gf:2", "--suites", "nope")
    assert code == EXIT_USAGE


def test_check_sandwich_a2_f2(capsys):
    code, report = run(capsys, "check", "--system", "A2", "--ring", "gf:2", "--suites", "sandwich")
    assert code == EXIT_OK
    assert report["passed"]
    [suite] = report["suites"]
    assert suite["suite"] == "sandwich" and suite["status"] == "pass"
    assert suite["details"]["order"] == 168
    assert suite["details"]["[1,0]"]["middle"] == 1


def test_check_samples_or_skips_capped_suites(capsys):
    code, report = run(capsys, "check", "--system", "A2", "--ring", "gf:3",
                       "--suites", "ej,deletion,root_subgroup,commutant,parameters",
                       "--cap", "100", "--samples", "20")
    assert code == EXIT_OK
    suites = {s["suite"]: s for s in report["suites"]}
    assert {name: s["status"] for name, s in suites.items()} == {
        "deletion": "pass",
        "ej": "pass",
        "root_subgroup": "pass",
        "commutant": "skipped (capped)",
        "parameters": "skipped (capped)",
    }
    assert suites["ej"]["sampled"] and not suites["ej"]["exhaustive"]
    assert suites["root_subgroup"]["details"]["[1,0]"]["accepted"] == 3


@pytest.mark.slow
def test_check_g2_f5_runs_sampled_suites(capsys):
    code, report = run(capsys, "check", "--system", "G2", "--ring", "gf:5",
                       "--suites", "ej,sandwich,root_subgroup", "--samples", "20")
    assert code == EXIT_OK
    for suite in report["suites"]:
        assert suite["status"] == "pass", suite["failures"]
        assert suite["sampled"]
    assert report["suites"][1]["details"]["[1,0]"]["x_units"] == 4


def test_check_is_deterministic(capsys):
    argv = ["check", "--system", "A2", "--ring", "zmod:4", "--suites", "steinberg", "gauss",
            "--samples", "20", "--seed", "5"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == first


def test_check_writes_output_file(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main(["check", "--system", "A3", "--ring", "gf:2", "--suites", "deletion", "--out", str(out)])
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["suites"][0]["status"] == "pass"


def test_decompose(capsys):
    code, report = run(capsys, "decompose", "--system", "A2", "--ring", "gf:3",
                       "--word", "x[0,-1](1) * x[1,0](2)")
    assert code == EXIT_OK
    assert report["recomposes"]
    assert set(report["form"]) == {"u", "h", "v", "u2"}
    assert len(report["form"]["u"]) == 3 and len(report["form"]["h"]) == 2


def test_decompose_empty_word(capsys):
    code, report = run(capsys, "decompose", "--system", "A2", "--ring", "gf:3", "--word", "")
    assert code == EXIT_OK
    assert report["form"] == {"u": ["0"] * 3, "h": ["1"] * 2, "v": ["0"] * 3, "u2": ["0"] * 3}
    assert report["big_cell"]


def test_decompose_non_unit_torus(capsys):
    code, _ = run(capsys, "decompose", "--system", "A2", "--ring", "gf:3", "--word", "h[1,0](0)")
    assert code == EXIT_USAGE


def test_interp_ring(capsys):
    code, report = run(capsys, "interp", "--system", "A2", "--ring", "gf:2", "--direction", "ring")
    assert code == EXIT_OK
    assert report["passed"] and report["exhaustive"]
    assert report["direction"] == "ring"


def test_interp_group(capsys):
    code, report = run(capsys, "interp", "--system", "A2", "--ring", "gf:2", "--direction", "group",
                       "--pairs", "100")
    assert code == EXIT_OK
    assert report["details"]["images"] == 168
    assert report["sampled"]


@pytest.mark.slow
def test_interp_group_z4(capsys):
    code, report = run(capsys, "interp", "--system", "A2", "--ring", "zmod:4", "--direction", "group")
    assert code == EXIT_OK
    assert report["details"]["order"] == 43008


def test_interp_unknown_direction(capsys):
    code, _ = run(capsys, "interp", "--system", "A2", "--ring", "gf:2", "--direction", "sideways")
    assert code == EXIT_USAGE
