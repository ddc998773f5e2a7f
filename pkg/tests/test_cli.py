import json
import subprocess
import sys

import pytest

from cubix.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_classify_example(capsys):
    code, out = run_json(capsys, "classify", "--field", "rat", "--cubic", "1,0,6,-7")
    assert code == 0
    assert out == {"stratum": "GenericSquare", "qn": "81", "q": "9",
                   "invariant": {"q": "9", "cube_class": "1"}, "reducible": True}


def test_classify_nonsquare_renders_extension(capsys):
    code, out = run_json(capsys, "classify", "--field", "rat", "--cubic", "1,0,3,1")
    assert out["stratum"] == "GenericNonSquare" and out["extension"] == "quad:rat:5"
    assert out["q"] == "0+1*w"


def test_census_example(capsys, tmp_path):
    path = tmp_path / "census.json"
    code, out = run_json(capsys, "census", "--field", "fp:5", "--json", str(path))
    assert code == 0
    assert out["totals"] == {"sl_nonzero_disc": 8, "gl_nonzero_disc": 3}
    assert json.loads(path.read_text()) == out


def test_root_example(capsys):
    code, out = run_json(capsys, "root", "--field", "rat", "--p", "6", "--q", "-7")
    assert code == 0 and out["root"] == "1"
    code, out = run_json(capsys, "root", "--field", "rat", "--p", "3", "--q", "2")
    assert out["root"] is None


def test_factor_check(capsys):
    code, out = run_json(capsys, "factor", "--field", "rat", "--cubic", "0,3,0,0", "--check")
    assert code == 0 and out["check"] is True
    assert out["unit"] == "1"
    assert [(f["coeffs"], f["multiplicity"]) for f in out["factors"]] == [
        (["1", "0"], 2), (["0", "3"], 1)]
    for f in out["factors"]:
        assert set(f) == {"coeffs", "degree", "multiplicity", "irreducible"}


def test_factor_fraction_output(capsys):
    # 2x^3 + y^3/4 = (2x + y)(x^2 - xy/2 + y^2/4)
    code, out = run_json(capsys, "factor", "--field", "rat", "--cubic", "2,0,0,1/4", "--check")
    assert code == 0 and out["check"] is True
    assert [f["coeffs"] for f in out["factors"]] == [["2", "1"], ["1", "-1/2", "1/4"]]
    assert out["factors"][1]["irreducible"] is True


def test_invariant_and_same_orbit(capsys):
    code, out = run_json(capsys, "invariant", "--field", "fp:7", "--cubic", "1,0,0,3", "--group", "gl2")
    assert code == 0 and out["group"] == "gl2"
    code, out = run_json(capsys, "same-orbit", "--field", "rat", "--cubic", "1,0,0,1",
                         "--cubic2", "64,0,0,1", "--group", "gl2")
    assert out["same"] is True
    code, out = run_json(capsys, "same-orbit", "--field", "rat", "--cubic", "1,0,0,1",
                         "--cubic2", "64,0,0,1")
    assert out["same"] is False


def test_compose(capsys):
    code, out = run_json(capsys, "compose", "--field", "fp:7", "--cubic", "1,0,0,1",
                         "--cubic2", "1,0,0,1", "--disc", "1")
    assert code == 0 and out["classify"]["qn"] == "1"


def test_verify_command(capsys):
    code, out = run_json(capsys, "verify", "--field", "fp:5", "--trials", "5", "--seed", "3")
    assert code == 0 and out["passed"] and out["exhaustive"] == {"moment_image": [], "psi_image": []}


def test_domain_error_exits_one(capsys):
    code, out = run_json(capsys, "compose", "--field", "rat", "--cubic", "1,0,0,1", "--cubic2", "1,0,0,2")
    assert code == 1 and out["error"] == "DiscriminantMismatch" and out["message"]


def test_bad_cubic_text_is_usage_error(capsys):
    code, out = run_json(capsys, "classify", "--field", "rat", "--cubic", "1,2")
    assert code == 2 and out["error"] == "ParseError"


@pytest.mark.parametrize("argv", [
    [],
    ["classify", "--field", "rat"],
    ["bogus", "--field", "rat"],
    ["classify", "--cubic", "1,0,0,1"],
    ["root", "--field", "rat", "--p", "1"],
    ["same-orbit", "--field", "rat", "--cubic", "1,0,0,1"],
    ["invariant", "--field", "rat", "--cubic", "1,0,0,1", "--group", "gl3"],
])
def test_usage_errors_exit_two(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_pretty_output(capsys):
    code, out = run(capsys, "classify", "--field", "rat", "--cubic", "1,0,6,-7", "--pretty")
    assert code == 0 and "stratum: GenericSquare" in out and "{" not in out


@pytest.mark.parametrize("argv", [
    ["classify", "--field", "rat", "--cubic", "1,0,6,-7"],
    ["census", "--field", "fp:5"],
    ["root", "--field", "rat", "--p", "6", "--q", "-7"],
])
def test_documented_examples_byte_stable(argv):
    outs = [subprocess.run([sys.executable, "-m", "cubix", *argv], capture_output=True, check=True).stdout
            for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]
