import json
import subprocess
import sys

import pytest

from ffdyn.cli import main, render


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    return code, json.loads(out)


def test_analyze_scaled_square(capsys):
    code, rep = run_json(capsys, "analyze", "--map", "(t*z^2)/(1)", "--places", "0,inf")
    assert code == 0
    assert rep["bad_places"]["finite"] == ["t"]
    assert rep["bad_places"]["infinity_bad"] is True
    assert rep["improvements"]["t"]["A"] == "t*z"
    assert rep["improvements"]["t"]["phi_A"] == "(z^2)/(1)"
    assert rep["isotriviality"]["verdict"] == "IsotrivialOverK"
    assert rep["good_reduction_outside_S"] is True


def test_analyze_nonisotrivial(capsys):
    code, rep = run_json(capsys, "analyze", "--map", "(z^2+t-t^2)/(1)", "--places", "inf")
    assert code == 0
    assert rep["good_reduction_outside_S"] is True
    assert rep["isotriviality"]["verdict"] == "LikelyNonIsotrivial"
    b = rep["bounds"]
    assert (b["d"], b["s"], b["b"], b["C"], b["D"]) == (2, 1, "7", "19845", "4881870")


def test_analyze_with_preper(capsys):
    code, rep = run_json(capsys, "analyze", "--map", "z^2 + t - t^2", "--places", "inf", "--preper")
    assert code == 0
    assert rep["preper"]["count"] == 5


def test_malformed_map(capsys):
    code, out, _ = run(capsys, "--json", "analyze", "--map", "(z^2 +")
    assert code == 2
    err = json.loads(out)["error"]
    assert err["kind"] == "parse" and "position" in err["message"]
    code, out, _ = run(capsys, "--json", "analyze", "--map", "(z^2-1)/(z-1)")
    assert code == 2
    assert "not a reduced map" in json.loads(out)["error"]["message"]


def test_precondition_and_cap_exit_codes(capsys):
    code, _, err = run(capsys, "sunit-solve", "--lambda", "t - 1", "--mu", "1")
    assert code == 3 and "places" in err
    code, _, _ = run(capsys, "periodic", "--map", "z^2 + t", "--n", "7")
    assert code == 4
    code, _, _ = run(capsys, "--box", "40", "sunit-solve", "--lambda", "t", "--mu", "1", "--places", "0,1,-1,inf")
    assert code == 4


def test_orbit_and_classify(capsys):
    code, rep = run_json(capsys, "orbit", "--map", "z^2 - t^2 - t - 1", "--point=-t")
    assert rep == {"points": ["-t", "-t - 1", "t"], "status": "Cycle", "m": 1, "n": 2}
    code, rep = run_json(capsys, "classify", "--map", "z^2 + t - t^2", "--point", "1")
    assert rep["kind"] == "NotPreperiodicHeuristic"
    code, rep = run_json(capsys, "classify", "--map", "z^2 + t - t^2", "--point=-t")
    assert (rep["kind"], rep["m"], rep["n"]) == ("Preperiodic", 1, 1)


def test_periodic_preimages_preper(capsys):
    _, rep = run_json(capsys, "periodic", "--map", "z^2 - t^2 - t - 1", "--n", "2")
    assert sorted(rep["points"]) == ["-t - 1", "t"]
    _, rep = run_json(capsys, "preimages", "--map", "z^2 + t - t^2", "--point", "1 - t")
    assert sorted(rep["preimages"]) == ["-t + 1", "t - 1"]
    _, rep = run_json(capsys, "preper", "--map", "z^2 + t - t^2")
    assert sorted(rep["vertices"]) == sorted(["inf", "t", "-t", "-t + 1", "t - 1"])
    assert "warning" not in rep
    _, rep = run_json(capsys, "preper", "--map", "t*z^2")
    assert "isotrivial" in rep["warning"]


def test_bounds_command(capsys):
    _, rep = run_json(capsys, "bounds", "--d", "2", "--s", "1")
    assert (rep["b"], rep["A"], rep["C"], rep["M"], rep["D"]) == ("7", "7", "19845", "7", "4881870")
    assert len(rep["N"]["value"]) == 8603
    _, rep = run_json(capsys, "bounds", "--d", "2", "--s", "1", "--digits")
    assert "value" not in rep["N"] and rep["N"]["digits"] == 8603
    _, rep = run_json(capsys, "bounds", "--d", "2", "--s", "1", "--variant", "proof")
    assert rep["A"] == "207"
    _, rep = run_json(capsys, "bounds", "--d", "1", "--s", "1")
    assert (rep["b"], rep["C"], rep["D"], rep["B"]) == ("5", "810", "132840", "2")


def test_sunit_solve(capsys):
    _, rep = run_json(capsys, "--box", "2", "sunit-solve", "--lambda", "t - 1", "--mu", "1", "--places", "0,inf")
    pairs = {(s["x"], s["y"]) for s in rep["solutions"] if not s["degenerate"]}
    assert pairs == {("-1", "t"), ("1/t", "1/t")}
    assert rep["nondegenerate_count"] == 2


def test_improve_reduction_command(capsys):
    _, rep = run_json(capsys, "improve-reduction", "--map", "t^2*z^2", "--place", "0")
    assert rep["result"]["phi_A"] == "(z^2)/(1)"
    _, rep = run_json(capsys, "improve-reduction", "--map", "z^2 + t - t^2", "--place", "0")
    assert rep["result"] == "no improvement found"


def test_verify_command(capsys):
    code, rep = run_json(capsys, "--seed", "1", "verify", "--suite", "triangle", "--count", "20")
    assert code == 0
    assert (rep["passes"], rep["failures"]) == (20, 0)
    code, rep = run_json(capsys, "verify", "--suite", "all", "--count", "3")
    assert code == 0 and rep["failures"] == 0
    assert len(rep["suites"]) == 7


def test_flags_after_subcommand(capsys):
    code, rep = run_json(capsys, "orbit", "--map", "z^2 + t - t^2", "--point", "1", "--max-iter", "2",
                         "--height-cap", "1000")
    assert rep["status"] == "CapReached"


def test_determinism(capsys):
    argv = ["--json", "--seed", "5", "verify", "--suite", "cycle", "--count", "10"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    argv = ["--json", "analyze", "--map", "(z^2 + t)/z"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_text_rendering():
    text = render({"a": {"b": 1, "c": [1, 2]}, "d": [{"e": "x"}]}, as_json=False)
    assert text.splitlines() == ["a.b: 1", "a.c: 1, 2", "d.0.e: x"]


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "ffdyn.cli", "--json", "bounds", "--d", "1", "--s", "1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["C"] == "810"
