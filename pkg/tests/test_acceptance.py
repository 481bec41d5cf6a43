"""One test per acceptance criterion, each with its runtime limit.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""

import functools
import io
import json
import time
from contextlib import redirect_stdout

import pytest

from ffdyn.bounds import all_bounds
from ffdyn.cli import main as cli_main
from ffdyn.dynamics import evaluate
from ffdyn.field import BasePoly, FuncElem, Place
from ffdyn.kpoly import zpoly_from_polys
from ffdyn.orbits import classify, k_rational_roots_in_z, preper_set
from ffdyn.parsing import parse_element, parse_map, parse_point
from ffdyn.suites import SUITES, run_suite, s_min, theorem_bounds_hold
from ffdyn.sunits import PlaceSet, nondegenerate_count, solve_unit_equation

import conftest
from oracles import brute_force_k_roots, one_pass_bounds, seeded_root_instance

PROPERTY_SUITES = ["triangle", "expansion", "cycle", "tail", "pgl-invariance"]
SUITE_SEED = 1


@pytest.fixture
def criterion(request):
    state = {"detail": ""}
    start = time.perf_counter()
    yield state
    elapsed = time.perf_counter() - start
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    conftest.ACCEPTANCE_LINES.append(
        f"criterion {state['number']}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {state['detail']}")


@functools.lru_cache(maxsize=None)
def _suite(name, count, seed):
    return run_suite(name, count, seed)


def test_criterion_1_bounds(criterion):
    criterion["number"] = 1
    start = time.perf_counter()
    two_one = all_bounds(2, 1)
    one_one = all_bounds(1, 1)
    elapsed = time.perf_counter() - start
    got = {k: two_one[k].value for k in ("b", "A", "C", "M", "D")}
    assert got == {"b": 7, "A": 7, "C": 19845, "M": 7, "D": 4881870}
    assert (one_one["b"].value, one_one["C"].value, one_one["D"].value) == (5, 810, 132840)
    for (d, s), res in (((2, 1), two_one), ((1, 1), one_one)):
        ref = one_pass_bounds(d, s)
        assert {k: res[k].value for k in ref} == ref
    criterion["detail"] = f"bounds(2,1), bounds(1,1) exact in {elapsed:.3f}s"
    assert elapsed < 1.0


def test_criterion_2_scaled_square_example(criterion):
    criterion["number"] = 2
    start = time.perf_counter()
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["--json", "analyze", "--map", "t*z^2"])
    elapsed = time.perf_counter() - start
    rep = json.loads(buf.getvalue())
    assert code == 0
    assert "t" in rep["bad_places"]["finite"]
    imp = rep["improvements"]["t"]
    assert imp["A"] == "t*z" and imp["phi_A"] == "(z^2)/(1)"
    criterion["detail"] = f"bad at t, A = {imp['A']}, phi^A = {imp['phi_A']}"
    assert elapsed < 1.0


def test_criterion_3_property_suites(criterion):
    criterion["number"] = 3
    start = time.perf_counter()
    summaries = [_suite(name, 500, SUITE_SEED) for name in PROPERTY_SUITES]
    elapsed = time.perf_counter() - start
    failures = {s.suite: s.failures for s in summaries}
    criterion["detail"] = f"5 suites x 500, failures {failures}"
    for s in summaries:
        assert s.passes == 500, s.first_failure
    assert elapsed < 120.0


def test_criterion_4_unit_counting(criterion):
    criterion["number"] = 4
    start = time.perf_counter()
    summary = _suite("unit-count", 50, 7)
    T = FuncElem.t()
    S = PlaceSet([Place.at(0), Place.infinity()])
    res = solve_unit_equation(T - 1, 1, S, 2)
    elapsed = time.perf_counter() - start
    nondeg = {(str(s.x.value), str(s.y.value)) for s in res if not s.degenerate}
    criterion["detail"] = f"50 instances, {summary.failures} violations; worked instance {sorted(nondeg)}"
    assert summary.failures == 0, summary.first_failure
    assert nondeg == {("-1", "t"), ("1/t", "1/t")}
    assert nondegenerate_count(res) == 2
    assert elapsed < 60.0


def _reverify(phi, P, m, n):
    orbit = [P]
    for _ in range(m + n):
        orbit.append(evaluate(phi, orbit[-1]))
    assert orbit[m + n] == orbit[m]
    assert all(orbit[i] != orbit[m + n] for i in range(m))


def test_criterion_5_orbits_and_preper(criterion):
    criterion["number"] = 5
    start = time.perf_counter()
    psi = parse_map("z^2 - t^2 - t - 1")
    c1 = classify(psi, parse_point("t"))
    c2 = classify(psi, parse_point("-t"))
    assert (c1.kind, c1.m, c1.n) == ("Preperiodic", 0, 2)
    assert (c2.kind, c2.m, c2.n) == ("Preperiodic", 1, 2)
    assert {str(P) for P in c1.record.points} == {"t", "-t - 1"}
    _reverify(psi, parse_point("t"), 0, 2)
    _reverify(psi, parse_point("-t"), 1, 2)
    phi = parse_map("z^2 + (t - t^2)")
    graph = preper_set(phi)
    expected = {parse_point(s) for s in ("inf", "t", "-t", "1 - t", "t - 1")}
    assert set(graph.vertices) == expected
    for v in graph.vertices:
        cl = classify(phi, v)
        assert cl.kind == "Preperiodic"
        _reverify(phi, v, cl.m, cl.n)
    elapsed = time.perf_counter() - start
    criterion["detail"] = f"cycle (0,2)/(1,2), preper {sorted(str(v) for v in graph.vertices)}"
    assert elapsed < 5.0


def test_criterion_6_theorem_bounds(criterion):
    criterion["number"] = 6
    fired = []
    classified = 0
    for name in SUITES:
        count = 500 if name in PROPERTY_SUITES else 50
        seed = SUITE_SEED if name in PROPERTY_SUITES else 7
        s = _suite(name, count, seed)
        classified += s.stats.get("classified", 0)
        w = s.first_failure
        if w and w.get("reason") == "theorem bound violated":
            fired.append(name)
    for text, start in (("z^2 - t^2 - t - 1", "-t"), ("z^2 + t - t^2", "-t")):
        phi = parse_map(text)
        cl = classify(phi, parse_point(start))
        classified += 1
        if not theorem_bounds_hold(phi.degree, s_min(phi), cl.n, cl.m + cl.n):
            fired.append(text)
    criterion["detail"] = f"{classified} classified instances, assertions fired: {fired or 'none'}"
    assert classified > 0
    assert fired == []


def test_criterion_7_root_oracle(criterion):
    criterion["number"] = 7
    start = time.perf_counter()
    disagreements = []
    for i in range(100):
        F = seeded_root_instance(7000 + i)
        got = k_rational_roots_in_z(zpoly_from_polys([BasePoly(c) for c in F]))
        got = {(tuple(r.num.coeffs), tuple(r.den.coeffs)) for r in got}
        if got != brute_force_k_roots(F):
            disagreements.append(i)
    elapsed = time.perf_counter() - start
    criterion["detail"] = f"100 polynomials, {len(disagreements)} disagreements"
    assert disagreements == []
    assert elapsed < 60.0
