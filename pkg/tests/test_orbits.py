import pytest
import sympy

from ffdyn.dynamics import ProjPoint, evaluate
from ffdyn.errors import CapExceededError, PreconditionError
from ffdyn.field import FuncElem
from ffdyn.kpoly import ZPoly
from ffdyn.orbits import (
    CAP_REACHED,
    CYCLE,
    HEIGHT_ESCAPE,
    classify,
    k_rational_roots_in_z,
    orbit,
    periodic_points,
    preimages,
    preper_set,
)
from ffdyn.parsing import parse_element, parse_map, parse_point

from oracles import T_SYM

Z_SYM = sympy.Symbol("z")
PHI = "z^2 + t - t^2"
PSI = "z^2 - t^2 - t - 1"


def strs(points):
    return sorted(str(P) for P in points)


def sym_orbit(map_text, start, limit=10):
    """Forward orbit by sympy substitution; returns (m, n) of the first repeat."""
    f = sympy.sympify(map_text.replace("^", "**"), locals={"t": T_SYM, "z": Z_SYM})
    cur = sympy.oo if start == "inf" else sympy.sympify(start, locals={"t": T_SYM})
    seen = [cur]
    for _ in range(limit):
        cur = sympy.oo if cur is sympy.oo else sympy.cancel(f.subs(Z_SYM, cur))
        for i, s in enumerate(seen):
            if s == cur or (s is not sympy.oo and cur is not sympy.oo and sympy.cancel(s - cur) == 0):
                return i, len(seen) - i
        seen.append(cur)
    return None


def test_orbit_examples():
    rec = orbit(parse_map(PSI), parse_point("t"))
    assert rec.status == CYCLE and (rec.tail, rec.period) == (0, 2)
    assert [str(P) for P in rec.points] == ["t", "-t - 1"]
    rec = orbit(parse_map(PSI), parse_point("-t"))
    assert (rec.tail, rec.period) == (1, 2)
    assert [str(P) for P in rec.points] == ["-t", "-t - 1", "t"]
    assert orbit(parse_map(PHI), parse_point("1")).status == HEIGHT_ESCAPE
    assert orbit(parse_map(PHI), parse_point("1"), max_iter=2, height_cap=10**6).status == CAP_REACHED
    with pytest.raises(PreconditionError):
        orbit(parse_map(PHI), parse_point("1"), max_iter=0)


def test_orbit_json():
    out = orbit(parse_map(PSI), parse_point("-t")).to_json()
    assert out == {"points": ["-t", "-t - 1", "t"], "status": "Cycle", "m": 1, "n": 2}


@pytest.mark.parametrize("start, m, n", [("t", 0, 1), ("-t", 1, 1), ("inf", 0, 1), ("1 - t", 0, 1)])
def test_classify_examples(start, m, n):
    cl = classify(parse_map(PHI), parse_point(start))
    assert cl.kind == "Preperiodic"
    assert (cl.m, cl.n) == (m, n)
    assert sym_orbit(PHI, start) == (m, n)


def test_classify_non_preperiodic():
    assert classify(parse_map(PHI), parse_point("1")).kind == "NotPreperiodicHeuristic"
    assert classify(parse_map(PHI), parse_point("1"), max_iter=2, height_cap=10**6).kind == "Unknown"


def test_roots_in_z_examples():
    def roots(text):
        num = ZPoly([parse_element(c) for c in text])
        return strs(k_rational_roots_in_z(num))

    assert roots(["t - t^2", "-1", "1"]) == strs([parse_element("t"), parse_element("1 - t")])
    assert roots(["-t^2", "0", "1"]) == ["-t", "t"]
    assert roots(["-(t^2 - 2*t)", "0", "1"]) == []


def test_periodic_point_examples():
    assert strs(periodic_points(parse_map(PHI), 1)) == ["-t + 1", "inf", "t"]
    assert strs(periodic_points(parse_map(PSI), 2)) == ["-t - 1", "t"]
    assert periodic_points(parse_map(PHI), 2) == []
    with pytest.raises(CapExceededError):
        periodic_points(parse_map(PHI), 7)


def test_periodic_points_are_periodic():
    phi = parse_map(PSI)
    for n in (1, 2, 3):
        for P in periodic_points(phi, n):
            Q = P
            for _ in range(n):
                Q = evaluate(phi, Q)
            assert Q == P


def test_preimage_examples():
    phi = parse_map(PHI)
    assert strs(preimages(phi, parse_point("t"))) == ["-t", "t"]
    assert strs(preimages(phi, parse_point("1 - t"))) == ["-t + 1", "t - 1"]
    assert preimages(phi, parse_point("-t")) == []
    assert strs(preimages(phi, parse_point("inf"))) == ["inf"]
    rat = parse_map("(z^2 + t)/z")
    assert "0" in strs(preimages(rat, parse_point("inf")))


def test_preper_set_example():
    graph = preper_set(parse_map(PHI))
    assert strs(graph.vertices) == strs(parse_point(s) for s in ("inf", "t", "-t", "1 - t", "t - 1"))
    assert graph.complete
    for v in graph.vertices:
        assert sym_orbit(PHI, str(v)) is not None
        assert graph.edges[v] == evaluate(parse_map(PHI), v)
    out = graph.to_json()
    assert out["count"] == 5


def test_preper_set_vertex_cap():
    graph = preper_set(parse_map(PHI), vertex_cap=3)
    assert not graph.complete
    assert any("vertex cap" in n for n in graph.notes)


def test_preper_set_degree_one_bound():
    phi = parse_map("t*z + 1")
    graph = preper_set(phi, bound=2)
    assert len(graph) <= 2
