from fractions import Fraction
import random

import pytest
import sympy

from ffdyn.errors import CapExceededError, PreconditionError
from ffdyn.field import INFINITY, BasePoly, FuncElem, Place, valuation
from ffdyn.parsing import parse_element
from ffdyn.sunits import (
    PlaceSet,
    is_s_integer,
    is_s_unit,
    nondegenerate_count,
    s_coprime_form,
    solve_unit_equation,
    sunit_basis,
    zannier_bound,
)

from oracles import T_SYM, brute_force_unit_equation

T = FuncElem.t()
INF = Place.infinity()
S_T = PlaceSet([Place.at(0), INF])


def test_placeset_basics():
    S = PlaceSet([INF, Place.at(1), Place.at(0), Place.at(0)])
    assert S.s == 3
    assert S.has_infinity
    assert sorted(str(p) for p in S.finite_places) == ["t", "t - 1"]
    with pytest.raises(PreconditionError):
        PlaceSet([])


def test_s_integers():
    assert is_s_integer(T + 1, PlaceSet([INF]))
    assert not is_s_integer(1 / (T - 1), PlaceSet([INF]))
    assert is_s_integer((T + 1) / (T * T), S_T)
    assert is_s_integer(FuncElem(0), PlaceSet([INF]))
    # without infinity: polynomials of positive degree have a pole at infinity
    assert not is_s_integer(T, PlaceSet([Place.at(0)]))
    assert is_s_integer(1 / T, PlaceSet([Place.at(0)]))


def test_s_units():
    assert is_s_unit(3 * T ** 5, S_T)
    assert not is_s_unit(T + 1, S_T)
    assert is_s_unit(FuncElem(5), PlaceSet([INF]))
    assert not is_s_unit(FuncElem(0), S_T)
    S = PlaceSet([Place.at(0), Place.at(1)])
    assert is_s_unit(T / (T - 1), S)
    assert not is_s_unit(T, S)


def test_s_coprime_form_examples():
    assert s_coprime_form((T - 1) / (T + 1), PlaceSet([INF])) == (T - 1, T + 1)
    assert s_coprime_form(1 / T, PlaceSet([INF])) == (FuncElem(1), T)
    assert s_coprime_form((T + 1) / (T * T), S_T) == ((T + 1) / (T * T), FuncElem(1))
    assert s_coprime_form(INFINITY, S_T) == (FuncElem(1), FuncElem(0))
    assert s_coprime_form(FuncElem(0), S_T) == (FuncElem(0), FuncElem(1))


@pytest.mark.parametrize("seed", range(15))
def test_s_coprime_form_properties(seed):
    rng = random.Random(seed)
    pool = [Place.at(a) for a in (0, 1, -1, 2)] + [INF]
    S = PlaceSet(rng.sample(pool, rng.randint(1, 3)))
    x = FuncElem(BasePoly([rng.randint(-3, 3) for _ in range(3)]) or BasePoly([1]),
                 BasePoly([rng.randint(-3, 3) for _ in range(3)]) or BasePoly([1]))
    a, b = s_coprime_form(x, S)
    assert is_s_integer(a, S) and is_s_integer(b, S)
    assert a / b == x
    outside = [Place.at(k) for k in range(-12, 13) if Place.at(k) not in S][:20]
    if INF not in S:
        outside.append(INF)
    for p in outside:
        vals = [valuation(e, p) for e in (a, b) if e]
        assert min(vals) == 0


def test_sunit_basis_examples():
    assert sunit_basis(S_T) == [T]
    assert sunit_basis(PlaceSet([INF])) == []
    assert sunit_basis(PlaceSet([Place.at(0), Place.at(1)])) == [T / (T - 1)]
    with pytest.raises(PreconditionError, match="rational places"):
        sunit_basis(PlaceSet([Place.finite(BasePoly([1, 0, 1])), INF]))


def values(res, nondegenerate=True):
    return {(sol.x.value, sol.y.value) for sol in res if not nondegenerate or not sol.degenerate}


def test_worked_instance():
    res = solve_unit_equation(T - 1, 1, S_T, 2)
    assert values(res) == {(FuncElem(-1), T), (1 / T, 1 / T)}
    assert nondegenerate_count(res) == 2
    for sol in res:
        assert (T - 1) * sol.x.value + sol.y.value == 1
        assert is_s_unit(sol.x.value, S_T) and is_s_unit(sol.y.value, S_T)


def test_all_degenerate_family():
    res = solve_unit_equation(1, 1, S_T, 1)
    assert nondegenerate_count(res) == 0
    fams = [sol for sol in res if sol.family]
    assert len(fams) == 1
    assert fams[0].x.value == FuncElem(Fraction(1, 2))


def test_no_solutions():
    assert nondegenerate_count(solve_unit_equation(T, 1, S_T, 3)) == 0
    assert nondegenerate_count([]) == 0


def test_errors():
    with pytest.raises(PreconditionError):
        solve_unit_equation(0, 1, S_T, 1)
    S = PlaceSet([Place.at(a) for a in (0, 1, -1, 2)] + [INF])
    with pytest.raises(CapExceededError):
        solve_unit_equation(T, 1, S, 10, cap=1000)


def to_sym(x):
    return sympy.Rational(1) * sympy.sympify(str(x).replace("^", "**"), locals={"t": T_SYM})


CASES = [
    ("t - 1", "1", (0,), True, 2),
    ("t + 1", "-t", (0,), True, 2),
    ("(t - 1)/t", "1/t", (0,), True, 2),
    ("1/(t - 1)", "t/(t - 1)", (0, 1), False, 2),
    ("2", "(t - 2)/t", (0, 2), True, 1),
    ("t", "1 - t", (0, 1), True, 1),
]


@pytest.mark.parametrize("lam, mu, roots, has_inf, box", CASES)
def test_against_coefficient_matching(lam, mu, roots, has_inf, box):
    lam_e, mu_e = sympy.sympify(lam, locals={"t": T_SYM}), sympy.sympify(mu, locals={"t": T_SYM})
    S = PlaceSet([Place.at(a) for a in roots] + ([INF] if has_inf else []))
    res = solve_unit_equation(parse_element(lam), parse_element(mu), S, box)
    want = brute_force_unit_equation(lam_e, mu_e, roots, has_inf, box)
    got = {(sympy.cancel(to_sym(s.x.value)), sympy.cancel(to_sym(s.y.value))): s.degenerate
           for s in res if not s.family}
    assert {k for k, v in got.items() if not v} == {k for k, v in want.items() if not v}
    assert nondegenerate_count(res) <= zannier_bound(S.s)


def test_zannier_bound():
    assert [zannier_bound(s) for s in (1, 2, 3)] == [1, 9, 81]
