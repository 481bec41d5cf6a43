"""S-integers, S-units, S-coprime forms and a box solver for lambda*x + mu*y = 1."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import CapExceededError, PreconditionError
from .field import (
    FUNC_ONE,
    FUNC_ZERO,
    INFINITY,
    ONE,
    BasePoly,
    FuncElem,
    Place,
    poly_gcd,
    strip_part,
)

DEFAULT_ENUMERATION_CAP = 10**6


class PlaceSet:
    """A nonempty finite set S of places."""

    __slots__ = ("places", "_finite_product")

    def __init__(self, places: Iterable[Place]):
        ps = sorted(set(places))
        if not ps:
            raise PreconditionError("S must contain at least one place")
        self.places: Tuple[Place, ...] = tuple(ps)
        prod = ONE
        for p in ps:
            if not p.is_infinity:
                prod = prod * p.generator
        self._finite_product = prod

    @property
    def s(self) -> int:
        return len(self.places)

    def __len__(self):
        return len(self.places)

    def __iter__(self):
        return iter(self.places)

    def __contains__(self, place) -> bool:
        return place in self.places

    def __eq__(self, other):
        return isinstance(other, PlaceSet) and self.places == other.places

    def __hash__(self):
        return hash(self.places)

    def __repr__(self):
        return f"PlaceSet({self})"

    def __str__(self):
        return ",".join(str(p) for p in self.places)

    @property
    def has_infinity(self) -> bool:
        return self.places[-1].is_infinity

    @property
    def finite_places(self) -> List[Place]:
        return [p for p in self.places if not p.is_infinity]

    @property
    def finite_product(self) -> BasePoly:
        """Product of the generators of the finite places of S."""
        return self._finite_product

    def strip(self, p: BasePoly) -> BasePoly:
        """Remove from a polynomial all factors supported on finite places of S."""
        return strip_part(p, self._finite_product)


def _outside_part_constant(p: BasePoly, S: PlaceSet) -> bool:
    return S.strip(p).degree <= 0


def is_s_integer(x, S: PlaceSet) -> bool:
    x = FuncElem.coerce(x)
    if x.is_zero():
        return True
    if not _outside_part_constant(x.den, S):
        return False
    if not S.has_infinity and x.num.degree > x.den.degree:
        return False
    return True


def is_s_unit(x, S: PlaceSet) -> bool:
    x = FuncElem.coerce(x)
    if x.is_zero():
        return False
    if not (_outside_part_constant(x.den, S) and _outside_part_constant(x.num, S)):
        return False
    if not S.has_infinity and x.num.degree != x.den.degree:
        return False
    return True


def _s_unit_with_infinity_valuation(S: PlaceSet, k: int) -> FuncElem:
    """An S-unit w with valuation -k at infinity (S must have a finite place)."""
    fin = S.finite_places
    if not fin:
        raise PreconditionError("S has no finite place")
    g = fin[0].generator
    if k % g.degree:
        raise PreconditionError("no S-unit with the required valuation at infinity")
    return FuncElem.coerce(g) ** (k // g.degree)


def s_coprime_form(x, S: PlaceSet) -> Tuple[FuncElem, FuncElem]:
    """(a, b) with x = a/b, a and b S-integers, S-coprime outside S.

    The infinite point is (1, 0); zero is (0, 1).
    """
    if x is None or x == INFINITY:
        return FUNC_ONE, FUNC_ZERO
    x = FuncElem.coerce(x)
    if x.is_zero():
        return FUNC_ZERO, FUNC_ONE
    num, den = x.num, x.den
    den_out = S.strip(den).monic()
    den_in = den.exact_div(den_out)
    a = FuncElem(num, den_in)
    b = FuncElem._make(den_out, ONE)
    if not S.has_infinity:
        va = (a.den.degree - a.num.degree)
        vb = -b.num.degree
        k = min(va, vb)
        if k:
            w = _s_unit_with_infinity_valuation(S, -k)
            a, b = a / w, b / w
    return a, b


# ---------------------------------------------------------------------------
# S-unit lattice


@dataclass(frozen=True)
class SUnit:
    """constant * prod (t - alpha_i)^e_i over the finite degree-1 places of S."""

    constant: Fraction
    exponents: Tuple[int, ...]
    places: Tuple[Place, ...]

    @property
    def value(self) -> FuncElem:
        return monomial_value(self.places, self.exponents) * self.constant

    def __str__(self):
        return str(self.value)


def monomial_value(places: Sequence[Place], exponents: Sequence[int]) -> FuncElem:
    num, den = ONE, ONE
    for p, e in zip(places, exponents):
        if e > 0:
            num = num * p.generator ** e
        elif e < 0:
            den = den * p.generator ** (-e)
    return FuncElem._make(num, den)


def sunit_basis(S: PlaceSet) -> List[FuncElem]:
    """s - 1 generators of R_S^* modulo constants."""
    fin = S.finite_places
    if any(p.degree != 1 for p in fin):
        raise PreconditionError("S-unit lattice supported only over rational places")
    gens = [FuncElem.coerce(p.generator) for p in fin]
    if S.has_infinity:
        return gens
    base = gens[0]
    return [g / base for g in gens[1:]]


def _lattice_exponents(S: PlaceSet, coords: Sequence[int]) -> Tuple[int, ...]:
    """Exponent vector on the finite places for basis coordinates."""
    if S.has_infinity:
        return tuple(coords)
    return (-sum(coords),) + tuple(coords)


@dataclass(frozen=True)
class UnitEqSolution:
    """A solution (x, y) of lambda*x + mu*y = 1 in S-units.

    ``family`` marks a one-parameter family x = a*u, y = b*v with
    a*lambda*u + b*mu*v = 1 and lambda*u, mu*v both constant; x and y then
    hold one representative.  Families are always degenerate.
    """

    x: SUnit
    y: SUnit
    degenerate: bool
    family: bool = False

    def to_json(self) -> dict:
        out = {"x": str(self.x.value), "y": str(self.y.value), "degenerate": self.degenerate}
        if self.family:
            out["family"] = True
        return out


@dataclass
class UnitEqResult:
    solutions: List[UnitEqSolution]
    box: int
    places: PlaceSet
    pairs_examined: int = 0

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


def _sample_ts(lam: FuncElem, mu: FuncElem, S: PlaceSet, count: int) -> List[Fraction]:
    bad = set()
    for p in S.finite_places:
        bad.add(p.root)
    out = []
    k = 2
    while len(out) < count:
        for cand in (Fraction(k), Fraction(-k), Fraction(1, k), Fraction(-1, k)):
            if cand in bad or cand in out:
                continue
            lv, mv = lam(cand), mu(cand)
            if lv == INFINITY or mv == INFINITY or not lv or not mv:
                continue
            out.append(cand)
        k += 1
    return out[:count]


def _solve_pair_exact(A: FuncElem, B: FuncElem):
    """Constants (c, c') with c*A + c'*B = 1; None, a pair, or 'family'."""
    ratio = A / B
    if ratio.is_constant():
        if A.is_constant():
            return "family"
        return None
    # clear denominators: c*P + c'*Q = R over Q[t]
    P = A.num * B.den
    Q = B.num * A.den
    R = A.den * B.den
    n = max(len(P.coeffs), len(Q.coeffs), len(R.coeffs))
    rows = []
    for i in range(n):
        p = P.coeffs[i] if i < len(P.coeffs) else Fraction(0)
        q = Q.coeffs[i] if i < len(Q.coeffs) else Fraction(0)
        r = R.coeffs[i] if i < len(R.coeffs) else Fraction(0)
        rows.append([p, q, r])
    # P, Q independent: find two rows with nonzero 2x2 minor
    for i in range(n):
        for j in range(i + 1, n):
            det = rows[i][0] * rows[j][1] - rows[j][0] * rows[i][1]
            if det:
                c = (rows[i][2] * rows[j][1] - rows[j][2] * rows[i][1]) / det
                c2 = (rows[i][0] * rows[j][2] - rows[j][0] * rows[i][2]) / det
                if all(r[0] * c + r[1] * c2 == r[2] for r in rows):
                    return c, c2
                return None
    return None


def solve_unit_equation(
    lam,
    mu,
    S: PlaceSet,
    box: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> UnitEqResult:
    """All S-unit solutions of lam*x + mu*y = 1 with lattice coordinates in [-box, box].

    Complete only inside the box.  Degenerate one-parameter families are
    reported once with ``family=True``.
    """
    lam, mu = FuncElem.coerce(lam), FuncElem.coerce(mu)
    if lam.is_zero() or mu.is_zero():
        raise PreconditionError("lambda and mu must be nonzero")
    if box < 0:
        raise PreconditionError("box must be non-negative")
    sunit_basis(S)
    places = tuple(S.finite_places)
    rank = S.s - 1
    side = 2 * box + 1
    n_pairs = side ** (2 * rank)
    if n_pairs > cap:
        raise CapExceededError(f"box enumeration of {n_pairs} monomial pairs exceeds cap {cap}")

    coords = list(itertools.product(range(-box, box + 1), repeat=rank))
    exps = [_lattice_exponents(S, c) for c in coords] if places else [()]
    ts = _sample_ts(lam, mu, S, 6)
    lam_t = [lam(x) for x in ts]
    mu_t = [mu(x) for x in ts]
    mono_t = []
    for e in exps:
        vals = []
        for x in ts:
            v = Fraction(1)
            for p, k in zip(places, e):
                if k:
                    v *= (x - p.root) ** k
            vals.append(v)
        mono_t.append(vals)
    A_t = [[lv * m for lv, m in zip(lam_t, mv)] for mv in mono_t]
    B_t = [[uv * m for uv, m in zip(mu_t, mv)] for mv in mono_t]

    found = {}
    m = len(ts)
    for i, Ai in enumerate(A_t):
        for j, Bj in enumerate(B_t):
            det = Ai[0] * Bj[1] - Ai[1] * Bj[0]
            if det:
                c = (Bj[1] - Bj[0]) / det
                c2 = (Ai[0] - Ai[1]) / det
                if not c or not c2:
                    continue
                if any(c * Ai[k] + c2 * Bj[k] != 1 for k in range(2, m)):
                    continue
                sol = _solve_pair_exact(lam * monomial_value(places, exps[i]),
                                        mu * monomial_value(places, exps[j]))
            else:
                # A/B agrees at two samples; settle exactly
                sol = _solve_pair_exact(lam * monomial_value(places, exps[i]),
                                        mu * monomial_value(places, exps[j]))
            if sol is None:
                continue
            _record(found, sol, lam, mu, places, exps[i], exps[j])
    sols = sorted(found.values(), key=lambda s: (s.x.exponents, s.y.exponents, str(s.x.value)))
    return UnitEqResult(sols, box, S, n_pairs)


def _record(found, sol, lam, mu, places, ex, ey):
    u = monomial_value(places, ex)
    v = monomial_value(places, ey)
    A, B = lam * u, mu * v
    if sol == "family":
        a = (A.constant_value() * 2) ** -1
        b = (B.constant_value() * 2) ** -1
        x, y = SUnit(a, ex, places), SUnit(b, ey, places)
        key = ("family", ex, ey)
        found.setdefault(key, UnitEqSolution(x, y, True, True))
        return
    c, c2 = sol
    if not c or not c2:
        return
    x, y = SUnit(c, ex, places), SUnit(c2, ey, places)
    degenerate = (A / B).is_constant()
    key = (x.value, y.value)
    found.setdefault(key, UnitEqSolution(x, y, degenerate))


def nondegenerate_count(solutions) -> int:
    return sum(1 for s in solutions if not s.degenerate)


def zannier_bound(s: int) -> int:
    return 9 ** (s - 1)
