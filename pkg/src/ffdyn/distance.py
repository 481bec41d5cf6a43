"""p-adic logarithmic distance on P^1(K) and checkers for the distance inequalities.

Points are kept as coprime polynomial pairs, so at a finite place the
distance is just the valuation of the cross term x1*y2 - x2*y1.  The
checkers look at finitely many places: the degree-1 places dividing some
cross term (found explicitly) and the higher-degree ones, which are handled
without factoring by comparing the parts of the cross terms supported on a
common squarefree polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .dynamics import (
    EndoMap,
    ProjPoint,
    bad_places_simple,
    cross_term,
    evaluate,
    has_simple_good_reduction_at,
    has_simple_good_reduction_outside,
)
from .errors import PreconditionError
from .field import (
    INFINITY,
    ONE,
    BasePoly,
    Place,
    poly_gcd,
    poly_valuation,
    primary_part,
    rational_roots,
    squarefree_radical,
    strip_part,
)


def _hdeg(P: ProjPoint) -> int:
    return max(len(P.x.coeffs), len(P.y.coeffs)) - 1


def log_distance(P1: ProjPoint, P2: ProjPoint, place: Place):
    """delta_p(P1, P2); INFINITY for equal points."""
    if P1 == P2:
        return INFINITY
    c = cross_term(P1, P2)
    if place.is_infinity:
        return _hdeg(P1) + _hdeg(P2) - c.degree
    return poly_valuation(c, place)


def check_triangle(P1: ProjPoint, P2: ProjPoint, P3: ProjPoint, place: Place) -> bool:
    if len({P1, P2, P3}) < 3:
        raise PreconditionError("triangle check needs pairwise distinct points")
    d13 = log_distance(P1, P3, place)
    return d13 >= min(log_distance(P1, P2, place), log_distance(P2, P3, place))


def check_expansion(phi: EndoMap, P: ProjPoint, Q: ProjPoint, place: Place) -> bool:
    if not has_simple_good_reduction_at(phi, place):
        raise PreconditionError("place is not of simple good reduction")
    if P == Q:
        raise PreconditionError("expansion check needs distinct points")
    return log_distance(evaluate(phi, P), evaluate(phi, Q), place) >= log_distance(P, Q, place)


# ---------------------------------------------------------------------------
# multi-place comparison machinery


class _Excluded:
    """The set S, seen as a squarefree polynomial plus an infinity flag."""

    def __init__(self, radical: BasePoly, infinity: bool):
        self.radical = radical
        self.infinity = infinity

    @classmethod
    def from_S(cls, phi: EndoMap, S=None) -> "_Excluded":
        if S is None:
            bad = bad_places_simple(phi)
            return cls(squarefree_radical(bad.resultant), bad.infinity_bad)
        if not has_simple_good_reduction_outside(phi, S):
            raise PreconditionError("map does not have simple good reduction outside S")
        return cls(S.finite_product, S.has_infinity)

    def strip(self, p: BasePoly) -> BasePoly:
        return strip_part(p, self.radical) if self.radical.degree > 0 else p


class _Profile:
    """Valuations of a family of cross terms at every place outside S."""

    def __init__(self, terms: Dict[Tuple, BasePoly], points: Dict[Tuple, Tuple[ProjPoint, ProjPoint]],
                 excl: _Excluded):
        self.terms = terms
        roots = set()
        rad = ONE
        for c in terms.values():
            c_out = excl.strip(c)
            if c_out.degree > 0:
                r = squarefree_radical(c_out)
                rad = (rad * r).exact_div(poly_gcd(rad, r))
                roots |= rational_roots(r)
        self.rational = [Place.at(a) for a in sorted(roots)]
        residual = rad
        for p in self.rational:
            residual = residual.exact_div(p.generator)
        self.residual = residual
        self.places = list(self.rational)
        if not excl.infinity:
            self.places.append(Place.infinity())
        self.values = {}
        for key, c in terms.items():
            P, Q = points[key]
            vals = tuple(log_distance(P, Q, p) for p in self.places)
            part = primary_part(c, residual) if residual.degree > 0 else ONE
            self.values[key] = (vals, part)

    def equal(self, k1, k2) -> List[str]:
        """Places (as strings) where delta differs between two pairs."""
        (v1, r1), (v2, r2) = self.values[k1], self.values[k2]
        bad = [str(p) for p, a, b in zip(self.places, v1, v2) if a != b]
        if r1 != r2:
            bad.append(f"factor of {self.residual}")
        return bad

    def less_equal(self, k1, k2) -> List[str]:
        (v1, r1), (v2, r2) = self.values[k1], self.values[k2]
        bad = [str(p) for p, a, b in zip(self.places, v1, v2) if a > b]
        if not r1.divides(r2):
            bad.append(f"factor of {self.residual}")
        return bad


@dataclass
class DistanceReport:
    passed: bool
    checks: int
    places: List[str]
    non_rational_factor: Optional[str] = None
    violations: List[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": self.checks,
            "places": self.places,
            "non_rational_factor": self.non_rational_factor,
            "violations": self.violations,
        }


def _report(profile: Optional[_Profile], checks: int, violations) -> DistanceReport:
    if profile is None:
        return DistanceReport(True, 0, [])
    nr = str(profile.residual) if profile.residual.degree > 0 else None
    return DistanceReport(not violations, checks, [str(p) for p in profile.places], nr, violations)


def cycle_points(phi: EndoMap, P: ProjPoint, n: int) -> List[ProjPoint]:
    """[P, phi(P), ..., phi^(n-1)(P)], checking that P has exact period n."""
    if n < 1:
        raise PreconditionError("period must be positive")
    pts = [P]
    for _ in range(n):
        pts.append(evaluate(phi, pts[-1]))
    if pts[n] != P or P in pts[1:n]:
        raise PreconditionError(f"point is not periodic of minimal period {n}")
    return pts[:n]


def check_cycle_distances(phi: EndoMap, P: ProjPoint, n: int, S=None) -> DistanceReport:
    """Shift invariance and the coprime-index equality along an n-cycle.

    For i != j mod n: delta(phi^i P, phi^j P) = delta(phi^(i+k) P, phi^(j+k) P), and
    delta(phi^i P, phi^j P) = delta(phi P, P) when gcd(i - j, n) = 1.
    """
    pts = cycle_points(phi, P, n)
    if n == 1:
        return _report(None, 0, [])
    excl = _Excluded.from_S(phi, S)
    keys = [(i, j) for i in range(n) for j in range(i + 1, n)]
    terms = {k: cross_term(pts[k[0]], pts[k[1]]) for k in keys}
    profile = _Profile(terms, {k: (pts[k[0]], pts[k[1]]) for k in keys}, excl)

    def norm(i, j):
        i, j = i % n, j % n
        return (i, j) if i < j else (j, i)

    violations, checks = [], 0
    for (i, j) in keys:
        for k in range(1, n):
            checks += 1
            where = profile.equal((i, j), norm(i + k, j + k))
            if where:
                violations.append({"rule": "shift", "i": i, "j": j, "k": k, "places": where})
        if gcd(j - i, n) == 1:
            checks += 1
            where = profile.equal((i, j), (0, 1))
            if where:
                violations.append({"rule": "coprime", "i": i, "j": j, "places": where})
    return _report(profile, checks, violations)


def check_tail_inequality(phi: EndoMap, tail: Sequence[ProjPoint], S=None) -> DistanceReport:
    """For a tail P_{-m+1} -> ... -> P_0 with P_0 fixed and 0 < a < b <= m-1:
    delta(P_-b, P_-a) = delta(P_-b, P_0) <= delta(P_-a, P_0).

    ``tail`` is listed in orbit order, ending with P_0.
    """
    pts = list(tail)
    m = len(pts)
    if m == 0:
        raise PreconditionError("empty tail")
    P0 = pts[-1]
    if evaluate(phi, P0) != P0:
        raise PreconditionError("last point of the tail is not fixed")
    for k in range(m - 1):
        if evaluate(phi, pts[k]) != pts[k + 1]:
            raise PreconditionError(f"tail point {k} does not map to the next one")
    if len(set(pts)) != m:
        raise PreconditionError("tail points are not distinct")
    if m <= 2:
        return _report(None, 0, [])

    def at(i):  # P_{-i}
        return pts[m - 1 - i]

    excl = _Excluded.from_S(phi, S)
    keys = [(a, b) for b in range(1, m) for a in range(0, b)]
    terms = {k: cross_term(at(k[1]), at(k[0])) for k in keys}
    profile = _Profile(terms, {k: (at(k[1]), at(k[0])) for k in keys}, excl)
    violations, checks = [], 0
    for b in range(2, m):
        for a in range(1, b):
            checks += 2
            where = profile.equal((a, b), (0, b))
            if where:
                violations.append({"rule": "equality", "a": a, "b": b, "places": where})
            where = profile.less_equal((0, b), (0, a))
            if where:
                violations.append({"rule": "inequality", "a": a, "b": b, "places": where})
    return _report(profile, checks, violations)


def pgl_invariance_holds(A, P1: ProjPoint, P2: ProjPoint, place: Place) -> bool:
    """delta(A P1, A P2) == delta(P1, P2); meaningful when A is in PGL2(R_S) and place is outside S."""
    return log_distance(A.apply(P1), A.apply(P2), place) == log_distance(P1, P2, place)
