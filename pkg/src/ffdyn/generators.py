"""Deterministic random instances for the property suites.

Every generator draws from a ``random.Random`` seeded by the caller, so the
same seed always produces the same stream of instances.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .dynamics import EndoMap, Mobius, ProjPoint, make_map
from .field import BasePoly, FuncElem, Place
from .kpoly import ZPoly, k_rational_roots
from .sunits import PlaceSet, monomial_value


class InstanceGenerator:
    def __init__(self, seed: int = 0):
        self.seed = seed
        self.rng = random.Random(seed)

    # -- scalars and elements of K ------------------------------------------

    def scalar(self, h: int = 5, nonzero: bool = False) -> Fraction:
        while True:
            num = self.rng.randint(-h, h)
            if num or not nonzero:
                break
        den = self.rng.choice((1, 1, 1, 2, 3))
        return Fraction(num, den)

    def poly(self, max_deg: int = 2, h: int = 5, nonzero: bool = True) -> BasePoly:
        while True:
            deg = self.rng.randint(0, max_deg)
            p = BasePoly([self.scalar(h) for _ in range(deg + 1)])
            if p.coeffs or not nonzero:
                return p

    def element(self, max_deg: int = 2, h: int = 5) -> FuncElem:
        num = self.poly(max_deg, h, nonzero=False)
        if self.rng.random() < 0.5:
            return FuncElem(num)
        return FuncElem(num, self.poly(max_deg, h))

    def point(self, max_deg: int = 2, h: int = 5, inf_rate: float = 0.05) -> ProjPoint:
        if self.rng.random() < inf_rate:
            return ProjPoint.infinity()
        return ProjPoint.from_value(self.element(max_deg, h))

    def distinct_points(self, k: int, **kw) -> List[ProjPoint]:
        out: List[ProjPoint] = []
        while len(out) < k:
            P = self.point(**kw)
            if P not in out:
                out.append(P)
        return out

    def rational_place(self, lo: int = -4, hi: int = 4, avoid: Sequence[Place] = ()) -> Place:
        while True:
            p = Place.at(self.rng.randint(lo, hi))
            if p not in avoid:
                return p

    def close_points(self, k: int, place: Place, max_exp: int = 3) -> List[ProjPoint]:
        """k distinct points agreeing with a common base point to random orders at a finite place."""
        pi = FuncElem(place.generator)
        base = self.element(1, 4)
        out: List[ProjPoint] = []
        while len(out) < k:
            e = self.rng.randint(0, max_exp)
            P = ProjPoint.from_value(base + pi ** e * FuncElem(self.poly(1, 4)))
            if P not in out:
                out.append(P)
        return out

    # -- maps ---------------------------------------------------------------

    def monic_polynomial_map(self, d: Optional[int] = None, max_deg: int = 3) -> EndoMap:
        """z^d + lower terms with coefficients in Q[t]; resultant 1 at finite places."""
        d = d or self.rng.choice((2, 2, 3))
        coeffs = [self.poly(max_deg, nonzero=False) for _ in range(d)]
        if not coeffs[0].coeffs and all(not c.coeffs for c in coeffs):
            coeffs[0] = BasePoly.t()
        return make_map(coeffs + [BasePoly.constant(1)], [1])

    def two_cycle(self) -> Tuple[EndoMap, ProjPoint]:
        """z^2 + c with the 2-cycle {a, b}: a + b = -1, ab = c + 1."""
        while True:
            a = FuncElem(self.poly(2))
            b = -1 - a
            if a != b:
                break
        c = a * b - 1
        return make_map([c, 0, 1], [1]), ProjPoint.from_value(a)

    def three_cycle(self) -> Tuple[EndoMap, ProjPoint]:
        """A quadratic polynomial map through P1 -> P2 -> P3 -> P1 (Lagrange interpolation)."""
        while True:
            pts = [FuncElem(self.poly(1, 4)) for _ in range(3)]
            if len(set(pts)) < 3:
                continue
            z = ZPoly.z()
            phi = ZPoly(())
            for i in range(3):
                term = ZPoly.constant(pts[(i + 1) % 3])
                for j in range(3):
                    if j != i:
                        term = term * (z - ZPoly.constant(pts[j])) * (pts[i] - pts[j]).inverse()
                phi = phi + term
            if phi.degree == 2:
                return make_map(phi, ZPoly.constant(1)), ProjPoint.from_value(pts[0])

    def rational_map(self, d: Optional[int] = None, max_deg: int = 2) -> EndoMap:
        """A random f/g with t-dependent coefficients."""
        d = d or self.rng.choice((2, 2, 3))
        while True:
            f = [self.poly(max_deg, 3, nonzero=False) for _ in range(d + 1)]
            g = [self.poly(max_deg, 3, nonzero=False) for _ in range(d + 1)]
            if not f[d].coeffs and not g[d].coeffs:
                continue
            try:
                phi = make_map(f, g)
            except Exception:
                continue
            if not phi.has_constant_coefficients():
                return phi

    # -- S-structures ---------------------------------------------------------

    def place_set(self, max_s: int = 3) -> PlaceSet:
        s = self.rng.randint(1, max_s)
        pool = [Place.at(a) for a in (0, 1, -1, 2)] + [Place.infinity()]
        return PlaceSet(self.rng.sample(pool, s))

    def s_unit(self, S: PlaceSet, e: int = 2) -> FuncElem:
        fin = S.finite_places
        exps = [self.rng.randint(-e, e) for _ in fin]
        if not S.has_infinity and fin:
            exps[0] = -sum(exps[1:])
        return monomial_value(fin, exps) * self.scalar(4, nonzero=True)

    def unit_equation(self, S: PlaceSet, e: int = 2) -> Tuple[FuncElem, FuncElem]:
        """(lambda, mu) built so that at least one S-unit solution exists when possible."""
        while True:
            x0, y0 = self.s_unit(S, e), self.s_unit(S, e)
            mu = self.s_unit(S, 1) if self.rng.random() < 0.5 else FuncElem(self.scalar(4, nonzero=True))
            lam_num = 1 - mu * y0
            if lam_num:
                return lam_num / x0, mu

    def pgl2_rs(self, S: PlaceSet, steps: int = 3) -> Mobius:
        """A product of elementary S-integral matrices and S-unit diagonals."""
        fin = S.finite_places
        M = [[FuncElem(1), FuncElem(0)], [FuncElem(0), FuncElem(1)]]

        def integer():
            if S.has_infinity:
                return FuncElem(self.poly(1, 3))
            # without infinity, S-integers have degree(num) <= degree(den)
            if not fin:
                return FuncElem(self.scalar(3))
            g = fin[0].generator
            k = self.rng.randint(0, 2)
            return FuncElem(self.poly(k, 3), g ** k)

        for _ in range(steps):
            kind = self.rng.randrange(3)
            if kind == 0:
                x = integer()
                E = [[FuncElem(1), x], [FuncElem(0), FuncElem(1)]]
            elif kind == 1:
                x = integer()
                E = [[FuncElem(1), FuncElem(0)], [x, FuncElem(1)]]
            else:
                u = self.s_unit(S, 1) if fin else FuncElem(self.scalar(3, nonzero=True))
                E = [[u, FuncElem(0)], [FuncElem(0), FuncElem(1)]]
            M = [[M[i][0] * E[0][j] + M[i][1] * E[1][j] for j in range(2)] for i in range(2)]
        return Mobius(M[0][0], M[0][1], M[1][0], M[1][1])

    # -- preperiodic tails ------------------------------------------------------

    def tail(self) -> Tuple[EndoMap, List[ProjPoint]]:
        """z^2 + c with a tail w -> -b -> b (b fixed), extended backwards when possible.

        With b = 1 + (u + 1/u)/2 and w = (1/u - u)/2 one has w^2 = b^2 - 2b,
        so w maps to -b, which maps to the fixed point b.
        """
        while True:
            alpha = self.rng.randint(-3, 3)
            k = self.rng.choice((1, 1, 2))
            u = FuncElem(BasePoly.linear_root(alpha)) ** k * self.scalar(3, nonzero=True)
            if self.rng.random() < 0.3:
                u = u * FuncElem(BasePoly.linear_root(alpha + 1 if alpha < 3 else -4))
            b = 1 + (u + u.inverse()) / 2
            w = (u.inverse() - u) / 2
            if w in (b, -b) or not b:
                continue
            phi = make_map([b - b * b, 0, 1], [1])
            pts = [ProjPoint.from_value(w), ProjPoint.from_value(-b), ProjPoint.from_value(b)]
            if len(set(pts)) < 3:
                continue
            # one more backward step if a K-rational preimage exists
            pre = k_rational_roots(ZPoly([b - b * b - w, 0, 1]))
            pre = [ProjPoint.from_value(r) for r in pre]
            pre = [P for P in pre if P not in pts]
            if pre:
                pts.insert(0, pre[0])
            return phi, pts
