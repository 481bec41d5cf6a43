"""Rational self-maps of the projective line over K = Q(t).

Maps are stored in a global integral form: all coefficients are
polynomials in t with no common factor, scaled so that the first nonzero
coefficient among f_d..f_0, g_d..g_0 is monic in t.  This form is reduced
at every finite place, so it is an S-reduced integral form for every S
containing infinity; the place at infinity is handled by the substitution
t -> 1/u followed by renormalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import MapError, PreconditionError
from .field import (
    FUNC_ONE,
    FUNC_ZERO,
    INFINITY,
    ONE,
    T,
    ZERO,
    BasePoly,
    FuncElem,
    Place,
    distinct_root_count,
    poly_gcd,
    poly_valuation,
    rational_roots,
    reduce_at,
    squarefree_radical,
    strip_part,
)
from .kpoly import ZPoly, zpoly_from_polys


def _content_normalize(polys: Sequence[BasePoly]) -> List[BasePoly]:
    """Divide by the gcd of all entries and make the first nonzero entry monic."""
    g = ZERO
    for p in polys:
        if p.coeffs:
            g = poly_gcd(g, p)
            if g.degree == 0:
                break
    if g.degree > 0:
        polys = [p.exact_div(g) for p in polys]
    lead = next((p for p in polys if p.coeffs), None)
    if lead is not None and lead.lc != 1:
        inv = 1 / lead.lc
        polys = [p * inv for p in polys]
    return list(polys)


def _clear_denominators(elems: Sequence[FuncElem]) -> List[BasePoly]:
    den = ONE
    for c in elems:
        if len(c.den.coeffs) > 1:
            den = (den * c.den).exact_div(poly_gcd(den, c.den))
    return [c.num * den.exact_div(c.den) if len(den.coeffs) > 1 else c.num * (1 / c.den.lc)
            for c in elems]


# ---------------------------------------------------------------------------
# Points


class ProjPoint:
    """A point [x : y] of P^1(K) with x, y coprime polynomials in t.

    The representative is canonical: y monic, or (1, 0) for infinity.  It is
    an S-coprime integral form for every S containing infinity.
    """

    __slots__ = ("x", "y", "_hash")

    def __init__(self, x: BasePoly, y: BasePoly):
        if not x.coeffs and not y.coeffs:
            raise ValueError("[0:0] is not a point")
        if not y.coeffs:
            x, y = ONE, ZERO
        elif not x.coeffs:
            y = ONE
        else:
            g = poly_gcd(x, y)
            if g.degree > 0:
                x, y = x.exact_div(g), y.exact_div(g)
            if y.lc != 1:
                inv = 1 / y.lc
                x, y = x * inv, y.monic()
        self.x, self.y = x, y
        self._hash = None

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(ONE, ZERO)

    @classmethod
    def from_value(cls, v) -> "ProjPoint":
        if v is None or v is INFINITY or (isinstance(v, float) and v == INFINITY):
            return cls.infinity()
        v = FuncElem.coerce(v)
        return cls(v.num, v.den)

    @classmethod
    def from_forms(cls, x, y) -> "ProjPoint":
        """Point [x : y] from arbitrary elements of K (not both zero)."""
        x, y = FuncElem.coerce(x), FuncElem.coerce(y)
        xs, ys = _clear_denominators([x, y])
        return cls(xs, ys)

    @property
    def is_infinity(self) -> bool:
        return not self.y.coeffs

    @property
    def value(self):
        """The affine coordinate in K, or INFINITY."""
        if self.is_infinity:
            return INFINITY
        return FuncElem._make(self.x, self.y)

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.x == other.x and self.y == other.y

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.x, self.y))
        return self._hash

    def __repr__(self):
        return f"ProjPoint({self})"

    def __str__(self):
        return "inf" if self.is_infinity else str(self.value)

    def sort_key(self):
        return (self.is_infinity, len(self.y.coeffs) + len(self.x.coeffs), str(self))

    def height(self) -> Tuple[int, int]:
        """(max degree of x, y; max bit length of scalar coefficients)."""
        deg = max(len(self.x.coeffs), len(self.y.coeffs)) - 1
        return deg, max(self.x.height_bits(), self.y.height_bits())

    def s_coprime_form(self, S):
        from .sunits import s_coprime_form

        return s_coprime_form(self.value, S)


def cross_term(P: ProjPoint, Q: ProjPoint) -> BasePoly:
    """x_P * y_Q - x_Q * y_P."""
    return P.x * Q.y - Q.x * P.y


# ---------------------------------------------------------------------------
# Moebius transformations


class Mobius:
    """z -> (a z + b)/(c z + d) with polynomial entries in canonical scaling."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        entries = [FuncElem.coerce(e) for e in (a, b, c, d)]
        polys = _content_normalize(_clear_denominators(entries))
        self.a, self.b, self.c, self.d = polys
        if not self.det():
            raise PreconditionError("singular matrix is not an automorphism")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @classmethod
    def affine(cls, u, v) -> "Mobius":
        """z -> u z + v."""
        return cls(u, v, 0, 1)

    def det(self) -> BasePoly:
        return self.a * self.d - self.b * self.c

    def entries(self) -> Tuple[BasePoly, BasePoly, BasePoly, BasePoly]:
        return self.a, self.b, self.c, self.d

    def __eq__(self, other):
        return isinstance(other, Mobius) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __matmul__(self, other: "Mobius") -> "Mobius":
        """Composition self o other."""
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return Mobius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def apply(self, P: ProjPoint) -> ProjPoint:
        return ProjPoint(self.a * P.x + self.b * P.y, self.c * P.x + self.d * P.y)

    def is_identity(self) -> bool:
        return self == Mobius.identity()

    def in_pgl2_rs(self, S) -> bool:
        """True iff the class has a representative in GL2(R_S)."""
        det = self.det()
        if S.strip(det).degree > 0:
            return False
        if not S.has_infinity:
            top = max(len(e.coeffs) - 1 for e in self.entries() if e.coeffs)
            if det.degree != 2 * top:
                return False
        return True

    def __repr__(self):
        return f"Mobius({self})"

    def __str__(self):
        num = zpoly_from_polys([self.b, self.a])
        if not self.c.coeffs and self.d == ONE:
            return num.to_str()
        den = zpoly_from_polys([self.d, self.c])
        return f"({num.to_str()})/({den.to_str()})"

    def to_json(self):
        return {"map": str(self), "matrix": [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]}


# ---------------------------------------------------------------------------
# Endomorphisms


class EndoMap:
    """phi = f/g of degree d, coefficients f_0..f_d, g_0..g_d in Q[t]."""

    __slots__ = ("f", "g", "degree", "_res", "_inf")

    def __init__(self, f: Sequence[BasePoly], g: Sequence[BasePoly]):
        # trusted constructor: use make_map for validation
        self.f = tuple(f)
        self.g = tuple(g)
        self.degree = len(self.f) - 1
        self._res = None
        self._inf = None

    def __eq__(self, other):
        return isinstance(other, EndoMap) and self.f == other.f and self.g == other.g

    def __hash__(self):
        return hash((self.f, self.g))

    def f_zpoly(self) -> ZPoly:
        return zpoly_from_polys(self.f)

    def g_zpoly(self) -> ZPoly:
        return zpoly_from_polys(self.g)

    def coefficients(self) -> List[BasePoly]:
        return list(self.f) + list(self.g)

    def has_constant_coefficients(self) -> bool:
        return all(len(c.coeffs) <= 1 for c in self.coefficients())

    def t_degree(self) -> int:
        return max(len(c.coeffs) for c in self.coefficients()) - 1

    def is_polynomial_map(self) -> bool:
        return all(not c.coeffs for c in self.g[1:]) and bool(self.f[-1].coeffs)

    def __repr__(self):
        return f"EndoMap({self})"

    def __str__(self):
        return f"({self.f_zpoly().to_str()})/({self.g_zpoly().to_str()})"

    def __call__(self, P):
        if not isinstance(P, ProjPoint):
            P = ProjPoint.from_value(P)
        return evaluate(self, P)

    def resultant(self) -> BasePoly:
        if self._res is None:
            self._res = _sylvester_resultant(self.f, self.g)
        return self._res

    def at_infinity(self) -> "EndoMap":
        """The same map after t -> 1/u, renormalized; u is printed as t."""
        if self._inf is None:
            coeffs = self.coefficients()
            m = max(len(c.coeffs) for c in coeffs) - 1
            rev = [c.reverse(m) if c.coeffs else ZERO for c in coeffs]
            rev = _content_normalize(rev)
            d = self.degree
            self._inf = EndoMap(rev[: d + 1], rev[d + 1:])
        return self._inf


def _sylvester_resultant(f: Sequence[BasePoly], g: Sequence[BasePoly]) -> BasePoly:
    """Determinant of the 2d x 2d Sylvester matrix of the degree-d forms."""
    d = len(f) - 1
    n = 2 * d
    rows = []
    frev, grev = list(reversed(f)), list(reversed(g))
    for i in range(d):
        rows.append([ZERO] * i + frev + [ZERO] * (d - 1 - i))
    for i in range(d):
        rows.append([ZERO] * i + grev + [ZERO] * (d - 1 - i))
    return bareiss_det(rows)


def bareiss_det(m: List[List[BasePoly]]) -> BasePoly:
    """Fraction-free Gaussian elimination over Q[t]."""
    m = [list(r) for r in m]
    n = len(m)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not m[k][k].coeffs:
            for i in range(k + 1, n):
                if m[i][k].coeffs:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                val = row_i[j] * pivot - mik * row_k[j]
                row_i[j] = val.exact_div(prev) if prev.degree > 0 or prev.lc != 1 else val
            row_i[k] = ZERO
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def make_map(f_coeffs, g_coeffs, S=None) -> EndoMap:
    """Build a map from numerator/denominator coefficients (low -> high) in K.

    Accepts sequences of K-elements or ZPoly objects.  Raises MapError for
    constant maps and for f, g sharing a factor in z.
    """
    fz = f_coeffs if isinstance(f_coeffs, ZPoly) else ZPoly(f_coeffs)
    gz = g_coeffs if isinstance(g_coeffs, ZPoly) else ZPoly(g_coeffs)
    if fz.is_zero() or gz.is_zero():
        raise MapError("constant map")
    d = max(fz.degree, gz.degree)
    if d == 0:
        raise MapError("constant map")
    fc = list(fz.coeffs) + [FUNC_ZERO] * (d - fz.degree)
    gc = list(gz.coeffs) + [FUNC_ZERO] * (d - gz.degree)
    polys = _clear_denominators(fc + gc)
    # scaling order: f_d..f_0, g_d..g_0
    order = list(reversed(polys[: d + 1])) + list(reversed(polys[d + 1:]))
    order = _content_normalize(order)
    f = list(reversed(order[: d + 1]))
    g = list(reversed(order[d + 1:]))
    phi = EndoMap(f, g)
    if not phi.resultant().coeffs:
        raise MapError("not a reduced map: numerator and denominator share a factor")
    return phi


def map_from_polynomial(coeffs) -> EndoMap:
    """The polynomial map sum coeffs[i] z^i."""
    return make_map(coeffs, [1])


def evaluate(phi: EndoMap, P: ProjPoint) -> ProjPoint:
    d = phi.degree
    xp = [ONE]
    yp = [ONE]
    for _ in range(d):
        xp.append(xp[-1] * P.x)
        yp.append(yp[-1] * P.y)
    X, Y = ZERO, ZERO
    for i in range(d + 1):
        m = xp[i] * yp[d - i]
        if phi.f[i].coeffs:
            X = X + phi.f[i] * m
        if phi.g[i].coeffs:
            Y = Y + phi.g[i] * m
    return ProjPoint(X, Y)


def iterate_point(phi: EndoMap, P: ProjPoint, n: int) -> ProjPoint:
    for _ in range(n):
        P = evaluate(phi, P)
    return P


def _linear_power_table(p: ZPoly, q: ZPoly, d: int):
    pp, qp = [ZPoly.constant(1)], [ZPoly.constant(1)]
    for _ in range(d):
        pp.append(pp[-1] * p)
        qp.append(qp[-1] * q)
    return pp, qp


def _homogeneous_substitute(coeffs: Sequence, X: ZPoly, Y: ZPoly, pp=None, qp=None) -> ZPoly:
    """sum c_i X^i Y^(d-i)."""
    d = len(coeffs) - 1
    if pp is None:
        pp, qp = _linear_power_table(X, Y, d)
    acc = ZPoly(())
    for i, c in enumerate(coeffs):
        c = FuncElem.coerce(c)
        if c:
            acc = acc + (pp[i] * qp[d - i]) * c
    return acc


def conjugate(phi: EndoMap, A: Mobius) -> EndoMap:
    """A o phi o A^-1."""
    a, b, c, d = [FuncElem.coerce(e) for e in A.entries()]
    z = ZPoly.z()
    # A^-1 = (d z - b)/(-c z + a)
    X = z * d + ZPoly.constant(-b)
    Y = z * (-c) + ZPoly.constant(a)
    pp, qp = _linear_power_table(X, Y, phi.degree)
    F1 = _homogeneous_substitute(phi.f, X, Y, pp, qp)
    G1 = _homogeneous_substitute(phi.g, X, Y, pp, qp)
    F = F1 * a + G1 * b
    G = F1 * c + G1 * d
    return make_map(F, G)


def compose(phi: EndoMap, psi: EndoMap) -> EndoMap:
    """phi o psi."""
    F, G = psi.f_zpoly(), psi.g_zpoly()
    pp, qp = _linear_power_table(F, G, phi.degree)
    return make_map(_homogeneous_substitute(phi.f, F, G, pp, qp),
                    _homogeneous_substitute(phi.g, F, G, pp, qp))


def iterate_forms(phi: EndoMap, n: int) -> Tuple[ZPoly, ZPoly]:
    """Dehomogenized forms (F_n(z,1), G_n(z,1)) of the n-th iterate, degree d^n."""
    F, G = ZPoly.z(), ZPoly.constant(1)
    for _ in range(n):
        pp, qp = _linear_power_table(F, G, phi.degree)
        F, G = (_homogeneous_substitute(phi.f, F, G, pp, qp),
                _homogeneous_substitute(phi.g, F, G, pp, qp))
    return F, G


def iterate_map(phi: EndoMap, n: int) -> EndoMap:
    if n < 1:
        raise PreconditionError("iterate index must be positive")
    F, G = iterate_forms(phi, n)
    return make_map(F, G)


# ---------------------------------------------------------------------------
# Resultants and reduction


def homogeneous_resultant(phi: EndoMap) -> FuncElem:
    return FuncElem.coerce(phi.resultant())


def resultant_valuation(phi: EndoMap, place: Place) -> int:
    """Valuation at a place of the resultant of the reduced form there."""
    if place.is_infinity:
        return poly_valuation(phi.at_infinity().resultant(), Place.at(0))
    return poly_valuation(phi.resultant(), place)


def resultant_weight(phi: EndoMap) -> int:
    """Sum over all places of deg(place) * valuation of the resultant."""
    return phi.resultant().degree + resultant_valuation(phi, Place.infinity())


@dataclass
class BadPlaces:
    finite: List[Place]
    residual: BasePoly
    infinity_bad: bool
    count_over_closure: int
    resultant: BasePoly

    def all_rational(self) -> List[Place]:
        return self.finite + ([Place.infinity()] if self.infinity_bad else [])

    def to_json(self) -> dict:
        return {
            "finite": [str(p) for p in self.finite],
            "non_rational_factor": str(self.residual) if self.residual.degree > 0 else None,
            "infinity_bad": self.infinity_bad,
            "count_over_closure": self.count_over_closure,
        }


def bad_places_simple(phi: EndoMap, S=None) -> BadPlaces:
    res = phi.resultant()
    rad = squarefree_radical(res)
    roots = sorted(rational_roots(rad)) if rad.degree > 0 else []
    finite = [Place.at(a) for a in roots]
    residual = rad
    for p in finite:
        residual = residual.exact_div(p.generator)
    inf_res = phi.at_infinity().resultant()
    infinity_bad = not inf_res.constant_term()
    count = rad.degree + (1 if infinity_bad else 0)
    return BadPlaces(finite, residual.monic(), infinity_bad, count, res)


def has_simple_good_reduction_outside(phi: EndoMap, S) -> bool:
    bad = bad_places_simple(phi)
    if S.strip(squarefree_radical(bad.resultant)).degree > 0:
        return False
    if bad.infinity_bad and not S.has_infinity:
        return False
    return True


def has_simple_good_reduction_at(phi: EndoMap, place: Place) -> bool:
    return resultant_valuation(phi, place) == 0


@dataclass(frozen=True)
class ReducedMap:
    """A rational map over the constants, numerator/denominator in z."""

    num: BasePoly
    den: BasePoly

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def __call__(self, x):
        """Apply to a residue (Fraction or INFINITY)."""
        d = self.degree
        if x == INFINITY:
            n_top = self.num.coeffs[d] if len(self.num.coeffs) > d else 0
            d_top = self.den.coeffs[d] if len(self.den.coeffs) > d else 0
            return INFINITY if not d_top else Fraction(n_top) / d_top
        dv = self.den(x)
        if not dv:
            return INFINITY
        return Fraction(self.num(x)) / dv

    def __str__(self):
        return f"({self.num.to_str('z')})/({self.den.to_str('z')})"


def reduce_map(phi: EndoMap, place: Place) -> ReducedMap:
    if place.degree != 1:
        raise PreconditionError("explicit reduction unsupported at non-rational place")
    if place.is_infinity:
        m, p = phi.at_infinity(), Place.at(0)
    else:
        m, p = phi, place
    fr = BasePoly([reduce_at(FuncElem.coerce(c), p) for c in m.f])
    gr = BasePoly([reduce_at(FuncElem.coerce(c), p) for c in m.g])
    if not fr.coeffs:
        return ReducedMap(ZERO, ONE)
    if not gr.coeffs:
        return ReducedMap(ONE, ZERO)
    common = poly_gcd(fr, gr)
    if common.degree > 0:
        fr, gr = fr.exact_div(common), gr.exact_div(common)
    return ReducedMap(fr, gr)


# ---------------------------------------------------------------------------
# Conjugation search


@dataclass
class Improvement:
    A: Mobius
    phi: EndoMap
    valuation_before: int
    valuation_after: int

    def to_json(self) -> dict:
        return {
            "A": str(self.A),
            "phi_A": str(self.phi),
            "valuation_before": self.valuation_before,
            "valuation_after": self.valuation_after,
        }


def _candidate_conjugations(phi: EndoMap, place: Place, exp_range: int, trans_range: int):
    pi = place.uniformizer()
    scales = [pi ** e for e in sorted(range(-exp_range, exp_range + 1), key=lambda e: (abs(e), -e))]
    shifts = [FUNC_ZERO]
    for j in sorted(range(-trans_range, trans_range + 1), key=lambda j: (abs(j), -j)):
        shifts.append(pi ** j)
        shifts.append(-(pi ** j))
    d = phi.degree
    fd, fd1 = FuncElem.coerce(phi.f[d]), FuncElem.coerce(phi.f[d - 1]) if d >= 1 else FUNC_ZERO
    if fd and fd1:
        center = fd1 / (fd * d)
        shifts.extend([center, -center])
    seen = set()
    for u in scales:
        for v in shifts:
            if not u or (u == FUNC_ONE and not v):
                continue
            A = Mobius.affine(u, v)
            if A in seen:
                continue
            seen.add(A)
            yield A


def improve_reduction(
    phi: EndoMap,
    place: Place,
    exp_range: Optional[int] = None,
    trans_range: int = 2,
    max_rounds: int = 12,
    objective: str = "local",
) -> Optional[Improvement]:
    """Search conjugations z -> u z + v lowering the resultant valuation at a place.

    u runs over powers of a uniformizer at the place and v over a small set of
    signed uniformizer powers and the centering shift.  Each round takes the
    best candidate; rounds repeat until no candidate improves.  Returns None
    when the first round finds nothing.  This is a bounded local search, not
    a minimal-model algorithm.
    """
    if objective == "local":
        def score(m):
            return resultant_valuation(m, place)
    elif objective == "global":
        score = resultant_weight
    else:
        raise ValueError(f"unknown objective {objective!r}")
    start = score(phi)
    if objective == "local" and start == 0:
        return None
    current, best, W = phi, start, Mobius.identity()
    for _ in range(max_rounds):
        e_range = exp_range if exp_range is not None else max(1, min(resultant_valuation(current, place), 6))
        choice = None
        for A in _candidate_conjugations(current, place, e_range, trans_range):
            psi = conjugate(current, A)
            sc = score(psi)
            if sc < best:
                best, choice = sc, (A, psi)
                if sc == 0:
                    break
        if choice is None:
            break
        W = choice[0] @ W
        current = choice[1]
        if best == 0:
            break
    if current is phi:
        return None
    return Improvement(W, current, start, best)


# ---------------------------------------------------------------------------
# Constant pairs


@dataclass
class ConstantPairs:
    infinite: bool
    pairs: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    closure_count: int = 0
    system: List[Tuple[BasePoly, BasePoly]] = field(default_factory=list)

    def __len__(self):
        return len(self.pairs)

    def to_json(self) -> dict:
        if self.infinite:
            return {"infinite": True}
        return {
            "infinite": False,
            "pairs": [[str(a), str(b)] for a, b in self.pairs],
            "closure_count": self.closure_count,
        }


def constant_pair_system(phi: EndoMap) -> List[Tuple[BasePoly, BasePoly]]:
    """h_j(X, Y) = A_j(X) - B_j(X) Y collecting f(X) - g(X) Y by powers of t."""
    n = phi.t_degree()
    system = []
    for j in range(n + 1):
        A = BasePoly([c.coeffs[j] if j < len(c.coeffs) else 0 for c in phi.f])
        B = BasePoly([c.coeffs[j] if j < len(c.coeffs) else 0 for c in phi.g])
        system.append((A, B))
    return system


def constant_pairs(phi: EndoMap) -> ConstantPairs:
    """Pairs (a, b) of constants with phi(a) = b identically in t."""
    system = constant_pair_system(phi)
    if len(system) == 1:
        return ConstantPairs(True, system=system)
    elim = ZERO
    gb = ZERO
    live = [(A, B) for A, B in system if A.coeffs or B.coeffs]
    for A, B in live:
        gb = poly_gcd(gb, B)
        if not B.coeffs:
            elim = poly_gcd(elim, A)
    with_b = [(A, B) for A, B in live if B.coeffs]
    for i in range(len(with_b)):
        for j in range(i + 1, len(with_b)):
            Ai, Bi = with_b[i]
            Aj, Bj = with_b[j]
            elim = poly_gcd(elim, Ai * Bj - Aj * Bi)
    if not elim.coeffs:
        return ConstantPairs(True, system=system)
    elim = strip_part(elim, gb) if gb.coeffs else elim
    if elim.degree <= 0:
        return ConstantPairs(False, [], 0, system)
    pairs = []
    for x in sorted(rational_roots(elim)):
        y = None
        for A, B in with_b:
            bv = B(x)
            if bv:
                y = Fraction(A(x)) / bv
                break
        if y is None:
            return ConstantPairs(True, system=system)
        if all(not (A(x) - B(x) * y) for A, B in live):
            pairs.append((x, y))
    return ConstantPairs(False, pairs, distinct_root_count(elim), system)


# ---------------------------------------------------------------------------
# Isotriviality


@dataclass
class Isotriviality:
    kind: str  # IsotrivialOverK | LikelyNonIsotrivial | Inconclusive
    witness: Optional[Mobius] = None
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"verdict": self.kind, "evidence": self.evidence}
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def isotriviality_diagnostic(phi: EndoMap, max_rounds: int = 8) -> Isotriviality:
    """Heuristic isotriviality verdict; non-isotriviality is reported as evidence only."""
    if phi.has_constant_coefficients():
        return Isotriviality("IsotrivialOverK", Mobius.identity(), {"reason": "constant coefficients"})
    current, W = phi, Mobius.identity()
    for _ in range(max_rounds):
        step = None
        for place in bad_places_simple(current).all_rational():
            step = improve_reduction(current, place, objective="global", max_rounds=4)
            if step is not None:
                break
        if step is None:
            break
        current, W = step.phi, step.A @ W
        if current.has_constant_coefficients():
            return Isotriviality("IsotrivialOverK", W, {"reason": "descent reached constant coefficients",
                                                         "conjugate": str(current)})
    cp = constant_pairs(phi)
    evidence = {
        "descended_map": str(current),
        "t_degree_after_descent": current.t_degree(),
        "constant_pairs": cp.to_json(),
        "pairs_bound": 2 * phi.degree,
    }
    if not cp.infinite and cp.closure_count <= 2 * phi.degree:
        return Isotriviality("LikelyNonIsotrivial", None, evidence)
    return Isotriviality("Inconclusive", None, evidence)
