"""Polynomials in z with coefficients in K = Q(t), and their K-rational roots."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List

from .field import (
    FUNC_ONE,
    FUNC_ZERO,
    ONE,
    BasePoly,
    FuncElem,
    poly_gcd,
    rational_roots,
)
from .errors import PreconditionError


class ZPoly:
    """Immutable polynomial in z over K, coefficients low -> high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [FuncElem.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, cs) -> "ZPoly":
        n = len(cs)
        while n and not cs[n - 1].num.coeffs:
            n -= 1
        p = object.__new__(cls)
        p.coeffs = tuple(cs[:n])
        return p

    @classmethod
    def z(cls) -> "ZPoly":
        return cls._raw((FUNC_ZERO, FUNC_ONE))

    @classmethod
    def constant(cls, c) -> "ZPoly":
        return cls._raw((FuncElem.coerce(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> FuncElem:
        return self.coeffs[-1] if self.coeffs else FUNC_ZERO

    def coeff(self, i: int) -> FuncElem:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else FUNC_ZERO

    def __eq__(self, other):
        return isinstance(other, ZPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ZPoly({self})"

    def __str__(self):
        return self.to_str()

    def to_str(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = str(c)
            if any(op in cs[1:] for op in "+-/") or cs.startswith("-"):
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == FUNC_ONE:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __neg__(self):
        return ZPoly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other: "ZPoly"):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return ZPoly._raw(tuple(out))

    def __sub__(self, other: "ZPoly"):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ZPoly):
            c = FuncElem.coerce(other)
            if not c:
                return ZPoly._raw(())
            return ZPoly._raw(tuple(x * c for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZPoly._raw(())
        out = [FUNC_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return ZPoly._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result, base = ZPoly.constant(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other: "ZPoly"):
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(rem) - 1 < db:
            return ZPoly._raw(()), self
        inv = other.coeffs[-1].inverse()
        quot = [FUNC_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] * inv
            quot[k] = q
            if q:
                for j in range(db + 1):
                    rem[k + j] = rem[k + j] - q * other.coeffs[j]
        return ZPoly._raw(tuple(quot)), ZPoly._raw(tuple(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "ZPoly":
        if not self.coeffs:
            return self
        return self * self.coeffs[-1].inverse()

    def derivative(self) -> "ZPoly":
        return ZPoly._raw(tuple(c * i for i, c in enumerate(self.coeffs) if i))

    def __call__(self, x):
        acc = FUNC_ZERO
        x = FuncElem.coerce(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "ZPoly") -> "ZPoly":
        acc = ZPoly._raw(())
        for c in reversed(self.coeffs):
            acc = acc * other + ZPoly._raw((c,))
        return acc

    def cleared(self) -> List[BasePoly]:
        """Polynomial coefficients of a K-multiple of self with content 1 and monic top term."""
        if not self.coeffs:
            return []
        den = ONE
        for c in self.coeffs:
            den = (den * c.den).exact_div(poly_gcd(den, c.den))
        polys = [c.num * den.exact_div(c.den) for c in self.coeffs]
        g = polys[0]
        for p in polys[1:]:
            g = poly_gcd(g, p)
            if g.degree == 0:
                break
        g = g.monic()
        if g.degree > 0:
            polys = [p.exact_div(g) for p in polys]
        lc = polys[-1].lc
        if lc != 1:
            polys = [p * (1 / lc) for p in polys]
        return polys


def zpoly_gcd(a: ZPoly, b: ZPoly) -> ZPoly:
    while b.coeffs:
        a, b = b, a % b
    return a.monic()


def zpoly_from_polys(polys: Iterable[BasePoly]) -> ZPoly:
    return ZPoly._raw(tuple(FuncElem._make(p, ONE) for p in polys))


# ---------------------------------------------------------------------------
# K-rational roots


def _specialize(polys: List[BasePoly], t0) -> BasePoly:
    return BasePoly([p(t0) for p in polys])


def _sample_points():
    yield Fraction(0)
    k = 1
    while True:
        yield Fraction(k)
        yield Fraction(-k)
        k += 1


def _is_squarefree_specialization(polys, t0) -> bool:
    if not polys[-1](t0):
        return False
    s = _specialize(polys, t0)
    return poly_gcd(s, s.derivative()).degree == 0


def _lift_root(shifted: List[BasePoly], z0: Fraction, order: int) -> List[Fraction]:
    """Power series z(s) with F(t0 + s, z(s)) = 0 mod s^(order+1) and z(0) = z0.

    ``shifted`` holds the coefficients c_i(t0 + s).  The root z0 must be simple.
    """
    n = len(shifted) - 1
    # derivative in z at (s=0, z0)
    dz = Fraction(0)
    for i in range(n, 0, -1):
        dz = dz * z0 + i * shifted[i].constant_term()
    if not dz:
        raise ArithmeticError("lifting a multiple root")
    series = [z0]
    cs = [list(p.coeffs[: order + 1]) + [Fraction(0)] * (order + 1 - min(len(p.coeffs), order + 1))
          for p in shifted]
    for k in range(1, order + 1):
        # evaluate F(s, series) mod s^(k+1) by Horner on truncated series
        zs = series + [Fraction(0)] * (k + 1 - len(series))
        acc = [Fraction(0)] * (k + 1)
        for i in range(n, -1, -1):
            new = [Fraction(0)] * (k + 1)
            for a_idx, av in enumerate(acc):
                if not av:
                    continue
                for b_idx in range(0, k + 1 - a_idx):
                    bv = zs[b_idx]
                    if bv:
                        new[a_idx + b_idx] += av * bv
            ci = cs[i]
            for j in range(k + 1):
                new[j] += ci[j]
            acc = new
        series.append(-acc[k] / dz)
    return series


def k_rational_roots(F: ZPoly) -> List[FuncElem]:
    """All roots of F lying in K, sorted by their string form.

    Method: clear denominators, pass to the squarefree part if needed,
    specialize t at a point where the specialization is squarefree of full
    degree, lift each rational root of the specialization to a power series
    in (t - t0), truncate at a degree bound and verify by substitution.  A
    root a/b in lowest terms has b | c_n and a | c_0, so w = c_n * root is
    a polynomial of degree <= deg c_n + deg c_0 and the truncation is exact.
    """
    if F.is_zero():
        raise PreconditionError("roots of the zero polynomial")
    polys = F.cleared()
    if len(polys) <= 1:
        return []
    if len(polys) == 2:
        return [FuncElem(-polys[0], polys[1])]
    t0 = _choose_point(polys)
    if t0 is None:
        G = ZPoly._raw(tuple(FuncElem._make(p, ONE) for p in polys))
        G = G // zpoly_gcd(G, G.derivative())
        polys = G.cleared()
        if len(polys) == 2:
            return [FuncElem(-polys[0], polys[1])]
        t0 = _choose_point(polys)
        if t0 is None:
            raise ArithmeticError("no squarefree specialization found")
    cn, c0 = polys[-1], polys[0]
    if not c0:
        # z = 0 is a root; deflate
        rest = k_rational_roots(ZPoly._raw(tuple(FuncElem._make(p, ONE) for p in polys[1:])))
        return _sorted_unique([FuncElem(0)] + rest)
    order = cn.degree + c0.degree
    shifted = [p.shift(t0) for p in polys]
    cn_shift = shifted[-1].coeffs
    Fz = ZPoly._raw(tuple(FuncElem._make(p, ONE) for p in polys))
    found = []
    for z0 in sorted(rational_roots(_specialize(polys, t0))):
        series = _lift_root(shifted, z0, order)
        # w(s) = c_n(t0 + s) * z(s) truncated at degree `order`
        w = [Fraction(0)] * (order + 1)
        for i, a in enumerate(cn_shift):
            if i > order:
                break
            for j in range(order + 1 - i):
                w[i + j] += a * series[j]
        w_poly = BasePoly(w).shift(-t0)
        cand = FuncElem(w_poly, cn)
        if not Fz(cand):
            found.append(cand)
    return _sorted_unique(found)


def _choose_point(polys, tries: int = 24):
    for i, t0 in enumerate(_sample_points()):
        if i >= tries:
            return None
        if _is_squarefree_specialization(polys, t0):
            return t0


def _sorted_unique(xs):
    seen = {}
    for x in xs:
        seen.setdefault(x, x)
    return sorted(seen.values(), key=lambda e: (str(e)))
