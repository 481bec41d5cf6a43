"""Exact arithmetic in Q[t] and Q(t), places of Q(t) and their valuations.

The constant field is the field of rationals, standing in for an
algebraically closed field of characteristic zero.  A finite place of
degree e is counted as e places over the algebraic closure; explicit
residues are only computed at degree-1 places.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import PreconditionError

NEG_INF = -math.inf
INFINITY = math.inf

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(c) -> Fraction:
    return c if type(c) is Fraction else Fraction(c)


class BasePoly:
    """Immutable polynomial in t over the rationals, coefficients low -> high."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, cs) -> "BasePoly":
        # cs: tuple of Fractions, possibly with trailing zeros
        n = len(cs)
        while n and not cs[n - 1]:
            n -= 1
        p = object.__new__(cls)
        p.coeffs = tuple(cs[:n]) if n != len(cs) else tuple(cs)
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar) -> "BasePoly":
        return cls._raw((_frac(c),))

    @classmethod
    def t(cls) -> "BasePoly":
        return T

    @classmethod
    def linear_root(cls, alpha: Scalar) -> "BasePoly":
        """The monic polynomial t - alpha."""
        return cls._raw((-_frac(alpha), _ONE))

    @classmethod
    def monomial(cls, n: int, c: Scalar = 1) -> "BasePoly":
        return cls._raw((_ZERO,) * n + (_frac(c),))

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self):
        """Degree, or -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else _ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, BasePoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ((_frac(other),) if other else ())
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("BasePoly", self.coeffs))
        return self._hash

    def __repr__(self):
        return f"BasePoly({self})"

    def __str__(self):
        return self.to_str("t")

    def to_str(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return BasePoly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if not isinstance(other, BasePoly):
            if isinstance(other, (int, Fraction)):
                other = BasePoly.constant(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return BasePoly._raw(tuple(out))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, BasePoly):
            if isinstance(other, (int, Fraction)):
                other = BasePoly.constant(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = list(a) + [_ZERO] * (n - len(a))
        for i, c in enumerate(b):
            out[i] -= c
        return BasePoly._raw(tuple(out))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BasePoly):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return ZERO
                o = _frac(other)
                return BasePoly._raw(tuple(c * o for c in self.coeffs))
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return BasePoly._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other: "BasePoly"):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(rem) - 1 < db:
            return ZERO, self
        lcb = other.coeffs[-1]
        bc = other.coeffs
        quot = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] / lcb
            quot[k] = q
            if q:
                for j in range(db + 1):
                    rem[k + j] -= q * bc[j]
        return BasePoly._raw(tuple(quot)), BasePoly._raw(tuple(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "BasePoly") -> "BasePoly":
        q, r = divmod(self, other)
        if r.coeffs:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "BasePoly") -> bool:
        """True iff self divides other."""
        return not (other % self).coeffs

    def monic(self) -> "BasePoly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = 1 / self.coeffs[-1]
        return BasePoly._raw(tuple(c * inv for c in self.coeffs))

    def derivative(self) -> "BasePoly":
        return BasePoly._raw(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, a: Scalar) -> "BasePoly":
        """p(t + a)."""
        a = _frac(a)
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                cs[j] += a * cs[j + 1]
        return BasePoly._raw(tuple(cs))

    def reverse(self, n: Optional[int] = None) -> "BasePoly":
        """t^n * p(1/t); n defaults to the degree."""
        if not self.coeffs:
            return ZERO
        d = len(self.coeffs) - 1
        if n is None:
            n = d
        if n < d:
            raise ValueError("reversal length below degree")
        return BasePoly._raw((_ZERO,) * (n - d) + tuple(reversed(self.coeffs)))

    def multiplicity(self, g: "BasePoly") -> int:
        """Largest e with g^e dividing self; self must be nonzero."""
        if not self.coeffs:
            raise PreconditionError("valuation of zero undefined")
        if g.is_constant():
            raise ValueError("multiplicity of a constant")
        e, p = 0, self
        while True:
            q, r = divmod(p, g)
            if r.coeffs:
                return e
            e, p = e + 1, q

    def integer_coeffs(self) -> list:
        """Primitive integer coefficient list proportional to self (positive lc)."""
        if not self.coeffs:
            return []
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return [v // g for v in ints]

    def height_bits(self) -> int:
        bits = 0
        for c in self.coeffs:
            bits = max(bits, c.numerator.bit_length(), c.denominator.bit_length())
        return bits


ZERO = BasePoly._raw(())
ONE = BasePoly._raw((_ONE,))
T = BasePoly._raw((_ZERO, _ONE))


def poly_gcd(a: BasePoly, b: BasePoly) -> BasePoly:
    """Monic gcd; gcd(0, 0) = 0."""
    while b.coeffs:
        a, b = b, a % b
    return a.monic()


def primary_part(c: BasePoly, r: BasePoly) -> BasePoly:
    """Monic largest divisor of c whose irreducible factors all divide r."""
    part = ONE
    g = poly_gcd(c, r)
    while g.degree > 0:
        c = c.exact_div(g)
        part = part * g
        g = poly_gcd(c, g)
    return part.monic()


def strip_part(c: BasePoly, r: BasePoly) -> BasePoly:
    """c with every irreducible factor shared with r removed."""
    if r.is_constant():
        return c
    return c.exact_div(primary_part(c, r))


# ---------------------------------------------------------------------------
# Rational functions


class FuncElem:
    """An element of K = Q(t) in canonical form: coprime, monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=ZERO, den=ONE):
        if not isinstance(num, BasePoly):
            num = BasePoly.constant(num)
        if not isinstance(den, BasePoly):
            den = BasePoly.constant(den)
        if not den.coeffs:
            raise ZeroDivisionError("zero denominator")
        if not num.coeffs:
            den = ONE
        elif den.coeffs != ONE.coeffs:
            if len(den.coeffs) > 1:
                g = poly_gcd(num, den)
                if len(g.coeffs) > 1:
                    num, den = num.exact_div(g), den.exact_div(g)
            lc = den.coeffs[-1]
            if lc != 1:
                num, den = num * (1 / lc), den.monic()
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _make(cls, num: BasePoly, den: BasePoly) -> "FuncElem":
        x = object.__new__(cls)
        x.num, x.den, x._hash = num, den, None
        return x

    @classmethod
    def coerce(cls, x) -> "FuncElem":
        if isinstance(x, FuncElem):
            return x
        if isinstance(x, BasePoly):
            return cls._make(x, ONE)
        if isinstance(x, (int, Fraction)):
            return cls._make(BasePoly.constant(x), ONE)
        raise TypeError(f"cannot coerce {type(x).__name__} to FuncElem")

    @classmethod
    def t(cls) -> "FuncElem":
        return cls._make(T, ONE)

    def is_zero(self) -> bool:
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def is_constant(self) -> bool:
        return len(self.num.coeffs) <= 1 and len(self.den.coeffs) == 1

    def is_polynomial(self) -> bool:
        return len(self.den.coeffs) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_term()

    def __eq__(self, other):
        if isinstance(other, FuncElem):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, BasePoly)):
            return self == FuncElem.coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"FuncElem({self})"

    def __str__(self):
        return self.to_str("t")

    def to_str(self, var: str = "t") -> str:
        if len(self.den.coeffs) == 1:
            return self.num.to_str(var)
        n = self.num.to_str(var)
        if "/" in n or sum(1 for c in self.num.coeffs if c) > 1:
            n = f"({n})"
        d = self.den.to_str(var)
        if sum(1 for c in self.den.coeffs if c) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __neg__(self):
        return FuncElem._make(-self.num, self.den)

    def __add__(self, other):
        if not isinstance(other, FuncElem):
            try:
                other = FuncElem.coerce(other)
            except TypeError:
                return NotImplemented
        if len(self.den.coeffs) == 1 and len(other.den.coeffs) == 1:
            return FuncElem._make(self.num + other.num, ONE)
        if self.den == other.den:
            return FuncElem(self.num + other.num, self.den)
        return FuncElem(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, FuncElem):
            try:
                other = FuncElem.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FuncElem):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return FUNC_ZERO
                return FuncElem._make(self.num * other, self.den)
            try:
                other = FuncElem.coerce(other)
            except TypeError:
                return NotImplemented
        if len(self.den.coeffs) == 1 and len(other.den.coeffs) == 1:
            return FuncElem._make(self.num * other.num, ONE)
        return FuncElem(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FuncElem":
        if not self.num.coeffs:
            raise ZeroDivisionError("inverse of zero")
        return FuncElem(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, FuncElem):
            try:
                other = FuncElem.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.num.coeffs:
            raise ZeroDivisionError("division by zero in K")
        return FuncElem(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return FuncElem.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FuncElem._make(self.num ** n, self.den ** n)

    def __call__(self, alpha: Scalar):
        """Value at t = alpha, or INFINITY at a pole."""
        d = self.den(alpha)
        if not d:
            return INFINITY
        return _frac(self.num(alpha)) / d

    def height_bits(self) -> int:
        return max(self.num.height_bits(), self.den.height_bits())

    def invert_variable(self) -> "FuncElem":
        """Substitute t -> 1/t (the coordinate change used at infinity)."""
        n, d = self.num, self.den
        if not n.coeffs:
            return self
        dn, dd = len(n.coeffs) - 1, len(d.coeffs) - 1
        rn, rd = n.reverse(), d.reverse()
        if dd >= dn:
            return FuncElem(rn * BasePoly.monomial(dd - dn), rd)
        return FuncElem(rn, rd * BasePoly.monomial(dn - dd))


FUNC_ZERO = FuncElem._make(ZERO, ONE)
FUNC_ONE = FuncElem._make(ONE, ONE)


# ---------------------------------------------------------------------------
# Places


class Place:
    """A place of Q(t): a monic irreducible generator, or infinity (generator None)."""

    __slots__ = ("generator",)

    def __init__(self, generator: Optional[BasePoly] = None):
        object.__setattr__(self, "generator", generator)

    def __setattr__(self, name, value):
        raise AttributeError("Place is immutable")

    @classmethod
    def infinity(cls) -> "Place":
        return INFINITE_PLACE

    @classmethod
    def at(cls, alpha: Scalar) -> "Place":
        """The place t = alpha."""
        return cls(BasePoly.linear_root(alpha))

    @classmethod
    def finite(cls, generator: BasePoly) -> "Place":
        """A finite place from a monic irreducible polynomial (checked)."""
        if generator.degree < 1 or generator.lc != 1:
            raise PreconditionError(f"place generator must be monic nonconstant, got {generator}")
        if not is_irreducible(generator):
            raise PreconditionError(f"place generator {generator} is not irreducible")
        return cls(generator)

    @property
    def is_infinity(self) -> bool:
        return self.generator is None

    @property
    def degree(self) -> int:
        return 1 if self.generator is None else self.generator.degree

    @property
    def root(self) -> Fraction:
        """alpha for the place t = alpha."""
        if self.generator is None or self.generator.degree != 1:
            raise PreconditionError("place is not a finite degree-1 place")
        return -self.generator.coeffs[0]

    def sort_key(self):
        if self.generator is None:
            return (1, 0, ())
        return (0, self.degree, self.generator.coeffs)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __eq__(self, other):
        return isinstance(other, Place) and self.generator == other.generator

    def __hash__(self):
        return hash(("Place", self.generator))

    def __repr__(self):
        return f"Place({self})"

    def __str__(self):
        return "inf" if self.generator is None else str(self.generator)

    def uniformizer(self) -> FuncElem:
        if self.generator is None:
            return FuncElem._make(ONE, T)
        return FuncElem._make(self.generator, ONE)


INFINITE_PLACE = Place(None)


def poly_valuation(p: BasePoly, place: Place):
    """Valuation of a polynomial (INFINITY for zero)."""
    if not p.coeffs:
        return INFINITY
    if place.generator is None:
        return -(len(p.coeffs) - 1)
    if place.generator.degree == 1:
        # repeated synthetic division by t - alpha
        alpha = -place.generator.coeffs[0]
        if not alpha:
            e = 0
            while not p.coeffs[e]:
                e += 1
            return e
        cs = list(p.coeffs)
        e = 0
        while len(cs) > 1:
            acc = _ZERO
            quot = [_ZERO] * (len(cs) - 1)
            for i in range(len(cs) - 1, 0, -1):
                acc = acc * alpha + cs[i]
                quot[i - 1] = acc
            if acc * alpha + cs[0]:
                break
            cs = quot
            e += 1
        return e
    return p.multiplicity(place.generator)


def valuation(x, place: Place) -> int:
    """Normalized valuation of a nonzero element of K at a place."""
    x = FuncElem.coerce(x)
    if not x.num.coeffs:
        raise PreconditionError("valuation of zero undefined")
    if place.generator is None:
        return (len(x.den.coeffs) - 1) - (len(x.num.coeffs) - 1)
    return poly_valuation(x.num, place) - poly_valuation(x.den, place)


def squarefree_radical(f: BasePoly) -> BasePoly:
    if not f.coeffs:
        raise PreconditionError("radical of zero undefined")
    if len(f.coeffs) == 1:
        return ONE
    return f.exact_div(poly_gcd(f, f.derivative())).monic()


def distinct_root_count(f: BasePoly) -> int:
    return squarefree_radical(f).degree


# -- rational roots via p-adic lifting ------------------------------------


def _small_primes():
    p = 3
    while True:
        if all(p % q for q in range(3, int(p ** 0.5) + 1, 2)):
            yield p
        p += 2


def _eval_mod(a, x, m):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % m
    return acc


def _trim_mod(a, ell):
    a = [c % ell for c in a]
    while a and not a[-1]:
        a.pop()
    return a


def _gcd_mod(a, b, ell):
    a, b = _trim_mod(a, ell), _trim_mod(b, ell)
    while b:
        inv = pow(b[-1], -1, ell)
        while len(a) >= len(b):
            q = a[-1] * inv % ell
            shift = len(a) - len(b)
            for j, c in enumerate(b):
                a[shift + j] = (a[shift + j] - q * c) % ell
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    return a


def _ratrecon(r, m, bound):
    r0, r1 = m, r % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _padic_roots(a):
    """Rational roots of a squarefree primitive integer polynomial with a[0] != 0."""
    n = len(a) - 1
    da = [i * c for i, c in enumerate(a) if i]
    for ell in _small_primes():
        if ell <= n or a[-1] % ell == 0:
            continue
        g = _gcd_mod(a, da, ell)
        if len(g) == 1:
            break
    bound_h = max(abs(a[0]), abs(a[-1]))
    target = 2 * bound_h * bound_h
    roots = []
    for r in range(ell):
        if _eval_mod(a, r, ell):
            continue
        m = ell
        while m <= target:
            m = m * m
            fr = _eval_mod(a, r, m)
            dfr = _eval_mod(da, r, m)
            r = (r - fr * pow(dfr, -1, m)) % m
        cand = _ratrecon(r, m, math.isqrt(m // 2))
        if cand is None:
            continue
        p, q = cand.numerator, cand.denominator
        # homogeneous evaluation: sum a_i p^i q^(n-i)
        acc = 0
        qp = 1
        for c in reversed(a):
            acc = acc * p + c * qp
            qp *= q
        if acc == 0:
            roots.append(cand)
    return roots


def rational_roots(f: BasePoly) -> set:
    """All roots of f in the rationals."""
    if not f.coeffs:
        raise PreconditionError("roots of the zero polynomial")
    roots = set()
    a = f.integer_coeffs()
    k = 0
    while a[k] == 0:
        k += 1
    if k:
        roots.add(_ZERO)
        a = a[k:]
    if len(a) <= 1:
        return roots
    if len(a) == 2:
        roots.add(Fraction(-a[0], a[1]))
        return roots
    sq = squarefree_radical(BasePoly(a)).integer_coeffs()
    if len(sq) == 2:
        roots.add(Fraction(-sq[0], sq[1]))
        return roots
    roots.update(_padic_roots(sq))
    return roots


def is_irreducible(g: BasePoly) -> bool:
    """Irreducibility over Q.  Degrees <= 3 reduce to a rational-root test."""
    d = g.degree
    if d < 1:
        return False
    if d == 1:
        return True
    if rational_roots(g):
        return False
    if d <= 3:
        return True
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** i for i, c in enumerate(g.coeffs))
    return sympy.Poly(expr, t, domain="QQ").is_irreducible


def linear_factor_places(f: BasePoly) -> list:
    """Degree-1 places dividing f, sorted."""
    return sorted(Place.at(a) for a in rational_roots(f))


def reduce_at(x, place: Place):
    """Residue of x at a degree-1 place, INFINITY when x has a pole there."""
    if place.degree != 1:
        raise PreconditionError("explicit reduction unsupported at non-rational place")
    if x is INFINITY or (isinstance(x, float) and x == INFINITY):
        return INFINITY
    x = FuncElem.coerce(x)
    if not x.num.coeffs:
        return _ZERO
    if place.generator is None:
        dn, dd = len(x.num.coeffs), len(x.den.coeffs)
        if dn > dd:
            return INFINITY
        if dn < dd:
            return _ZERO
        return x.num.lc / x.den.lc
    alpha = place.root
    d = x.den(alpha)
    if not d:
        return INFINITY
    return _frac(x.num(alpha)) / d


def support_polynomial(x) -> BasePoly:
    """Product of the finite places where a nonzero x has nonzero valuation."""
    x = FuncElem.coerce(x)
    return squarefree_radical(x.num * x.den)
