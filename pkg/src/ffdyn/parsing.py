"""Text input for maps, points, places and elements of K.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary | unary)*      # juxtaposition multiplies
    unary  := ("-" | "+") unary | power
    power  := atom (("^" | "**") ["-"] INT)?
    atom   := INT | "t" | "z" | "(" expr ")"

Values are kept as an unreduced fraction N(z)/D(z) over K so that a map
written with a common factor is rejected rather than silently cancelled.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

from .errors import ParseError, PreconditionError
from .field import BasePoly, FuncElem, Place
from .kpoly import ZPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([A-Za-z_]+))")
_PREFIX = re.compile(r"^\s*phi\s*=\s*")
_INF_WORDS = {"inf", "infinity", "oo"}


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    pos, out = 0, []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", text, pos + stripped)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", m.group(1), start))
        elif m.group(2):
            out.append(("op", m.group(2), start))
        else:
            out.append(("name", m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Frac:
    """N/D with N, D in K[z]; never reduced across z."""

    __slots__ = ("num", "den")

    def __init__(self, num: ZPoly, den: ZPoly):
        if den.degree == 0:
            num, den = num * den.coeffs[0].inverse(), ZPoly.constant(1)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c):
        return cls(ZPoly.constant(c), ZPoly.constant(1))

    def __add__(self, o):
        if self.den == o.den:
            return _Frac(self.num + o.num, self.den)
        return _Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self):
        return _Frac(-self.num, self.den)

    def __mul__(self, o):
        return _Frac(self.num * o.num, self.den * o.den)

    def pow(self, k: int):
        if k < 0:
            if self.num.is_zero():
                raise ZeroDivisionError
            return _Frac(self.den ** (-k), self.num ** (-k))
        return _Frac(self.num ** k, self.den ** k)

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError
        return _Frac(self.den, self.num)


class _Parser:
    def __init__(self, text: str, allow_z: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_z = allow_z

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.text, tok[2])

    def parse(self) -> _Frac:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v + (-w)
        return v

    def _starts_atom(self, tok) -> bool:
        return tok[0] in ("int", "name") or (tok[0] == "op" and tok[1] == "(")

    def term(self):
        v = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                v = v * self.unary()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                w = self.unary()
                try:
                    v = v * w.inverse()
                except ZeroDivisionError:
                    raise self.error("division by zero", tok) from None
            elif self._starts_atom(tok):
                v = v * self.power()
            else:
                return v

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("-", "+"):
            self.take()
            v = self.unary()
            return -v if tok[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            sign = 1
            if self.peek()[1] == "-" and self.peek()[0] == "op":
                self.take()
                sign = -1
            etok = self.take()
            if etok[0] != "int":
                raise self.error("exponent must be an integer", etok)
            try:
                return base.pow(sign * int(etok[1]))
            except ZeroDivisionError:
                raise self.error("division by zero", etok) from None
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return _Frac.const(Fraction(int(val)))
        if kind == "name":
            if val == "t":
                return _Frac.const(FuncElem.t())
            if val == "z":
                if not self.allow_z:
                    raise self.error("variable z not allowed here", tok)
                return _Frac(ZPoly.z(), ZPoly.constant(1))
            raise self.error(f"unknown name {val!r}", tok)
        if kind == "op" and val == "(":
            v = self.expr()
            close = self.take()
            if close[1] != ")":
                raise self.error("expected ')'", close)
            return v
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {val!r}", tok)


def parse_zfraction(text: str) -> Tuple[ZPoly, ZPoly]:
    """Numerator and denominator in K[z], exactly as written (no cancellation)."""
    text = _PREFIX.sub("", text, count=1)
    v = _Parser(text, allow_z=True).parse()
    return v.num, v.den


def parse_element(text: str) -> FuncElem:
    """An element of K such as "(t^2+1)/(t-2)" or "3/4"."""
    v = _Parser(text, allow_z=False).parse()
    return v.num.coeff(0) * v.den.coeff(0).inverse()


def parse_map(text: str, S=None):
    from .dynamics import make_map

    num, den = parse_zfraction(text)
    if num.is_zero():
        from .errors import MapError

        raise MapError("constant map")
    return make_map(num, den, S)


def parse_point(text: str):
    from .dynamics import ProjPoint

    if text.strip().lower() in _INF_WORDS:
        return ProjPoint.infinity()
    return ProjPoint.from_value(parse_element(text))


def parse_place(text: str) -> Place:
    """'inf', a scalar alpha (the place t - alpha), or a monic irreducible polynomial."""
    s = text.strip()
    if s.lower() in _INF_WORDS:
        return Place.infinity()
    x = parse_element(s)
    if not x.is_polynomial():
        raise ParseError(f"place must be a scalar or a polynomial in t: {s!r}", s, 0)
    if x.is_constant():
        return Place.at(x.constant_value())
    poly: BasePoly = x.num
    if poly.lc != 1:
        raise PreconditionError(f"place generator must be monic, got {poly}")
    return Place.finite(poly)


def parse_places(text: str):
    from .sunits import PlaceSet

    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ParseError("empty place list", text, 0)
    return PlaceSet(parse_place(p) for p in parts)
