"""Exact evaluation of the explicit bounds b, A, C, M, D, N, B.

Everything is integer or Fraction arithmetic.  Values too large to
materialize are returned as structured expressions carrying certified
enclosures for their decimal digit count (or, when even that is too large,
for log10 of the digit count).  Logarithms are enclosed with an integer
fixed-point atanh series whose truncation error is bounded explicitly.

Two readings of A and D exist.  ``variant="statement"`` (the default) uses
the headline formulas, and ``variant="proof"`` uses the alternative
reading with 9^(s+1) inside A and the factor d^2 + 2 inside D.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Tuple

from .errors import CapExceededError, PreconditionError

SIEVE_CAP = 2 * 10**7
MATERIALIZE_CAP_BITS = 10**7
LOG_PRECISION_BITS = 96

STATEMENT = "statement"
PROOF = "proof"

Interval = Tuple[Fraction, Fraction]


def _check(d: int, s: int) -> None:
    if d < 1 or s < 1:
        raise PreconditionError("d and s must be at least 1")


def _check_variant(variant: str) -> None:
    if variant not in (STATEMENT, PROOF):
        raise PreconditionError(f"unknown bound variant {variant!r}")


def bound_b(d: int, s: int) -> int:
    _check(d, s)
    return (9 ** (s - 1) + 1) // 2 * (2 * d + 1) + 2


def bound_A(d: int, s: int, variant: str = STATEMENT) -> int:
    _check(d, s)
    _check_variant(variant)
    if variant == PROOF:
        return (9 ** (s + 1) + 1) // 2 * (2 * d + 1) + 2
    return bound_b(d, s)


def primes_up_to(x: int, cap: int = SIEVE_CAP) -> List[int]:
    if x > cap:
        raise CapExceededError(f"sieve limit {x} exceeds cap {cap}")
    if x < 2:
        return []
    sieve = bytearray([1]) * (x + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(x) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytes(len(range(p * p, x + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def bound_C(d: int, s: int, cap: int = SIEVE_CAP) -> int:
    b = bound_b(d, s)
    q = 3 ** (2 * s - 1)
    out = 1
    for p in primes_up_to(b, cap):
        out *= max(b, p * q)
    return out


def bound_M(d: int, s: int, variant: str = STATEMENT) -> int:
    return bound_A(d, s, variant) + 9 ** (s - 1) - 1


def _d_factor(d: int, s: int, variant: str) -> int:
    _check_variant(variant)
    return (9 ** (s + 1) + 1) // 2 * ((d * d + 2) if variant == PROOF else (2 * d + 2))


def bound_D(d: int, s: int, variant: str = STATEMENT, cap: int = SIEVE_CAP) -> int:
    return _d_factor(d, s, variant) * bound_C(d, s, cap)


def max_prime_power_leq(p: int, C: int) -> int:
    """Largest e with p^e <= C (0 when p > C)."""
    if p < 2:
        raise PreconditionError("p must be prime")
    e, pe = 0, p
    while pe <= C:
        e += 1
        pe *= p
    return e


def _product(xs: List[int]) -> int:
    while len(xs) > 1:
        nxt = [xs[i] * xs[i + 1] for i in range(0, len(xs) - 1, 2)]
        if len(xs) % 2:
            nxt.append(xs[-1])
        xs = nxt
    return xs[0] if xs else 1


def lcm_upto(C: int, cap: int = SIEVE_CAP) -> int:
    """prod p^(m_p(C)) over primes p <= C."""
    factors = []
    for p in primes_up_to(C, cap):
        pe = p
        while pe * p <= C:
            pe *= p
        factors.append(pe)
    return _product(factors)


# ---------------------------------------------------------------------------
# certified logarithms


def _atanh_fixed(num: int, den: int, prec: int) -> Tuple[int, int]:
    """Integers lo <= atanh(num/den) * 2^prec <= hi for 0 <= num/den <= 1/3."""
    if num == 0:
        return 0, 0
    if 3 * num > den:
        raise ValueError("atanh argument out of range")
    num2, den2 = num * num, den * den
    power = (num << prec) // den
    total, k, terms = 0, 1, 0
    while power:
        total += power // k
        power = power * num2 // den2
        k += 2
        terms += 1
    # each term lost < 2 units to flooring; the remaining tail is < 1 unit
    return total, total + 2 * terms + 2


_LN2_CACHE: Dict[int, Tuple[int, int]] = {}


def _ln2_fixed(prec: int) -> Tuple[int, int]:
    if prec not in _LN2_CACHE:
        lo, hi = _atanh_fixed(1, 3, prec)
        _LN2_CACHE[prec] = (2 * lo, 2 * hi)
    return _LN2_CACHE[prec]


def _ln_int_fixed(n: int, prec: int) -> Tuple[int, int]:
    if n < 1:
        raise PreconditionError("logarithm of a non-positive number")
    k = n.bit_length() - 1
    two_k = 1 << k
    l2lo, l2hi = _ln2_fixed(prec)
    mlo, mhi = _atanh_fixed(n - two_k, n + two_k, prec)
    return k * l2lo + 2 * mlo, k * l2hi + 2 * mhi


def ln_interval(x, prec: int = LOG_PRECISION_BITS) -> Interval:
    """Rational enclosure of ln(x) for a positive int or Fraction x."""
    x = Fraction(x)
    if x <= 0:
        raise PreconditionError("logarithm of a non-positive number")
    alo, ahi = _ln_int_fixed(x.numerator, prec)
    blo, bhi = _ln_int_fixed(x.denominator, prec)
    scale = 1 << prec
    return Fraction(alo - bhi, scale), Fraction(ahi - blo, scale)


def _div_pos(a: Interval, b: Interval) -> Interval:
    """a / b for b > 0 (a may have any sign)."""
    lo = min(a[0] / b[0], a[0] / b[1])
    hi = max(a[1] / b[0], a[1] / b[1])
    return lo, hi


def log10_interval(x, prec: int = LOG_PRECISION_BITS) -> Interval:
    return _div_pos(ln_interval(x, prec), ln_interval(10, prec))


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def digits_from_log10(iv: Interval) -> Tuple[int, int]:
    """Digit-count enclosure for a positive integer n with log10 n in iv."""
    return max(1, _floor(iv[0]) + 1), max(1, _floor(iv[1]) + 1)


def decimal_digits(n: int) -> int:
    """Number of decimal digits of a positive integer, without str()."""
    if n < 0:
        n = -n
    if n < 10:
        return 1
    lo, hi = digits_from_log10(log10_interval(n, max(LOG_PRECISION_BITS, n.bit_length().bit_length() + 64)))
    if lo == hi:
        return lo
    # decide between the candidates by one exact comparison
    return lo + 1 if n >= 10 ** lo else lo


@contextmanager
def _int_str_limit_lifted():
    getter = getattr(sys, "get_int_max_str_digits", None)
    if getter is None:
        yield
        return
    old = getter()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def int_to_str(n: int) -> str:
    with _int_str_limit_lifted():
        return str(n)


# ---------------------------------------------------------------------------
# bound expressions


@dataclass
class BoundExpr:
    """Exact integer, or a structured expression with digit enclosures."""

    name: str
    formula: str
    value: Optional[int] = None
    digits: Optional[Tuple[int, int]] = None
    log10_digits: Optional[Interval] = None
    components: Dict[str, object] = field(default_factory=dict)

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    @property
    def kind(self) -> str:
        return "Exact" if self.is_exact else "Structured"

    def digit_estimate(self) -> Interval:
        """Enclosure of log10(digit count); comparable across all bound sizes."""
        if self.log10_digits is not None:
            return self.log10_digits
        lo, hi = self.digits
        return log10_interval(lo)[0], log10_interval(hi)[1]

    def to_json(self, exact: bool = True) -> dict:
        out = {"kind": self.kind, "formula": self.formula}
        if self.digits is not None:
            out["digits"] = self.digits[0] if self.digits[0] == self.digits[1] else list(self.digits)
        if self.log10_digits is not None:
            out["log10_digits"] = [_fmt_frac(self.log10_digits[0], down=True),
                                   _fmt_frac(self.log10_digits[1], down=False)]
        if self.value is not None and exact:
            out["value"] = int_to_str(self.value)
        for k, v in self.components.items():
            out[k] = v.to_json(exact) if isinstance(v, BoundExpr) else v
        return out


def _fmt_frac(x: Fraction, down: bool, places: int = 6) -> str:
    """Decimal string rounded outward."""
    scaled = x * 10**places
    n = _floor(scaled) if down else -_floor(-scaled)
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // 10**places}.{n % 10**places:0{places}d}"


def _exact(name: str, formula: str, value: int) -> BoundExpr:
    dg = decimal_digits(value)
    return BoundExpr(name, formula, value, (dg, dg))


# Chebyshev-function enclosures (Rosser-Schoenfeld): for x >= 41,
# x (1 - 1/ln x) < theta(x) <= psi(x) < 1.03883 x.
_PSI_UPPER = Fraction(103883, 100000)


def _log10_lcm_interval(C: int) -> Interval:
    """Enclosure of log10 lcm(1..C) = psi(C)/ln 10, for C >= 41."""
    lnC = ln_interval(C)
    lower_theta = C * (1 - 1 / lnC[0])
    ln10 = ln_interval(10)
    return lower_theta / ln10[1], _PSI_UPPER * C / ln10[0]


def bound_N(d: int, s: int, cap_bits: int = MATERIALIZE_CAP_BITS, C: Optional[int] = None) -> BoundExpr:
    if C is None:
        C = bound_C(d, s)
    formula = "prod over primes p <= C of p^m_p(C)"
    if C < 2:
        return _exact("N", formula, 1)
    # log2 N = psi(C)/ln 2 < 1.03883 C / ln 2 < 1.5 C
    if C <= SIEVE_CAP and 3 * C <= 2 * cap_bits:
        return _exact("N", formula, lcm_upto(C))
    if C < 41:  # pragma: no cover - small C always materializes
        return _exact("N", formula, lcm_upto(C))
    iv = _log10_lcm_interval(C)
    return BoundExpr("N", formula, None, digits_from_log10(iv), components={"C": int_to_str(C)})


def bound_B(d: int, s: int, variant: str = STATEMENT, cap_bits: int = MATERIALIZE_CAP_BITS,
            N: Optional[BoundExpr] = None, D: Optional[int] = None) -> BoundExpr:
    """d^D * (d^N + 1)."""
    _check(d, s)
    formula = "d^D*(d^N+1)"
    if d == 1:
        return _exact("B", formula, 2)
    if D is None:
        D = bound_D(d, s, variant)
    if N is None:
        N = bound_N(d, s, cap_bits)
    comps = {"d": d, "D": int_to_str(D)}
    l10d = log10_interval(d)
    if N.is_exact:
        n = N.value
        if (D + n) * d.bit_length() <= cap_bits:
            return _exact("B", formula, d ** D * (d ** n + 1))
        # log10 B lies in [(D+N) log10 d, (D+N) log10 d + log10 2]; the digit
        # count has about as many digits as N, so enclose log10 of it.
        total = D + n
        lo = total * l10d[0]
        hi = total * l10d[1] + log10_interval(2)[1]
        return BoundExpr("B", formula, None, None,
                         (log10_interval(_floor(lo) + 1)[0], log10_interval(_floor(hi) + 1)[1]),
                         components=comps)
    # N structured, known through its digit range [n_lo, n_hi]:
    # 10^(n_lo - 1) <= N < 10^n_hi and D < N, so
    # N log10 d < digits(B) <= 2 N log10 d + 2.
    n_lo, n_hi = N.digits
    if D.bit_length() > 3 * (n_lo - 1):
        raise PreconditionError("D is not negligible against N; enclosure does not apply")
    lo = (n_lo - 1) + log10_interval(l10d[0])[0]
    hi = n_hi + log10_interval(2 * l10d[1] + 2)[1]
    return BoundExpr("B", formula, None, None, (lo, hi), components=comps)


def all_bounds(d: int, s: int, variant: str = STATEMENT,
               cap_bits: int = MATERIALIZE_CAP_BITS) -> Dict[str, BoundExpr]:
    _check(d, s)
    _check_variant(variant)
    out: Dict[str, BoundExpr] = {}
    b = bound_b(d, s)
    out["b"] = _exact("b", "(9^(s-1)+1)/2*(2d+1)+2", b)
    A = bound_A(d, s, variant)
    out["A"] = _exact("A", "(9^(s+1)+1)/2*(2d+1)+2" if variant == PROOF else "b(d,s)", A)
    C = bound_C(d, s)
    out["C"] = _exact("C", "prod over primes p <= b of max(b, p*3^(2s-1))", C)
    out["M"] = _exact("M", "A + 9^(s-1) - 1", bound_M(d, s, variant))
    D = _d_factor(d, s, variant) * C
    out["D"] = _exact("D", "(9^(s+1)+1)/2*(d^2+2)*C" if variant == PROOF else "(9^(s+1)+1)/2*(2d+2)*C", D)
    N = bound_N(d, s, cap_bits, C=C)
    out["N"] = N
    out["B"] = bound_B(d, s, variant, cap_bits, N=N, D=D)
    return out


def bounds_report(d: int, s: int, variant: str = STATEMENT, exact: bool = True) -> dict:
    """JSON-ready dict; values of at most 64 digits are always printed in full."""
    res = all_bounds(d, s, variant)
    out = {"d": d, "s": s, "variant": variant}
    for k, v in res.items():
        if v.is_exact and v.digits[0] <= 64:
            out[k] = int_to_str(v.value)
        else:
            out[k] = v.to_json(exact)
    return out
