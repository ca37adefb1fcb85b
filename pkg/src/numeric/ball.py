"""Shifted Waring Lab: Exact Rationals and Dyadic Ball Arithmetic.

A Ball is a midpoint–radius enclosure ``[mid - rad, mid + rad]`` whose midpoint and radius
are dyadic rationals ``mantissa * 2**exponent`` held as Python integers. Every operation
rounds the midpoint to the working precision and adds the rounding error to the radius, so
the enclosed true value is never lost. Strict inequalities are decided three-valued by
``cmp_lt``: True and False are certain, Unknown means the enclosures overlap.

Rationals are ``fractions.Fraction`` (canonical: reduced, positive denominator).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Literal

import gmpy2

from src.core.exceptions import BallDomainError, BallParseError

Rat = Fraction

DEFAULT_PREC = 128
MIN_PREC = 2

# Radii carry few significant bits; they are only ever rounded up.
_RAD_BITS = 30

_DECIMAL_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")
_FRACTION_RE = re.compile(r"^[+-]?\d+\s*/\s*\d+$")


class TriBool(str, Enum):
    """Outcome of a certified comparison."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> TriBool:
        return cls.TRUE if value else cls.FALSE

    def __and__(self, other: object) -> TriBool:
        if not isinstance(other, TriBool):
            return NotImplemented
        if TriBool.FALSE in (self, other):
            return TriBool.FALSE
        if TriBool.UNKNOWN in (self, other):
            return TriBool.UNKNOWN
        return TriBool.TRUE


# ──────────────────────────────────────────────────────────────
# Dyadic helpers
# ──────────────────────────────────────────────────────────────


def _normalize(man: int, exp: int) -> tuple[int, int]:
    """Strip trailing zero bits so equal dyadics share one representation."""
    if man == 0:
        return 0, 0
    tz = (man & -man).bit_length() - 1
    return man >> tz, exp + tz


def _dy_add(m1: int, e1: int, m2: int, e2: int) -> tuple[int, int]:
    if m1 == 0:
        return m2, e2
    if m2 == 0:
        return m1, e1
    e = min(e1, e2)
    return (m1 << (e1 - e)) + (m2 << (e2 - e)), e


def _dy_cmp(m1: int, e1: int, m2: int, e2: int) -> int:
    diff, _ = _dy_add(m1, e1, -m2, e2)
    return (diff > 0) - (diff < 0)


def _dy_fraction(man: int, exp: int) -> Fraction:
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _round_mid(man: int, exp: int, prec: int) -> tuple[int, int, int, int]:
    """Truncate ``man`` to ``prec`` bits toward -inf.

    Returns the rounded dyadic and an upper bound (as a dyadic) on the discarded part.
    """
    bits = abs(man).bit_length()
    if bits <= prec:
        return man, exp, 0, 0
    shift = bits - prec
    return man >> shift, exp + shift, 1, exp + shift


def _round_up_rad(man: int, exp: int) -> tuple[int, int]:
    if man == 0:
        return 0, 0
    bits = man.bit_length()
    if bits <= _RAD_BITS:
        return man, exp
    shift = bits - _RAD_BITS
    q = man >> shift
    if (q << shift) != man:
        q += 1
    return q, exp + shift


def _iroot(n: int, k: int) -> tuple[int, bool]:
    root, exact = gmpy2.iroot(gmpy2.mpz(n), k)
    return int(root), bool(exact)


def _floor_scaled(q: Fraction, exp: int) -> tuple[int, bool]:
    """floor(q / 2**exp) and whether the division was exact."""
    num, den = q.numerator, q.denominator
    if exp <= 0:
        num <<= -exp
    else:
        den <<= exp
    quo, rem = divmod(num, den)
    return quo, rem == 0


# ──────────────────────────────────────────────────────────────
# Ball
# ──────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class Ball:
    """Enclosure of a real number: ``|x - mid| <= rad``."""

    mid_man: int
    mid_exp: int = 0
    rad_man: int = 0
    rad_exp: int = 0
    prec: int = DEFAULT_PREC

    def __post_init__(self) -> None:
        if self.rad_man < 0:
            raise ValueError("Ball radius must be non-negative")
        if self.prec < MIN_PREC:
            raise ValueError(f"Ball precision must be >= {MIN_PREC}")

    # --- construction ---

    @classmethod
    def make(
        cls, mid_man: int, mid_exp: int, rad_man: int, rad_exp: int, prec: int
    ) -> Ball:
        m, e = _normalize(mid_man, mid_exp)
        rm, re_ = _normalize(*_round_up_rad(rad_man, rad_exp))
        return cls(m, e, rm, re_, prec)

    @classmethod
    def from_int(cls, value: int, prec: int = DEFAULT_PREC) -> Ball:
        m, e = _normalize(value, 0)
        return cls(m, e, 0, 0, prec)

    @classmethod
    def hull(cls, lo: Fraction, hi: Fraction, prec: int = DEFAULT_PREC) -> Ball:
        """Smallest ball covering ``[lo, hi]`` for dyadic endpoints; wider otherwise."""
        if lo > hi:
            raise ValueError("hull requires lo <= hi")
        a = ball_from_rat(lo, prec)
        b = ball_from_rat(hi, prec)
        lm, le = a._lower()
        um, ue = b._upper()
        mid_m, mid_e = _dy_add(lm, le, um, ue)
        rad_m, rad_e = _dy_add(um, ue, -lm, le)
        return cls.make(mid_m, mid_e - 1, rad_m, rad_e - 1, prec)

    # --- views ---

    @property
    def mid(self) -> Fraction:
        return _dy_fraction(self.mid_man, self.mid_exp)

    @property
    def rad(self) -> Fraction:
        return _dy_fraction(self.rad_man, self.rad_exp)

    @property
    def is_exact(self) -> bool:
        return self.rad_man == 0

    def _lower(self) -> tuple[int, int]:
        return _dy_add(self.mid_man, self.mid_exp, -self.rad_man, self.rad_exp)

    def _upper(self) -> tuple[int, int]:
        return _dy_add(self.mid_man, self.mid_exp, self.rad_man, self.rad_exp)

    def lower(self) -> Fraction:
        return _dy_fraction(*self._lower())

    def upper(self) -> Fraction:
        return _dy_fraction(*self._upper())

    def contains(self, value: Fraction | int) -> bool:
        v = Fraction(value)
        return self.lower() <= v <= self.upper()

    def with_prec(self, prec: int) -> Ball:
        return Ball(self.mid_man, self.mid_exp, self.rad_man, self.rad_exp, prec)

    def abs(self) -> Ball:
        """Enclosure of |x|; ``||x| - |mid|| <= |x - mid|``."""
        if self.mid_man >= 0:
            return self
        return Ball(-self.mid_man, self.mid_exp, self.rad_man, self.rad_exp, self.prec)

    def __float__(self) -> float:
        return float(self.mid)

    # --- operators ---

    def __add__(self, other: Ball) -> Ball:
        return arith("add", self, other)

    def __sub__(self, other: Ball) -> Ball:
        return arith("sub", self, other)

    def __mul__(self, other: Ball) -> Ball:
        return arith("mul", self, other)

    def __neg__(self) -> Ball:
        return Ball(-self.mid_man, self.mid_exp, self.rad_man, self.rad_exp, self.prec)

    def __pow__(self, j: int) -> Ball:
        return pow_int(self, j)

    # --- serialization ---

    def to_dict(self) -> dict[str, Any]:
        return {
            "mid_mant": str(self.mid_man),
            "mid_exp": self.mid_exp,
            "rad_mant": str(self.rad_man),
            "rad_exp": self.rad_exp,
            "prec": self.prec,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Ball:
        return cls.make(
            int(data["mid_mant"]),
            int(data["mid_exp"]),
            int(data["rad_mant"]),
            int(data["rad_exp"]),
            int(data["prec"]),
        )

    def __repr__(self) -> str:
        return f"Ball({float(self.mid)!r} ± {float(self.rad):.3g}, prec={self.prec})"


# ──────────────────────────────────────────────────────────────
# Construction from text and rationals
# ──────────────────────────────────────────────────────────────


def parse_rational(text: str) -> Fraction:
    """Parse a finite decimal (``"0.3"``, ``"1e-3"``) or a fraction (``"3/10"``) exactly."""
    stripped = text.strip()
    if _DECIMAL_RE.match(stripped) or _FRACTION_RE.match(stripped):
        try:
            return Fraction(stripped.replace(" ", ""))
        except (ValueError, ZeroDivisionError) as exc:
            raise BallParseError(text) from exc
    raise BallParseError(text)


def ball_from_rat(value: Fraction | int, prec: int = DEFAULT_PREC) -> Ball:
    """Enclose a rational; exact when it is dyadic with at most ``prec`` mantissa bits."""
    if prec < MIN_PREC:
        raise ValueError(f"prec must be >= {MIN_PREC}")
    q = Fraction(value)
    if q == 0:
        return Ball(0, 0, 0, 0, prec)
    den = q.denominator
    if den & (den - 1) == 0:
        exp = -(den.bit_length() - 1)
        man, e, err_m, err_e = _round_mid(q.numerator, exp, prec)
        return Ball.make(man, e, err_m, err_e, prec)
    est = abs(q.numerator).bit_length() - den.bit_length()
    exp = est - prec + 1
    man, _ = _floor_scaled(q, exp)
    # floor error is below one unit in the last place
    return Ball.make(man, exp, 1, exp, prec)


def ball_from_decimal(text: str, prec: int = DEFAULT_PREC) -> Ball:
    """Parse a finite decimal string into a ball containing its exact value."""
    stripped = text.strip()
    if not _DECIMAL_RE.match(stripped):
        raise BallParseError(text)
    return ball_from_rat(Fraction(stripped), prec)


# ──────────────────────────────────────────────────────────────
# Arithmetic
# ──────────────────────────────────────────────────────────────


def arith(op: Literal["add", "sub", "mul", "neg"], a: Ball, b: Ball | None = None) -> Ball:
    """Ball arithmetic; the result contains ``x op y`` for every ``x in a, y in b``."""
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"{op} needs two operands")
    prec = max(a.prec, b.prec)
    if op == "sub":
        b = -b
        op = "add"
    if op == "add":
        m, e = _dy_add(a.mid_man, a.mid_exp, b.mid_man, b.mid_exp)
        rm, re_ = _dy_add(a.rad_man, a.rad_exp, b.rad_man, b.rad_exp)
    elif op == "mul":
        m, e = a.mid_man * b.mid_man, a.mid_exp + b.mid_exp
        # |a_mid|·b_rad + |b_mid|·a_rad + a_rad·b_rad
        rm, re_ = _dy_add(abs(a.mid_man) * b.rad_man, a.mid_exp + b.rad_exp,
                          abs(b.mid_man) * a.rad_man, b.mid_exp + a.rad_exp)
        rm, re_ = _dy_add(rm, re_, a.rad_man * b.rad_man, a.rad_exp + b.rad_exp)
    else:
        raise ValueError(f"Unknown ball operation: {op}")
    m, e, err_m, err_e = _round_mid(m, e, prec)
    rm, re_ = _dy_add(rm, re_, err_m, err_e)
    return Ball.make(m, e, rm, re_, prec)


def pow_int(a: Ball, j: int) -> Ball:
    """Enclosure of ``x**j`` by square-and-multiply; each step accounts its rounding."""
    if j < 0:
        raise ValueError("pow_int needs j >= 0")
    result = Ball.from_int(1, a.prec)
    base = a
    while j:
        if j & 1:
            result = result * base
        j >>= 1
        if j:
            base = base * base
    return result


def exact_root(q: Fraction, k: int) -> Fraction | None:
    """The rational k-th root of q >= 0 when it exists, else None."""
    if q < 0:
        raise BallDomainError(f"root of negative value {q}")
    rn, ok_n = _iroot(q.numerator, k)
    rd, ok_d = _iroot(q.denominator, k)
    return Fraction(rn, rd) if ok_n and ok_d else None


def root_bounds(q: Fraction, k: int, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic rationals ``lo <= q**(1/k) <= hi`` with about ``bits`` significant bits."""
    if q <= 0:
        raise BallDomainError(f"root of non-positive value {q}")
    if k < 1:
        raise ValueError("root index must be >= 1")
    exp = (abs(q.numerator).bit_length() - q.denominator.bit_length()) // k - bits - 2
    lo_man, hi_man = _root_mantissas(q, q, k, exp)
    return _dy_fraction(lo_man, exp), _dy_fraction(hi_man, exp)


def _root_mantissas(lo: Fraction, hi: Fraction, k: int, exp: int) -> tuple[int, int]:
    n_lo, _ = _floor_scaled(lo, exp * k)
    r_lo, _ = _iroot(n_lo, k)
    n_hi, exact_div = _floor_scaled(hi, exp * k)
    r_hi, is_exact = _iroot(n_hi, k)
    if not (exact_div and is_exact):
        r_hi += 1
    return r_lo, r_hi


def root_k(a: Ball, k: int, prec: int | None = None) -> Ball:
    """Enclosure of ``x**(1/k)`` for every ``x in a``; ``a`` must be certified positive.

    Endpoints are rooted with exact integer k-th roots of scaled dyadics, so the result is
    a certified enclosure with radius at most the propagated input width plus
    ``2**(-prec)`` relative.
    """
    if k < 1:
        raise ValueError("root index must be >= 1")
    work = prec if prec is not None else a.prec
    lo, hi = a.lower(), a.upper()
    if lo <= 0:
        raise BallDomainError(
            "root_k needs a ball enclosing only positive reals",
            details={"lower": str(lo), "upper": str(hi)},
        )
    if k == 1:
        return a.with_prec(work)
    exp = (abs(lo.numerator).bit_length() - lo.denominator.bit_length()) // k - work - 2
    r_lo, r_hi = _root_mantissas(lo, hi, k, exp)
    return Ball.make(r_lo + r_hi, exp - 1, r_hi - r_lo, exp - 1, work)


def cmp_lt(a: Ball, b: Ball) -> TriBool:
    """Three-valued ``a < b``: True iff sup(a) < inf(b), False iff inf(a) >= sup(b)."""
    if _dy_cmp(*a._upper(), *b._lower()) < 0:
        return TriBool.TRUE
    if _dy_cmp(*a._lower(), *b._upper()) >= 0:
        return TriBool.FALSE
    return TriBool.UNKNOWN


def precision_schedule(start_bits: int, cap_bits: int) -> list[int]:
    """Doubling precisions from ``start_bits`` up to and including ``cap_bits``."""
    if start_bits < MIN_PREC or cap_bits < start_bits:
        raise ValueError("need 2 <= start_bits <= cap_bits")
    precs = [start_bits]
    while precs[-1] < cap_bits:
        precs.append(min(precs[-1] * 2, cap_bits))
    return precs
