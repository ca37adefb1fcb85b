"""Shifted Waring Lab: Problem Instances, Windows and Tolerances.

Defines the shifted Waring instance (s, k, θ), the diagonal window around (τ/s)^{1/k},
the tolerance η, and the θ-dependent lower bounds on Σ(a_i − θ_i)² used by both
contradiction branches of the certificate.

Naturals start at 1: every window is clipped at x ≥ 1. The irrationality of θ₁ matters
only for the general solvability problem and is not enforced here.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from src.core.exceptions import InfeasibleBoxError, InstanceError, PreconditionError
from src.numeric.ball import (
    DEFAULT_PREC,
    Ball,
    TriBool,
    ball_from_rat,
    cmp_lt,
    exact_root,
    parse_rational,
    precision_schedule,
    root_k,
)

# =============================================================
# INSTANCE
# =============================================================


@dataclass(frozen=True)
class Instance:
    """Parameters of the shifted Waring problem."""

    s: int
    k: int
    theta: tuple[Fraction, ...]
    labels: tuple[str, ...] = field(default=(), compare=False)

    @property
    def theta_sum(self) -> Fraction:
        return sum(self.theta, Fraction(0))

    @property
    def theta_denominator(self) -> int:
        """Least common denominator of the shifts."""
        return math.lcm(*(t.denominator for t in self.theta))

    def to_dict(self) -> dict[str, Any]:
        return {
            "s": self.s,
            "k": self.k,
            "theta": [str(t) for t in self.theta],
            "labels": list(self.labels),
        }


def validate_instance(raw: Instance | Mapping[str, Any]) -> Instance:
    """Validate the instance hypotheses and return an immutable Instance.

    Accepts an Instance (idempotent) or a record with ``s``, ``k`` and ``theta`` whose
    shifts are decimal/fraction strings or rationals.
    """
    if isinstance(raw, Instance):
        record: Mapping[str, Any] = {"s": raw.s, "k": raw.k, "theta": raw.theta,
                                     "labels": raw.labels}
    else:
        record = raw
    try:
        s = int(record["s"])
        k = int(record["k"])
        raw_theta = list(record["theta"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(
            f"instance record needs integer s, k and a theta list: {exc}",
            hypothesis="record shape",
        ) from exc
    if s < 2:
        raise InstanceError("s must be ≥ 2", hypothesis="s ≥ 2", details={"s": s})
    if k < 2:
        raise InstanceError("k must be ≥ 2", hypothesis="k ≥ 2", details={"k": k})
    if len(raw_theta) != s:
        raise InstanceError(
            f"theta must have s={s} entries, got {len(raw_theta)}",
            hypothesis="θ ∈ (0,1)^s",
            details={"theta_length": len(raw_theta)},
        )
    theta: list[Fraction] = []
    labels: list[str] = []
    for i, value in enumerate(raw_theta):
        t = parse_rational(value) if isinstance(value, str) else Fraction(value)
        if not 0 < t < 1:
            raise InstanceError(
                f"theta[{i}] not in open interval (0,1)",
                hypothesis="θ ∈ (0,1)^s",
                details={"index": i, "value": str(t)},
            )
        theta.append(t)
        labels.append(value.strip() if isinstance(value, str) else str(t))
    given = tuple(record.get("labels") or ())
    return Instance(s=s, k=k, theta=tuple(theta), labels=given if len(given) == s else tuple(labels))


# =============================================================
# θ LOWER BOUNDS
# =============================================================


def theta_gap_lower_bound(inst: Instance) -> Fraction:
    """L(θ) = Σ min(θ_i, 1 − θ_i)², the minimum of Σ(a_i − θ_i)² over integer vectors."""
    return sum((min(t, 1 - t) ** 2 for t in inst.theta), Fraction(0))


def constrained_theta_min(
    inst: Instance, target_sum: int, box: int
) -> tuple[Fraction, tuple[int, ...]]:
    """Exact minimum of Σ(a_i − θ_i)² over integer a with Σa_i = target_sum, |a_i| ≤ box.

    Returns the minimum and the lexicographically smallest minimiser.
    """
    s = inst.s
    if box < 0 or s * box < abs(target_sum):
        raise InfeasibleBoxError(
            f"no integer vector with |a_i| <= {box} sums to {target_sum}",
            details={"s": s, "box": box, "target_sum": target_sum},
        )
    best: list[Any] = [None, None]
    prefix: list[int] = []

    def visit(i: int, remaining: int, acc: Fraction) -> None:
        if best[0] is not None and acc >= best[0]:
            return
        if i == s - 1:
            if abs(remaining) <= box:
                total = acc + (remaining - inst.theta[i]) ** 2
                if best[0] is None or total < best[0]:
                    best[0], best[1] = total, (*prefix, remaining)
            return
        slack = (s - i - 1) * box
        for a in range(max(-box, remaining - slack), min(box, remaining + slack) + 1):
            prefix.append(a)
            visit(i + 1, remaining - a, acc + (a - inst.theta[i]) ** 2)
            prefix.pop()

    visit(0, target_sum, Fraction(0))
    return best[0], best[1]


# =============================================================
# PRECISION, QUANTITIES, RULES
# =============================================================


@dataclass(frozen=True)
class Precision:
    """Doubling precision schedule ``start_bits, 2·start_bits, …, cap_bits``."""

    start_bits: int = DEFAULT_PREC
    cap_bits: int = 4096

    def schedule(self) -> list[int]:
        return precision_schedule(self.start_bits, self.cap_bits)


@dataclass(frozen=True)
class ScaledRoot:
    """The real number ``coeff · base^(num/den)`` with rational coeff and base > 0."""

    coeff: Fraction
    base: Fraction
    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den < 1 or self.base <= 0 or self.coeff < 0:
            raise PreconditionError("ScaledRoot needs den >= 1, base > 0 and coeff >= 0")

    @property
    def radicand(self) -> Fraction:
        return self.base**self.num

    def exact(self) -> Fraction | None:
        """Rational value when ``base^num`` is a perfect ``den``-th power, else None."""
        if self.coeff == 0:
            return Fraction(0)
        q = self.radicand
        root = q if self.den == 1 else exact_root(q, self.den)
        return None if root is None else self.coeff * root

    def enclose(self, prec: int) -> Ball:
        value = self.exact()
        if value is not None:
            return ball_from_rat(value, prec)
        root = root_k(ball_from_rat(self.radicand, prec + 8), self.den, prec)
        return ball_from_rat(self.coeff, prec) * root

    def strictly_below(self, prec: int) -> Fraction:
        """A positive rational strictly less than the value (value must be positive)."""
        for p in precision_schedule(prec, prec * 64):
            lo = self.enclose(p).lower()
            if lo > 0:
                return lo - lo / (1 << p)
        raise PreconditionError("ScaledRoot value is not certified positive")

    def exceeds(self, r: Fraction) -> bool:
        """Exact test of ``r < value``."""
        if r < 0:
            return True
        if self.coeff == 0:
            return False
        return (r / self.coeff) ** self.den < self.radicand

    def lower_bound(self, prec: int) -> Fraction:
        """Certified rational lower bound (the exact value when rational)."""
        value = self.exact()
        return value if value is not None else self.enclose(prec).lower()

    def describe(self) -> str:
        return f"{self.coeff}*{self.base}^({self.num}/{self.den})"


Quantity = Union[Fraction, Ball, ScaledRoot]


def exact_value(q: Quantity | int) -> Fraction | None:
    if isinstance(q, (Fraction, int)):
        return Fraction(q)
    if isinstance(q, ScaledRoot):
        return q.exact()
    return q.mid if q.is_exact else None


def enclose(q: Quantity | int, prec: int) -> Ball:
    if isinstance(q, (Fraction, int)):
        return ball_from_rat(Fraction(q), prec)
    if isinstance(q, ScaledRoot):
        return q.enclose(prec)
    return q


@dataclass(frozen=True)
class RadiusRule:
    """Window radius: an explicit rational, or ``coeff · τ^{1/2k}`` when ``scaled``."""

    value: Fraction
    scaled: bool = False

    def radius_for(self, inst: Instance, tau: Fraction) -> Quantity:
        if not self.scaled:
            return self.value
        return ScaledRoot(self.value, tau, 1, 2 * inst.k)

    def describe(self) -> str:
        return f"{self.value}*tau^(1/2k)" if self.scaled else f"explicit {self.value}"


@dataclass(frozen=True)
class Tolerance:
    """The tolerance η of the search acceptance test ``residual < η``."""

    value: Quantity
    rule: str

    def __post_init__(self) -> None:
        exact = exact_value(self.value)
        if exact is not None and exact <= 0:
            raise PreconditionError("eta must be positive", details={"eta": str(exact)})

    @property
    def eta(self) -> Ball:
        return enclose(self.value, DEFAULT_PREC)

    @property
    def exact(self) -> Fraction | None:
        return exact_value(self.value)

    def enclose(self, prec: int) -> Ball:
        return enclose(self.value, prec)

    @classmethod
    def absolute(cls, eta: Fraction | int) -> Tolerance:
        return cls(Fraction(eta), f"absolute {Fraction(eta)}")

    @classmethod
    def scaled(cls, coeff: Fraction, inst: Instance, tau: Fraction) -> Tolerance:
        """η = coeff · τ^{1−2/k} itself (used by the gap system's strict bound)."""
        return cls(ScaledRoot(coeff, tau, inst.k - 2, inst.k), f"{coeff}*tau^(1-2/k)")

    @classmethod
    def below(cls, coeff: Fraction, inst: Instance, tau: Fraction, prec: int) -> Tolerance:
        """A rational η strictly below ``coeff · τ^{1−2/k}``."""
        bound = ScaledRoot(coeff, tau, inst.k - 2, inst.k)
        return cls(bound.strictly_below(prec), f"rational strictly below {coeff}*tau^(1-2/k)")

    def to_dict(self) -> dict[str, Any]:
        exact = self.exact
        return {
            "rule": self.rule,
            "exact": None if exact is None else str(exact),
            "eta": self.eta.to_dict(),
        }


# =============================================================
# WINDOW
# =============================================================


@dataclass(frozen=True)
class Window:
    """Integer box of the diagonal constraint ``|x_i − center| < radius``, x_i ≥ 1.

    ``boundary`` holds integers whose membership stayed Unknown at the precision cap;
    they are included so that an Empty verdict stays a certificate.
    """

    center: Ball
    radius: Ball
    lo: tuple[int, ...]
    hi: tuple[int, ...]
    boundary: frozenset[int] = field(default_factory=frozenset)
    radius_rule: str = "explicit"
    exact: bool = False

    @property
    def width(self) -> int:
        return max(0, self.hi[0] - self.lo[0] + 1)

    @property
    def is_empty(self) -> bool:
        return self.width == 0

    def candidate_count(self) -> int:
        total = 1
        for lo, hi in zip(self.lo, self.hi):
            total *= max(0, hi - lo + 1)
        return total

    def membership(self, x: int) -> TriBool:
        if not self.lo[0] <= x <= self.hi[0]:
            return TriBool.FALSE
        return TriBool.UNKNOWN if x in self.boundary else TriBool.TRUE

    def values(self) -> Iterator[int]:
        return iter(range(self.lo[0], self.hi[0] + 1))

    def to_dict(self) -> dict[str, Any]:
        return {
            "center": self.center.to_dict(),
            "radius": self.radius.to_dict(),
            "lo": list(self.lo),
            "hi": list(self.hi),
            "boundary_undecided": sorted(self.boundary),
            "radius_rule": self.radius_rule,
            "decided_exactly": self.exact,
        }


def membership_exact(x: int, q: Fraction, k: int, r: Fraction) -> bool:
    """Exact test of ``|x − q^{1/k}| < r`` for rational q > 0 and r > 0."""
    left = x - r
    right = x + r
    above_left = left <= 0 or left**k < q
    return above_left and q < right**k


def membership_ball(x: int, center: Ball, radius: Ball) -> TriBool:
    xb = Ball.from_int(x, center.prec)
    return cmp_lt(xb - center, radius) & cmp_lt(center - xb, radius)
