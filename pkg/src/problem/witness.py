"""Shifted Waring Lab: Witness Family.

τ_m = s·m^k + k·m^{k−1}·(s − Σθ_i) and the diagonal center (τ/s)^{1/k} around it.
With d = 1 − Σθ/s the center of τ_m lies strictly between m and m + d, so its nearest
integer is m or m + 1 (m whenever d ≤ 1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import structlog

from src.core.exceptions import NearestIntegerUndecidedError, PreconditionError
from src.numeric.ball import (
    DEFAULT_PREC,
    Ball,
    TriBool,
    ball_from_rat,
    cmp_lt,
    precision_schedule,
    root_k,
)
from src.problem.model import Instance, ScaledRoot

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class WitnessTau:
    """One member of the witness family with its diagonal center."""

    m: int
    tau: Fraction
    theta_sum: Fraction
    center: Ball
    nearest: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "tau": str(self.tau),
            "tau_decimal": f"{float(self.tau):.12g}",
            "theta_sum": str(self.theta_sum),
            "center": self.center.to_dict(),
            "nearest_integer": self.nearest,
        }


def tau_value(inst: Instance, m: int) -> Fraction:
    """Exact τ_m."""
    if m < 1:
        raise PreconditionError("m must be >= 1", details={"m": m})
    s, k = inst.s, inst.k
    return s * Fraction(m) ** k + k * Fraction(m) ** (k - 1) * (s - inst.theta_sum)


def tau_m(inst: Instance, m: int, prec: int = DEFAULT_PREC) -> WitnessTau:
    tau = tau_value(inst, m)
    center, nearest = center_m(inst, tau, prec)
    return WitnessTau(m=m, tau=tau, theta_sum=inst.theta_sum, center=center, nearest=nearest)


def witness_table(
    inst: Instance, m_lo: int, m_hi: int, prec: int = DEFAULT_PREC
) -> list[WitnessTau]:
    return [tau_m(inst, m, prec) for m in range(m_lo, m_hi + 1)]


def _nearest_down(x: Fraction) -> int:
    """Nearest integer with exact halves rounded down: ⌈x − 1/2⌉."""
    return math.ceil(x - Fraction(1, 2))


def center_m(
    inst: Instance,
    tau: Fraction | Ball,
    prec: int = DEFAULT_PREC,
    *,
    cap_bits: int | None = None,
) -> tuple[Ball, int]:
    """Enclosure of (τ/s)^{1/k} and its nearest integer (ties downward).

    Rational τ is decided exactly; a ball τ is refined by doubling precision up to
    ``cap_bits`` and raises NearestIntegerUndecidedError if both neighbours stay possible.
    """
    cap = max(prec, cap_bits if cap_bits is not None else 32 * prec)
    if isinstance(tau, Ball):
        if cmp_lt(Ball.from_int(0, prec), tau) is not TriBool.TRUE:
            raise PreconditionError("tau must be certified positive", details={"tau": repr(tau)})
        if tau.is_exact:
            tau = tau.mid
    else:
        tau = Fraction(tau)
        if tau <= 0:
            raise PreconditionError("tau must be positive", details={"tau": str(tau)})

    if isinstance(tau, Fraction):
        q = tau / inst.s
        center = ScaledRoot(Fraction(1), q, 1, inst.k).enclose(prec)
        # q^{1/k} < n + 1/2  ⇔  q < (n + 1/2)^k ; ties go to n
        n = max(0, math.floor(center.mid))
        while Fraction(n) ** inst.k > q:
            n -= 1
        while Fraction(n + 1) ** inst.k <= q:
            n += 1
        nearest = n if q <= (n + Fraction(1, 2)) ** inst.k else n + 1
        return center, nearest

    inv_s = Fraction(1, inst.s)
    lo = hi = 0
    for p in precision_schedule(prec, cap):
        center = root_k(tau * ball_from_rat(inv_s, p + 8), inst.k, p)
        lo, hi = _nearest_down(center.lower()), _nearest_down(center.upper())
        if lo == hi:
            return center, lo
        logger.debug("witness.center_refine", prec=p, candidates=(lo, hi))
    raise NearestIntegerUndecidedError((lo, hi), details={"cap_bits": cap})
