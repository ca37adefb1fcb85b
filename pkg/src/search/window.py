"""Shifted Waring Lab: Residuals and the Diagonal Window.

``build_window`` returns the integer box ``{x ≥ 1 : |x − (τ/s)^{1/k}| < radius}``. With a
rational τ and a rational radius the box is decided exactly; otherwise the center and
radius are enclosed in balls and refined by doubling precision. Integers whose membership
is still Unknown at the cap are kept and flagged, never dropped.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction

import structlog

from src.core.exceptions import PreconditionError, WindowUndecidedError
from src.numeric.ball import (
    Ball,
    TriBool,
    ball_from_rat,
    cmp_lt,
    pow_int,
    root_bounds,
    root_k,
)
from src.problem.model import (
    Instance,
    Precision,
    Quantity,
    Window,
    enclose,
    exact_value,
    membership_ball,
    membership_exact,
)

logger = structlog.get_logger(__name__)

# Undecided integers tolerated on each side of the window at the precision cap.
_MAX_EDGE_UNKNOWN = 1


def residual_exact(inst: Instance, x: Sequence[int], tau: Fraction) -> Fraction:
    """Exact |Σ(x_i − θ_i)^k − τ|."""
    total = sum(((xi - t) ** inst.k for xi, t in zip(x, inst.theta)), Fraction(0))
    return abs(total - tau)


def residual(inst: Instance, x: Sequence[int], tau: Fraction | Ball, prec: int) -> Ball:
    """Ball enclosure of |Σ(x_i − θ_i)^k − τ|."""
    if any(xi < 1 for xi in x):
        raise PreconditionError("window points are naturals (x_i >= 1)", details={"x": list(x)})
    total = Ball.from_int(0, prec)
    for xi, t in zip(x, inst.theta):
        total = total + pow_int(Ball.from_int(xi, prec) - ball_from_rat(t, prec), inst.k)
    return (total - enclose(tau, prec)).abs()


def _ensure_positive(tau: Fraction | Ball, radius: Quantity, prec: int) -> None:
    tau_exact = exact_value(tau)
    if tau_exact is not None and tau_exact <= 0:
        raise PreconditionError("tau must be positive", details={"tau": str(tau_exact)})
    if tau_exact is None and cmp_lt(Ball.from_int(0, prec), enclose(tau, prec)) is not TriBool.TRUE:
        raise PreconditionError("tau must be certified positive")
    r_exact = exact_value(radius)
    if r_exact is not None and r_exact <= 0:
        raise PreconditionError("window radius must be positive", details={"radius": str(r_exact)})


def _exact_bounds(inst: Instance, tau: Fraction, r: Fraction) -> tuple[int, int]:
    q = tau / inst.s
    lo_root, hi_root = root_bounds(q, inst.k, 64)
    lo = max(1, math.floor(lo_root - r) - 1)
    hi = math.ceil(hi_root + r) + 1
    while lo <= hi and not membership_exact(lo, q, inst.k, r):
        lo += 1
    while hi >= lo and not membership_exact(hi, q, inst.k, r):
        hi -= 1
    return lo, hi


def _scan_edge(
    start: int, step: int, stop: int, center: Ball, radius: Ball
) -> tuple[int | None, list[int]]:
    """Walk from ``start`` toward ``stop``; return the first certified member and the Unknowns."""
    unknown: list[int] = []
    x = start
    while (x - stop) * step <= 0:
        verdict = membership_ball(x, center, radius)
        if verdict is TriBool.TRUE:
            return x, unknown
        if verdict is TriBool.UNKNOWN:
            unknown.append(x)
        x += step
    return None, unknown


def build_window(
    inst: Instance,
    tau: Fraction | Ball,
    radius: Quantity,
    *,
    precision: Precision | None = None,
    radius_rule: str = "explicit",
) -> Window:
    precision = precision or Precision()
    schedule = precision.schedule()
    _ensure_positive(tau, radius, schedule[0])

    tau_exact = exact_value(tau)
    r_exact = exact_value(radius)
    if tau_exact is not None and r_exact is not None:
        lo, hi = _exact_bounds(inst, tau_exact, r_exact)
        prec = schedule[0]
        center = root_k(ball_from_rat(tau_exact / inst.s, prec + 8), inst.k, prec)
        return Window(
            center=center,
            radius=ball_from_rat(r_exact, prec),
            lo=(lo,) * inst.s,
            hi=(hi,) * inst.s,
            radius_rule=radius_rule,
            exact=True,
        )

    inv_s = Fraction(1, inst.s)
    unknown: list[int] = []
    for prec in schedule:
        r_ball = enclose(radius, prec)
        if cmp_lt(Ball.from_int(0, prec), r_ball) is not TriBool.TRUE:
            if prec == schedule[-1]:
                raise WindowUndecidedError(
                    "window radius is not certified positive",
                    details={"radius": repr(r_ball)},
                )
            continue
        center = root_k(enclose(tau, prec + 8) * ball_from_rat(inv_s, prec + 8), inst.k, prec)
        outer_lo = max(1, math.floor(center.lower() - r_ball.upper()))
        outer_hi = math.ceil(center.upper() + r_ball.upper())
        first, left_unknown = _scan_edge(outer_lo, 1, outer_hi, center, r_ball)
        if first is None:
            lo, hi = outer_lo, outer_lo - 1
            unknown = left_unknown
        else:
            last, right_unknown = _scan_edge(outer_hi, -1, first, center, r_ball)
            lo = left_unknown[0] if left_unknown else first
            hi = right_unknown[0] if right_unknown else (last if last is not None else first)
            unknown = left_unknown + right_unknown
        if not unknown:
            break
        logger.debug("window.refine", prec=prec, unknown=len(unknown))
    else:
        if len(unknown) > 2 * _MAX_EDGE_UNKNOWN:
            raise WindowUndecidedError(
                f"{len(unknown)} window edge integers undecided at the precision cap",
                details={"unknown": unknown, "cap_bits": schedule[-1]},
            )
        if first is None:
            lo, hi = min(unknown), max(unknown)

    return Window(
        center=center,
        radius=r_ball,
        lo=(lo,) * inst.s,
        hi=(hi,) * inst.s,
        boundary=frozenset(unknown),
        radius_rule=radius_rule,
        exact=False,
    )
