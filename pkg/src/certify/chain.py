"""Shifted Waring Lab: Certificate Constant Chain.

Suppose x solves ``|Σ(x_i−θ_i)^k − τ_m| < η`` with ``η < c·τ_m^{1−2/k}`` and
``|x_i − (τ_m/s)^{1/k}| < c′·τ_m^{1/2k}``, and write ``x_i = m + a_i``. For m ≥ m₀ with
``r = 1/⌊√m₀⌋ ≥ m^{−1/2}`` and ``d = 1 − Σθ/s``:

* m ≥ k gives τ_m ≤ 2s·m^k, so τ_m^{1/2k} ≤ b·m^{1/2} and τ_m^{1−2/k} ≤ e·m^{k−2};
* (τ_m/s)^{1/k} − m ∈ [0, d], hence ``|a_i| ≤ c₂·m^{1/2}`` and ``|a_i − θ_i| ≤ c₃·m^{1/2}``;
* expanding around m, ``|Σa_i − s| ≤ c₄ ≤ headroom < 1`` forces Σa_i = s;
* k = 2: the residual is exactly Σ(a_i−θ_i)² ≥ L, contradicting η < c₅ = c < L;
* k ≥ 3: Σ(a_i−θ_i)² ≤ c₇ + c₈·r·Σ(a_i−θ_i)², so with c₈·r ≤ 1/2 it is ≤ 2c₇ < L.

c is halved from 1 until the m-independent branch condition holds, c′ until the m → ∞
limit of c₄ is at most headroom/2, and m₀ is the least m meeting every side condition.
"""

from __future__ import annotations

import math
from fractions import Fraction

import structlog

from src.core.exceptions import PreconditionError
from src.certify.models import Certificate, ChainConstant, Inequality
from src.numeric.ball import root_bounds
from src.problem.model import Instance, theta_gap_lower_bound, validate_instance

logger = structlog.get_logger(__name__)

_BOUND_BITS = 32
_HALF = Fraction(1, 2)


def r_of(m: int) -> Fraction:
    """1/⌊√m⌋, a rational upper bound of m^{−1/2}."""
    return Fraction(1, math.isqrt(m))


def growth_bounds(inst: Instance) -> tuple[Fraction, Fraction]:
    """Rationals b ≥ (2s)^{1/2k} and e ≥ (2s)^{1−2/k}."""
    two_s = Fraction(2 * inst.s)
    b = root_bounds(two_s, 2 * inst.k, _BOUND_BITS)[1]
    e = Fraction(1) if inst.k == 2 else root_bounds(two_s ** (inst.k - 2), inst.k, _BOUND_BITS)[1]
    return b, e


def evaluate_chain(
    inst: Instance,
    c: Fraction,
    c_prime: Fraction,
    m: int,
    *,
    b: Fraction,
    e: Fraction,
) -> dict[str, Fraction]:
    """Chain constants c₁…c₈ evaluated with r = r(m)."""
    s, k = inst.s, inst.k
    r = r_of(m)
    d = 1 - inst.theta_sum / s
    c1 = c_prime * b
    c2 = c1 + k * d * r
    c3 = c2 + r
    c4 = c * e / (k * m) + sum(
        (Fraction(math.comb(k, j), k) * s * c3**j * r ** (j - 2) for j in range(2, k + 1)),
        Fraction(0),
    )
    chain = {"r": r, "c1": c1, "c2": c2, "c3": c3, "c4": c4}
    if k == 2:
        chain["c5"] = c
    else:
        pair = math.comb(k, 2)
        c6 = sum((math.comb(k, j) * c3 ** (j - 2) for j in range(3, k + 1)), Fraction(0))
        chain["c6"] = c6
        chain["c7"] = c * e / pair
        chain["c8"] = c6 / pair
    return chain


_FORMULAS = {
    "r": "1/isqrt(m0)",
    "c1": "c_prime*b",
    "c2": "c1 + k*(1 - sum(theta)/s)*r",
    "c3": "c2 + r",
    "c4": "c*e/(k*m0) + sum_{j=2..k} binom(k,j)/k*s*c3^j*r^(j-2)",
    "c5": "c",
    "c6": "sum_{j=3..k} binom(k,j)*c3^(j-2)",
    "c7": "c*e/binom(k,2)",
    "c8": "c6/binom(k,2)",
}


def _side_conditions_hold(
    inst: Instance, c: Fraction, c_prime: Fraction, m: int, headroom: Fraction, b: Fraction, e: Fraction
) -> bool:
    if m < inst.k:
        return False
    chain = evaluate_chain(inst, c, c_prime, m, b=b, e=e)
    if chain["c4"] > headroom:
        return False
    return inst.k == 2 or chain["c8"] * chain["r"] <= _HALF


def _least_m0(
    inst: Instance, c: Fraction, c_prime: Fraction, headroom: Fraction, b: Fraction, e: Fraction
) -> int:
    """Least m satisfying every side condition (monotone in m): gallop, then bisect."""

    def ok(m: int) -> bool:
        return _side_conditions_hold(inst, c, c_prime, m, headroom, b, e)

    lo = inst.k
    if ok(lo):
        return lo
    hi = 2 * lo
    while not ok(hi):
        lo, hi = hi, 2 * hi
    # lo fails, hi holds
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _branch_limit_holds(inst: Instance, c: Fraction, e: Fraction, L: Fraction) -> bool:
    if inst.k == 2:
        return c < L
    return 2 * c * e / math.comb(inst.k, 2) < L


def _build(
    inst: Instance,
    c: Fraction,
    c_prime: Fraction,
    m0: int,
    headroom: Fraction,
    L: Fraction,
    b: Fraction,
    e: Fraction,
) -> Certificate:
    chain = evaluate_chain(inst, c, c_prime, m0, b=b, e=e)
    conditions = ["m >= m0", f"m >= k = {inst.k}", f"c4 <= headroom = {headroom}"]
    if inst.k == 2:
        conditions.append("c5 < L")
    else:
        conditions += ["c8*r(m0) <= 1/2", "2*c7 < L"]
    return Certificate(
        inst=inst,
        c=c,
        c_prime=c_prime,
        m0=m0,
        headroom=headroom,
        L=L,
        b=b,
        e=e,
        chain=tuple(ChainConstant(name, value, _FORMULAS[name]) for name, value in chain.items()),
        side_conditions=tuple(conditions),
    )


def derive_constants(inst: Instance, headroom: Fraction = _HALF) -> Certificate:
    """Effective (c, c′, m₀) with the full audit chain; see the module docstring."""
    inst = validate_instance(inst)
    headroom = Fraction(headroom)
    if not 0 < headroom < 1:
        raise PreconditionError("headroom must lie in (0, 1)", details={"headroom": str(headroom)})
    L = theta_gap_lower_bound(inst)
    b, e = growth_bounds(inst)

    c = Fraction(1)
    while not _branch_limit_holds(inst, c, e, L):
        c /= 2
    c_prime = Fraction(1)
    # m → ∞ limit of c4 is binom(k,2)/k * s * c1^2
    while Fraction(inst.k - 1, 2) * inst.s * (c_prime * b) ** 2 > headroom / 2:
        c_prime /= 2

    m0 = _least_m0(inst, c, c_prime, headroom, b, e)
    cert = _build(inst, c, c_prime, m0, headroom, L, b, e)
    logger.info(
        "certify.derived",
        s=inst.s,
        k=inst.k,
        c=str(c),
        c_prime=str(c_prime),
        m0=m0,
        L=str(L),
    )
    return cert


def certificate_with(
    cert: Certificate, *, c: Fraction | None = None, c_prime: Fraction | None = None
) -> Certificate:
    """Same instance and m₀ with new coefficients; the chain is re-evaluated at m₀."""
    return _build(
        cert.inst,
        cert.c if c is None else Fraction(c),
        cert.c_prime if c_prime is None else Fraction(c_prime),
        cert.m0,
        cert.headroom,
        cert.L,
        cert.b,
        cert.e,
    )


def check_certificate(cert: Certificate, m: int) -> list[Inequality]:
    """Re-evaluate every chain inequality at m in exact arithmetic."""
    if m < 1:
        raise PreconditionError("m must be >= 1", details={"m": m})
    inst = cert.inst
    s, k = inst.s, inst.k
    two_s = Fraction(2 * s)
    audit = [
        Inequality("m >= m0", Fraction(m), ">=", Fraction(cert.m0)),
        Inequality("m >= k", Fraction(m), ">=", Fraction(k), "tau_m <= 2s*m^k"),
        Inequality("0 < headroom", Fraction(0), "<", cert.headroom),
        Inequality("headroom < 1", cert.headroom, "<", Fraction(1)),
        Inequality("b^(2k) >= 2s", cert.b ** (2 * k), ">=", two_s),
        Inequality("e^k >= (2s)^(k-2)", cert.e**k, ">=", two_s ** (k - 2)),
        Inequality("L = theta_gap_lower_bound", cert.L, "==", theta_gap_lower_bound(inst)),
    ]

    at_m0 = evaluate_chain(inst, cert.c, cert.c_prime, cert.m0, b=cert.b, e=cert.e)
    recorded = {item.name: item.value for item in cert.chain}
    for name, derived in at_m0.items():
        value = recorded.get(name, Fraction(0))
        note = "" if name in recorded else "missing from certificate"
        audit.append(Inequality(f"{name} recorded = derived at m0", value, "==", derived, note))
        audit.append(Inequality(f"{name} > 0", Fraction(0), "<", value))

    at_m = evaluate_chain(inst, cert.c, cert.c_prime, m, b=cert.b, e=cert.e)
    audit.append(
        Inequality("c4(m) <= headroom", at_m["c4"], "<=", cert.headroom, "forces sum(a_i) = s")
    )
    if k == 2:
        audit.append(Inequality("c5 < L", cert.constant("c5"), "<", cert.L, "k=2 branch"))
    else:
        audit.append(
            Inequality("c8(m)*r(m) <= 1/2", at_m["c8"] * at_m["r"], "<=", _HALF, "k>=3 branch")
        )
        audit.append(
            Inequality("c8*r(m0) <= 1/2", cert.constant("c8") * cert.constant("r"), "<=", _HALF,
                       "k>=3 branch, recorded")
        )
        audit.append(Inequality("2*c7 < L", 2 * cert.constant("c7"), "<", cert.L, "k>=3 branch"))
    return audit

