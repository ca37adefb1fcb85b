"""Shifted Waring Lab: Gap Constants around Certified Witnesses.

For τ₀ = τ_m with m ≥ m₀ and |τ − τ₀| = δ ≤ C0·τ₀^{1−2/k} ≤ τ₀/2, any solution of the
system at τ (tolerance C·τ^{1−2/k}, window C′·τ^{1/2k}) is a solution of the certified
system at τ₀, because

* τ^{1/2k} ≤ h·τ₀^{1/2k} and τ^{1−2/k} ≤ g·τ₀^{1−2/k} with h ≥ 2^{1/2k}, g ≥ 2^{1−2/k};
* |(τ/s)^{1/k} − (τ₀/s)^{1/k}| ≤ C1·δ·τ₀^{1/k−1} with C1 = 2/k;
* so the window grows to C2·τ₀^{1/2k}, C2 = C′·h + C1·C0, and the tolerance to
  C3·τ₀^{1−2/k}, C3 = C·g + C0.

With C = c/(2g) and C′ = c′/(2h), halving C0 until C1·C0 ≤ c′/2, C0 ≤ c/2 and C0 ≤ m₀²/2
gives C2 ≤ c′ and C3 ≤ c.
"""

from __future__ import annotations

from fractions import Fraction

import structlog

from src.certify.models import Certificate, GapConstants, Inequality
from src.core.exceptions import PreconditionError
from src.numeric.ball import root_bounds

logger = structlog.get_logger(__name__)

_BOUND_BITS = 32


def _fits(C0: Fraction, C1: Fraction, cert: Certificate) -> bool:
    return C1 * C0 <= cert.c_prime / 2 and C0 <= cert.c / 2 and C0 <= Fraction(cert.m0**2, 2)


def gap_constants(cert: Certificate, C0: Fraction | int) -> GapConstants:
    C0 = Fraction(C0)
    if C0 <= 0:
        raise PreconditionError("C0 must be positive", details={"C0": str(C0)})
    k = cert.inst.k
    h = root_bounds(Fraction(2), 2 * k, _BOUND_BITS)[1]
    g = Fraction(1) if k == 2 else root_bounds(Fraction(2 ** (k - 2)), k, _BOUND_BITS)[1]
    C = cert.c / (2 * g)
    C_prime = cert.c_prime / (2 * h)
    C1 = Fraction(2, k)
    halvings = 0
    while not _fits(C0, C1, cert):
        C0 /= 2
        halvings += 1
    gc = GapConstants(
        cert=cert,
        C0=C0,
        C=C,
        C_prime=C_prime,
        C1=C1,
        C2=C_prime * h + C1 * C0,
        C3=C * g + C0,
        g=g,
        h=h,
        halvings=halvings,
    )
    logger.info("certify.gap_constants", C0=str(C0), halvings=halvings, C=str(C), C_prime=str(C_prime))
    return gc


def closing_checks(gc: GapConstants) -> list[Inequality]:
    """Re-evaluate the closing inequalities from the stored record."""
    cert = gc.cert
    k = cert.inst.k
    return [
        Inequality("C2 = C_prime*h + C1*C0", gc.C2, "==", gc.C_prime * gc.h + gc.C1 * gc.C0),
        Inequality("C3 = C*g + C0", gc.C3, "==", gc.C * gc.g + gc.C0),
        Inequality("C2 <= c_prime", gc.C2, "<=", cert.c_prime, "window of the certified system"),
        Inequality("C3 <= c", gc.C3, "<=", cert.c, "tolerance of the certified system"),
        Inequality("C0 <= m0^2/2", gc.C0, "<=", Fraction(cert.m0**2, 2), "delta <= tau0/2"),
        Inequality("h^(2k) >= 2", gc.h ** (2 * k), ">=", Fraction(2)),
        Inequality("g^k >= 2^(k-2)", gc.g**k, ">=", Fraction(2 ** (k - 2))),
        Inequality("C1 >= 2/k", gc.C1, ">=", Fraction(2, k)),
        Inequality("C0 > 0", Fraction(0), "<", gc.C0),
    ]
