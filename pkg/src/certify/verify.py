"""Shifted Waring Lab: Certificate Verification by Exhaustive Search.

For each m the search runs at τ = τ_m with a rational η strictly below c·τ_m^{1−2/k} and
the window radius c′·τ_m^{1/2k}. Witnesses at or beyond m₀ must come out Empty; anything
else is an anomaly. Witnesses whose window exceeds the candidate budget are skipped and
listed as gaps.
"""

from __future__ import annotations

from dataclasses import replace

import structlog

from src.certify.models import Certificate, VerificationReport, VerifyEntry
from src.core.concurrency import ordered_map
from src.core.exceptions import PreconditionError, SearchBudgetExceededError
from src.observability.metrics import verify_anomalies_total
from src.problem.model import RadiusRule, Tolerance
from src.problem.witness import tau_value
from src.search.engine import search
from src.search.models import SearchOptions, SearchSpec, SearchStatus

logger = structlog.get_logger(__name__)

SKIPPED = "skipped"


def _verify_one(job: tuple[Certificate, int, SearchOptions]) -> VerifyEntry:
    cert, m, options = job
    inst = cert.inst
    tau = tau_value(inst, m)
    eta = Tolerance.below(cert.c, inst, tau, options.precision.start_bits)
    spec = SearchSpec.with_rule(inst, tau, eta, RadiusRule(cert.c_prime, scaled=True))
    try:
        outcome = search(spec, options)
    except SearchBudgetExceededError as exc:
        return VerifyEntry(m=m, tau=tau, status=SKIPPED, eta=eta.exact, note=exc.message)
    window = outcome.window
    return VerifyEntry(
        m=m,
        tau=tau,
        status=outcome.status.value,
        eta=eta.exact,
        min_residual_exact=outcome.min_residual_exact,
        argmin=outcome.argmin,
        window=(window.lo[0], window.hi[0]),
    )


def verify_certificate(
    cert: Certificate,
    m_lo: int,
    m_hi: int,
    options: SearchOptions | None = None,
) -> VerificationReport:
    """Search every τ_m for m in [m_lo, m_hi]; parallel over m, merged in m order."""
    if m_lo < 1 or m_lo > m_hi:
        raise PreconditionError("need 1 <= m_lo <= m_hi", details={"m_lo": m_lo, "m_hi": m_hi})
    options = options or SearchOptions()
    inner = replace(options, workers=1)
    entries = ordered_map(
        _verify_one,
        [(cert, m, inner) for m in range(m_lo, m_hi + 1)],
        workers=options.workers,
    )
    anomalies = tuple(
        e.m for e in entries if e.m >= cert.m0 and e.status not in (SearchStatus.EMPTY.value, SKIPPED)
    )
    gaps = tuple(e.m for e in entries if e.status == SKIPPED)
    for m in anomalies:
        logger.warning("verify.anomaly", m=m, status=next(e.status for e in entries if e.m == m))
    if anomalies:
        verify_anomalies_total.labels(k=str(cert.inst.k)).inc(len(anomalies))
    logger.info(
        "verify.done",
        m_lo=m_lo,
        m_hi=m_hi,
        m0=cert.m0,
        anomalies=len(anomalies),
        skipped=len(gaps),
    )
    return VerificationReport(
        cert=cert,
        m_lo=m_lo,
        m_hi=m_hi,
        entries=tuple(entries),
        anomalies=anomalies,
        gaps=gaps,
    )
