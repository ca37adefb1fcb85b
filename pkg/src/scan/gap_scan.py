"""Shifted Waring Lab: Gap Scan around a Certified Witness.

Grid points τ₀ + j·step are exact rationals, so every point runs on the exact search path
with η = C·τ^{1−2/k} compared exactly and the window C′·τ^{1/2k} enclosed in balls.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import structlog

from src.certify.models import GapConstants
from src.core.concurrency import ordered_map
from src.core.exceptions import (
    GapInconsistencyError,
    PreconditionError,
    SearchBudgetExceededError,
)
from src.observability.metrics import scan_points_total
from src.problem.model import Instance, RadiusRule, ScaledRoot, Tolerance
from src.problem.witness import tau_value
from src.scan.models import GapPoint, GapReport
from src.search.engine import search
from src.search.models import SearchOptions, SearchSpec, SearchStatus

logger = structlog.get_logger(__name__)

DEFAULT_STEP_DIVISOR = 25


def predicted_radius(gc: GapConstants, tau0: Fraction, prec: int) -> Fraction:
    """Certified rational lower bound of C0·τ₀^{1−2/k}."""
    k = gc.cert.inst.k
    return ScaledRoot(gc.C0, tau0, k - 2, k).lower_bound(prec)


def _scan_point(
    job: tuple[Instance, GapConstants, int, Fraction, SearchOptions],
) -> GapPoint:
    inst, gc, j, tau, options = job
    eta = Tolerance.scaled(gc.C, inst, tau)
    spec = SearchSpec.with_rule(inst, tau, eta, RadiusRule(gc.C_prime, scaled=True))
    try:
        outcome = search(spec, options)
    except SearchBudgetExceededError:
        return GapPoint(j=j, tau=tau, status="skipped")
    return GapPoint(j=j, tau=tau, status=outcome.status.value,
                    min_residual_exact=outcome.min_residual_exact)


def _measured_gap(points: list[GapPoint], half: int, step: Fraction) -> Fraction | None:
    by_j = {p.j: p.status for p in points}
    if by_j[0] != SearchStatus.EMPTY.value:
        return None
    reach = 0
    for j in range(1, half + 1):
        if by_j[j] != SearchStatus.EMPTY.value or by_j[-j] != SearchStatus.EMPTY.value:
            break
        reach = j
    return reach * step


def gap_scan(
    gc: GapConstants,
    m: int,
    grid_points: int,
    *,
    step_divisor: int = DEFAULT_STEP_DIVISOR,
    options: SearchOptions | None = None,
) -> GapReport:
    """Search an odd grid of τ centred on τ_m; the predicted interval must be solution-free."""
    cert = gc.cert
    inst = cert.inst
    if m < cert.m0:
        raise PreconditionError(f"m={m} is below the certificate's m0={cert.m0}")
    if grid_points < 3 or grid_points % 2 == 0:
        raise PreconditionError("grid_points must be odd and >= 3", details={"grid_points": grid_points})
    if step_divisor < 1:
        raise PreconditionError("step_divisor must be >= 1")
    options = options or SearchOptions()

    tau0 = tau_value(inst, m)
    predicted = predicted_radius(gc, tau0, options.precision.start_bits)
    step = predicted / step_divisor
    half = (grid_points - 1) // 2
    if tau0 - half * step <= 0:
        raise PreconditionError("grid reaches tau <= 0; use fewer points or a larger divisor")

    inner = replace(options, workers=1)
    points = ordered_map(
        _scan_point,
        [(inst, gc, j, tau0 + j * step, inner) for j in range(-half, half + 1)],
        workers=options.workers,
    )
    for point in points:
        scan_points_total.labels(status=point.status).inc()
        logger.debug("scan.point", j=point.j, status=point.status)

    offending = [
        p.j for p in points
        if p.status == SearchStatus.SOLUTIONS.value and abs(p.j * step) <= predicted
    ]
    if offending:
        raise GapInconsistencyError(
            "grid points inside the certified gap have solutions",
            details={"m": m, "j": offending, "certificate_sha256": cert.sha256()},
        )

    report = GapReport(
        m=m,
        tau0=tau0,
        predicted_radius=predicted,
        step=step,
        grid_points=grid_points,
        points=tuple(points),
        measured_gap=_measured_gap(points, half, step),
        certificate_sha256=cert.sha256(),
        eta_rule=f"{gc.C}*tau^(1-2/k)",
        radius_rule=f"{gc.C_prime}*tau^(1/2k)",
    )
    logger.info(
        "scan.done",
        m=m,
        predicted_radius=str(predicted),
        measured_gap=None if report.measured_gap is None else str(report.measured_gap),
        complete=report.complete,
    )
    return report
