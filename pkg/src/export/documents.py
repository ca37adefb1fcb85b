"""Builders turning lab results into ExportDocuments."""

from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

from src.export.models import EntityType, ExportDocument

if TYPE_CHECKING:
    from src.certify.models import Certificate, GapConstants, VerificationReport
    from src.problem.witness import WitnessTau
    from src.scan.models import GapReport, PhaseMatrix
    from src.search.models import SearchOutcome
    from src.search.profile import ProfileRow

WITNESS_COLUMNS = ("m", "tau", "tau_decimal", "theta_sum", "nearest_integer")
SEARCH_COLUMNS = ("kind", "x", "residual", "in_window")
PROFILE_COLUMNS = ("m", "tau", "status", "min_residual_exact", "argmin")
VERIFY_COLUMNS = ("m", "tau", "status", "eta", "min_residual_exact", "argmin", "window", "note")
GAP_COLUMNS = ("j", "tau", "offset", "within_predicted", "status", "min_residual")
PHASE_COLUMNS = (
    "label",
    "alpha",
    "beta",
    "samples",
    "density",
    "empty_fraction",
    "undecided_fraction",
    "skipped",
    "candidate_estimate",
)


def witness_document(rows: Sequence[WitnessTau]) -> ExportDocument:
    table = [w.to_dict() for w in rows]
    return ExportDocument(
        entity_type=EntityType.WITNESS_TABLE,
        name="witness",
        payload={"witnesses": table},
        columns=WITNESS_COLUMNS,
        rows=tuple(table),
    )


def search_document(outcome: SearchOutcome) -> ExportDocument:
    rows = [
        {
            "kind": kind,
            "x": list(c.x),
            "residual": (
                str(c.residual_exact)
                if c.residual_exact is not None
                else f"{float(c.residual.mid)!r}+-{float(c.residual.rad):.3g}"
            ),
            "in_window": [t.value for t in c.in_window],
        }
        for kind, group in (("solution", outcome.solutions), ("undecided", outcome.undecided))
        for c in group
    ]
    return ExportDocument(
        entity_type=EntityType.SEARCH_OUTCOME,
        name="search",
        payload=outcome.to_dict(),
        columns=SEARCH_COLUMNS,
        rows=tuple(rows),
    )


def profile_document(rows: Sequence[ProfileRow]) -> ExportDocument:
    table = [r.to_dict() for r in rows]
    return ExportDocument(
        entity_type=EntityType.PROFILE,
        name="profile",
        payload={"profile": table},
        columns=PROFILE_COLUMNS,
        rows=tuple(table),
    )


def certificate_document(
    cert: Certificate,
    gaps: GapConstants | None = None,
    checks: Sequence[dict] = (),
) -> ExportDocument:
    payload = {"certificate": cert.to_dict(), "certificate_sha256": cert.sha256()}
    if gaps is not None:
        payload["gap_constants"] = gaps.to_dict()
    if checks:
        payload["checks"] = list(checks)
    return ExportDocument(entity_type=EntityType.CERTIFICATE, name="certificate", payload=payload)


def verification_document(report: VerificationReport) -> ExportDocument:
    return ExportDocument(
        entity_type=EntityType.VERIFICATION,
        name="verify",
        payload=report.to_dict(),
        columns=VERIFY_COLUMNS,
        rows=tuple(e.to_dict() for e in report.entries),
    )


def gap_document(report: GapReport) -> ExportDocument:
    return ExportDocument(
        entity_type=EntityType.GAP_REPORT,
        name="gap_scan",
        payload=report.to_dict(),
        columns=GAP_COLUMNS,
        rows=tuple(report.rows()),
    )


def phase_document(matrix: PhaseMatrix) -> ExportDocument:
    return ExportDocument(
        entity_type=EntityType.PHASE_MATRIX,
        name="phase",
        payload=matrix.to_dict(),
        columns=PHASE_COLUMNS,
        rows=tuple(matrix.rows()),
        notes=(matrix.label,),
    )
