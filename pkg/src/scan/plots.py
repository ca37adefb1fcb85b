"""CSV and SVG companions for gap reports and phase matrices."""

from __future__ import annotations

from pathlib import Path

from src.core.exceptions import PreconditionError
from src.export.documents import gap_document, phase_document
from src.export.models import ExportFormat, Provenance
from src.export.registry import get_export_registry
from src.scan.models import GapReport, PhaseMatrix


def emit_plots(report: GapReport | PhaseMatrix, out_dir: Path, provenance: Provenance) -> list[Path]:
    """Write ``<name>.csv`` and ``<name>.svg`` into ``out_dir``; returns the paths written."""
    if isinstance(report, GapReport):
        if not report.points:
            raise PreconditionError("gap report has no grid points")
        document = gap_document(report)
    else:
        if not report.cells:
            raise PreconditionError("phase matrix has no cells")
        document = phase_document(report)
    registry = get_export_registry()
    return [
        registry.write(document, fmt, provenance, out_dir)
        for fmt in (ExportFormat.CSV, ExportFormat.SVG)
    ]
