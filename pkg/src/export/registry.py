"""Shifted Waring Lab: Export Registry.

Central registry for export plugins. Handles registration, lookup, and execution of
export operations, and writes the rendered files.
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

import structlog

from src.core.exceptions import ShiftLabError
from src.export.models import ExportDocument, ExportFormat, ExportResult, Provenance

if TYPE_CHECKING:
    from src.export.base import BaseExporter

logger = structlog.get_logger(__name__)


class ExportRegistry:
    """Central registry for export format plugins.

    Usage:
        registry = get_export_registry()
        result = registry.export(document, ExportFormat.CSV, provenance)
        path = registry.write(document, ExportFormat.SVG, provenance, out_dir)
    """

    def __init__(self) -> None:
        self._exporters: dict[str, BaseExporter] = {}

    def register(self, exporter: BaseExporter) -> None:
        format_id = exporter.format_id
        if format_id in self._exporters:
            logger.warning("export.replace", format_id=format_id)
        self._exporters[format_id] = exporter
        logger.debug("export.register", format_id=format_id, label=exporter.label)

    def get_exporter(self, format_id: str | ExportFormat) -> BaseExporter | None:
        if isinstance(format_id, ExportFormat):
            format_id = format_id.value
        return self._exporters.get(format_id)

    def export(
        self,
        document: ExportDocument,
        format_id: str | ExportFormat,
        provenance: Provenance,
    ) -> ExportResult:
        """Render ``document`` in ``format_id``; failures come back as unsuccessful results."""
        fid = format_id.value if isinstance(format_id, ExportFormat) else format_id
        exporter = self.get_exporter(fid)
        if exporter is None:
            logger.error("export.unknown_format", format_id=fid)
            return ExportResult(
                success=False,
                error=f"Export format '{fid}' not supported",
                entity_type=document.entity_type,
            )
        if document.entity_type not in exporter.supported_entity_types:
            return ExportResult(
                success=False,
                error=f"Entity type '{document.entity_type.value}' not supported by '{fid}' exporter",
                entity_type=document.entity_type,
                format_id=ExportFormat(fid),
            )
        try:
            result = exporter.generate(document, provenance)
        except (ValueError, KeyError, TypeError) as exc:
            logger.exception("export.failed", format_id=fid, entity=document.entity_type.value)
            return ExportResult(
                success=False,
                error=f"Export generation failed: {exc}",
                entity_type=document.entity_type,
                format_id=ExportFormat(fid),
            )
        if result.success and not result.filename:
            result.filename = exporter.generate_filename(document)
        result.entity_type = document.entity_type
        result.format_id = ExportFormat(fid)
        result.size_bytes = len(result.content or b"")
        return result

    def write(
        self,
        document: ExportDocument,
        format_id: str | ExportFormat,
        provenance: Provenance,
        out_dir: Path,
    ) -> Path:
        """Export and write to ``out_dir``; raises ShiftLabError if rendering failed."""
        result = self.export(document, format_id, provenance)
        if not result.success or result.content is None or result.filename is None:
            raise ShiftLabError(result.error or "export produced no content")
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / result.filename
        path.write_bytes(result.content)
        logger.info("export.written", path=str(path), size_bytes=result.size_bytes)
        return path


_registry: ExportRegistry | None = None


def get_export_registry() -> ExportRegistry:
    """Get or create the global registry with the built-in JSON, CSV and SVG exporters."""
    global _registry

    if _registry is None:
        _registry = ExportRegistry()

        from src.export.exporters.csv_exporter import CSVExporter
        from src.export.exporters.json_exporter import JSONExporter
        from src.export.exporters.svg import SVGExporter

        _registry.register(JSONExporter())
        _registry.register(CSVExporter())
        _registry.register(SVGExporter())

    return _registry


def reset_export_registry() -> None:
    """Reset the global registry (mainly for testing)."""
    global _registry
    _registry = None
