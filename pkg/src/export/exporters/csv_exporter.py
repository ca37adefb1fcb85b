"""Shifted Waring Lab: CSV Exporter.

Fixed header per entity type, preceded by ``#`` comment lines carrying the schema
version, command and provenance hashes.
"""

from __future__ import annotations

import csv
import io

from src.export.base import BaseExporter
from src.export.models import (
    SCHEMA_VERSION,
    EntityType,
    ExportDocument,
    ExportResult,
    Provenance,
)


class CSVExporter(BaseExporter):
    @property
    def format_id(self) -> str:
        return "csv"

    @property
    def label(self) -> str:
        return "CSV"

    @property
    def mime_type(self) -> str:
        return "text/csv"

    @property
    def extension(self) -> str:
        return ".csv"

    @property
    def supported_entity_types(self) -> list[EntityType]:
        return [
            EntityType.WITNESS_TABLE,
            EntityType.SEARCH_OUTCOME,
            EntityType.PROFILE,
            EntityType.VERIFICATION,
            EntityType.GAP_REPORT,
            EntityType.PHASE_MATRIX,
        ]

    def generate(self, document: ExportDocument, provenance: Provenance) -> ExportResult:
        if not document.columns:
            return ExportResult(success=False, error="document has no tabular view")
        buffer = io.StringIO()
        buffer.write(f"# schema_version: {SCHEMA_VERSION}\n")
        buffer.write(f"# command: {provenance.command}\n")
        buffer.write(f"# config_sha256: {provenance.config_sha256}\n")
        buffer.write(f"# certificate_sha256: {provenance.certificate_sha256 or ''}\n")
        for note in document.notes:
            buffer.write(f"# {note}\n")
        writer = csv.DictWriter(
            buffer, fieldnames=list(document.columns), extrasaction="ignore", lineterminator="\n"
        )
        writer.writeheader()
        for row in document.rows:
            writer.writerow({key: _cell(value) for key, value in row.items()})
        return ExportResult(
            success=True, content=buffer.getvalue().encode("utf-8"), mime_type=self.mime_type
        )


def _cell(value: object) -> object:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    return value
