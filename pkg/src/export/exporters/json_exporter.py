"""Shifted Waring Lab: JSON Exporter.

Wraps the document payload in the versioned provenance envelope. Keys are sorted and
nothing time-dependent is written, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import json

from src.export.base import BaseExporter
from src.export.models import EntityType, ExportDocument, ExportResult, Provenance


class JSONExporter(BaseExporter):
    @property
    def format_id(self) -> str:
        return "json"

    @property
    def label(self) -> str:
        return "JSON"

    @property
    def mime_type(self) -> str:
        return "application/json"

    @property
    def extension(self) -> str:
        return ".json"

    @property
    def supported_entity_types(self) -> list[EntityType]:
        return list(EntityType)

    def generate(self, document: ExportDocument, provenance: Provenance) -> ExportResult:
        envelope = {**provenance.header(), "entity_type": document.entity_type.value}
        if document.notes:
            envelope["notes"] = list(document.notes)
        envelope["result"] = document.payload
        text = json.dumps(envelope, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        return ExportResult(success=True, content=text.encode("utf-8"), mime_type=self.mime_type)
