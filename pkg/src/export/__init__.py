"""Shifted Waring Lab: Export System.

Pluggable export of lab results. Every result is first turned into an ExportDocument
(see ``documents``), then rendered by a registered exporter:

- JSON (.json): versioned envelope with config echo and hashes
- CSV (.csv): fixed columns behind ``#`` provenance comments
- SVG (.svg): gap strip chart and phase heatmap

To add a new exporter:
1. Create a new exporter class in src/export/exporters/
2. Inherit from BaseExporter
3. Register in get_export_registry()
"""

from src.export.base import BaseExporter
from src.export.models import (
    SCHEMA_VERSION,
    EntityType,
    ExportDocument,
    ExportFormat,
    ExportResult,
    Provenance,
    sha256_of,
)
from src.export.registry import ExportRegistry, get_export_registry, reset_export_registry

__all__ = [
    "SCHEMA_VERSION",
    "BaseExporter",
    "EntityType",
    "ExportDocument",
    "ExportFormat",
    "ExportRegistry",
    "ExportResult",
    "Provenance",
    "get_export_registry",
    "reset_export_registry",
    "sha256_of",
]
