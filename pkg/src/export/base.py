"""Shifted Waring Lab: Base Exporter Interface.

Defines the abstract base class that all exporters implement so the registry can drive
any format the same way. Generated content must be a pure function of the document and
its provenance: no timestamps, no host data.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

from src.export.models import EntityType, ExportDocument, ExportResult, Provenance


class BaseExporter(ABC):
    """Abstract base class for export format implementations."""

    @property
    @abstractmethod
    def format_id(self) -> str:
        """Unique machine-readable identifier, e.g. ``"csv"``."""
        ...

    @property
    @abstractmethod
    def label(self) -> str: ...

    @property
    @abstractmethod
    def mime_type(self) -> str: ...

    @property
    @abstractmethod
    def extension(self) -> str:
        """Default file extension including the dot."""
        ...

    @property
    @abstractmethod
    def supported_entity_types(self) -> list[EntityType]: ...

    @abstractmethod
    def generate(self, document: ExportDocument, provenance: Provenance) -> ExportResult:
        """Render the document; return an ExportResult carrying content or an error."""
        ...

    def generate_filename(self, document: ExportDocument) -> str:
        return f"{document.name}{self.extension}"
