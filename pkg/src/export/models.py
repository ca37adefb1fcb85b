"""Shifted Waring Lab: Export Domain Models.

Every result the lab writes is first turned into an ExportDocument: a JSON-ready payload
plus the fixed-column rows of its CSV view. Exporters only ever see documents.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any

SCHEMA_VERSION = 1


class EntityType(str, Enum):
    """Kinds of results that can be exported."""

    WITNESS_TABLE = "witness_table"
    SEARCH_OUTCOME = "search_outcome"
    PROFILE = "profile"
    CERTIFICATE = "certificate"
    VERIFICATION = "verification"
    GAP_REPORT = "gap_report"
    PHASE_MATRIX = "phase_matrix"


class ExportFormat(str, Enum):
    """Supported export formats."""

    JSON = "json"
    CSV = "csv"
    SVG = "svg"


def sha256_of(data: Any) -> str:
    """Digest of the canonical (sorted, compact) JSON form of ``data``."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass(frozen=True)
class Provenance:
    """Where an output came from: command, effective config and certificate hash."""

    command: str
    config: dict[str, Any]
    certificate_sha256: str | None = None

    @property
    def config_sha256(self) -> str:
        return sha256_of(self.config)

    def header(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "config_sha256": self.config_sha256,
            "certificate_sha256": self.certificate_sha256,
        }


@dataclass(frozen=True)
class ExportDocument:
    """Canonical exportable form of one result."""

    entity_type: EntityType
    name: str
    payload: dict[str, Any]
    columns: tuple[str, ...] = ()
    rows: tuple[dict[str, Any], ...] = ()
    notes: tuple[str, ...] = ()


@dataclass
class ExportResult:
    """Result of an export operation: the generated content or an error."""

    success: bool
    content: bytes | None = None
    mime_type: str | None = None
    filename: str | None = None
    error: str | None = None
    entity_type: EntityType | None = None
    format_id: ExportFormat | None = None
    size_bytes: int = 0

