"""Shifted Waring Lab: SVG Exporter.

Draws the two plots the scans produce with matplotlib: a strip chart of grid statuses
around τ₀ for a gap report, and a heatmap of solution density for a phase matrix. The
SVG is written with a fixed hash salt and no date so the same document always renders
to the same bytes; provenance hashes go into the SVG metadata description.
"""

from __future__ import annotations

import io
from fractions import Fraction
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.axes import Axes  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from src.export.base import BaseExporter  # noqa: E402
from src.export.models import EntityType, ExportDocument, ExportResult, Provenance  # noqa: E402

STATUS_COLOURS = {
    "Empty": "#2b8a3e",
    "Solutions": "#c92a2a",
    "Undecided": "#f08c00",
    "skipped": "#adb5bd",
}
SVG_RC = {
    "svg.hashsalt": "shiftlab",
    "svg.fonttype": "none",
    "font.family": "monospace",
    "font.size": 9,
}


def _svg_metadata(provenance: Provenance) -> dict[str, Any]:
    return {
        "Title": provenance.command,
        "Creator": "shiftlab",
        "Date": None,
        "Description": (
            f"config_sha256={provenance.config_sha256} "
            f"certificate_sha256={provenance.certificate_sha256 or ''}"
        ),
    }


class SVGExporter(BaseExporter):
    @property
    def format_id(self) -> str:
        return "svg"

    @property
    def label(self) -> str:
        return "SVG"

    @property
    def mime_type(self) -> str:
        return "image/svg+xml"

    @property
    def extension(self) -> str:
        return ".svg"

    @property
    def supported_entity_types(self) -> list[EntityType]:
        return [EntityType.GAP_REPORT, EntityType.PHASE_MATRIX]

    def generate(self, document: ExportDocument, provenance: Provenance) -> ExportResult:
        buffer = io.BytesIO()
        with plt.rc_context(SVG_RC):
            fig, ax = plt.subplots(figsize=(8, 2.4) if self._is_gap(document) else (5, 4))
            try:
                if self._is_gap(document):
                    self._gap_strip(ax, document.payload)
                else:
                    self._phase_heatmap(fig, ax, document.payload)
                fig.tight_layout()
                fig.savefig(buffer, format="svg", metadata=_svg_metadata(provenance))
            finally:
                plt.close(fig)
        return ExportResult(success=True, content=buffer.getvalue(), mime_type=self.mime_type)

    @staticmethod
    def _is_gap(document: ExportDocument) -> bool:
        return document.entity_type == EntityType.GAP_REPORT

    def _gap_strip(self, ax: Axes, payload: dict[str, Any]) -> None:
        tau0 = Fraction(payload["tau0"])
        radius = float(Fraction(payload["predicted_radius"]))
        points = payload["points"]
        offsets = [float(Fraction(p["tau"]) - tau0) for p in points]
        colours = [STATUS_COLOURS.get(p["status"], STATUS_COLOURS["skipped"]) for p in points]

        ax.axvspan(-radius, radius, facecolor="#e7f5ff", edgecolor="#1c7ed6", linestyle="--")
        ax.axhline(0, color="#495057", lw=0.8)
        ax.scatter(offsets, [0] * len(offsets), c=colours, s=18, zorder=3)
        ax.set_yticks([])
        ax.set_xlabel("tau - tau0")
        ax.set_title(
            f"m={payload['m']} tau0={payload['tau0']} predicted={payload['predicted_radius']} "
            f"measured={payload['measured_gap']}"
        )
        seen = sorted({p["status"] for p in points})
        handles = [Patch(color=STATUS_COLOURS.get(s, STATUS_COLOURS["skipped"]), label=s) for s in seen]
        ax.legend(handles=handles, loc="upper right", fontsize=7)

    def _phase_heatmap(self, fig: Figure, ax: Axes, payload: dict[str, Any]) -> None:
        alphas: list[str] = payload["alphas"]
        betas: list[str] = payload["betas"]
        cells = {(c["alpha"], c["beta"]): c for c in payload["cells"]}
        grid = [
            [
                float("nan")
                if (cell := cells.get((alpha, beta))) is None or cell["density"] is None
                else float(Fraction(cell["density"]))
                for beta in betas
            ]
            for alpha in alphas
        ]
        cmap = matplotlib.colormaps["Reds"].with_extremes(bad=STATUS_COLOURS["skipped"])
        mesh = ax.pcolormesh(grid, cmap=cmap, vmin=0, vmax=1, edgecolors="#495057", linewidth=0.5)
        ax.set_xticks([j + 0.5 for j in range(len(betas))], labels=betas)
        ax.set_yticks([i + 0.5 for i in range(len(alphas))], labels=alphas)
        ax.invert_yaxis()
        ax.set_xlabel("beta")
        ax.set_ylabel("alpha")
        ax.set_title(payload["label"], fontsize=7)
        fig.colorbar(mesh, ax=ax, label="density")
