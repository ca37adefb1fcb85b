"""Shifted Waring Lab: Prometheus Metrics Registry.

Counters and histograms for search, verification and scans. Metrics live in their own
registry and never enter the deterministic JSON/CSV/SVG outputs; the CLI can dump the
text exposition with ``--metrics FILE``.
"""

from __future__ import annotations

from prometheus_client import (
    CollectorRegistry,
    Counter,
    Histogram,
    generate_latest,
)


# ──────────────────────────────────────────────────────────────
# Shared registry (avoids global state pollution in tests)
# ──────────────────────────────────────────────────────────────

registry = CollectorRegistry()


# ──────────────────────────────────────────────────────────────
# Search Metrics
# ──────────────────────────────────────────────────────────────

search_candidates_total = Counter(
    "search_candidates_total",
    "Window candidates by fate",
    labelnames=["fate"],  # enumerated | pruned
    registry=registry,
)

search_refinements_total = Counter(
    "search_refinements_total",
    "Precision refinements triggered by Unknown comparisons",
    registry=registry,
)

search_outcomes_total = Counter(
    "search_outcomes_total",
    "Search outcomes by status",
    labelnames=["status", "mode"],
    registry=registry,
)

search_duration_seconds = Histogram(
    "search_duration_seconds",
    "Wall time of one certified window search",
    labelnames=["mode"],
    buckets=[0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0],
    registry=registry,
)


# ──────────────────────────────────────────────────────────────
# Certificate / Scan Metrics
# ──────────────────────────────────────────────────────────────

verify_anomalies_total = Counter(
    "verify_anomalies_total",
    "Witnesses past m0 whose search was not Empty",
    labelnames=["k"],
    registry=registry,
)

scan_points_total = Counter(
    "scan_points_total",
    "Gap-scan grid points by status",
    labelnames=["status"],
    registry=registry,
)

phase_cells_total = Counter(
    "phase_cells_total",
    "Phase-sweep cells by state",
    labelnames=["state"],  # complete | skipped
    registry=registry,
)


# ──────────────────────────────────────────────────────────────
# Convenience
# ──────────────────────────────────────────────────────────────

def get_metrics_text() -> bytes:
    """Render all metrics as Prometheus text exposition format."""
    return generate_latest(registry)
