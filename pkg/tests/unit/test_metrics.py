"""Tests for Observability Metrics: src/observability/metrics.py."""

from __future__ import annotations

from fractions import Fraction

from src.observability.metrics import (
    get_metrics_text,
    phase_cells_total,
    registry,
    scan_points_total,
    search_candidates_total,
    search_outcomes_total,
    verify_anomalies_total,
)
from src.problem.model import Instance, Tolerance
from src.search import SearchSpec, search


def sample(name: str, labels: dict[str, str]) -> float:
    return registry.get_sample_value(name, labels) or 0.0


class TestMetricsDefinitions:
    def test_labelled_counters(self) -> None:
        search_candidates_total.labels(fate="pruned").inc(0)
        scan_points_total.labels(status="Empty").inc(0)
        phase_cells_total.labels(state="skipped").inc(0)
        verify_anomalies_total.labels(k="2").inc(0)
        # No error means the labels match the definitions

    def test_search_records_outcome(self, inst22: Instance) -> None:
        labels = {"status": "Empty", "mode": "dfs"}
        before = sample("search_outcomes_total", labels)
        spec = SearchSpec(inst22, Fraction(220), Tolerance.absolute(Fraction(1, 2)), Fraction(2))
        outcome = search(spec)
        assert outcome.mode == "dfs"
        assert sample("search_outcomes_total", labels) == before + 1
        assert search_outcomes_total.labels(**labels) is not None


class TestMetricsOutput:
    def test_get_metrics_text_returns_bytes(self) -> None:
        output = get_metrics_text()
        assert isinstance(output, bytes)
        assert len(output) > 0

    def test_metrics_text_contains_search_counter(self) -> None:
        output = get_metrics_text().decode()
        assert "search_outcomes_total" in output
        assert "search_duration_seconds" in output
