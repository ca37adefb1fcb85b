"""Tests for src.scan: gap scans, phase sweeps and their plot files."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import pytest

from src.certify import derive_constants, gap_constants
from src.certify.models import GapConstants
from src.core.exceptions import (
    GapInconsistencyError,
    PhaseMonotonicityError,
    PreconditionError,
    SearchBudgetExceededError,
)
from src.export.models import Provenance
from src.problem.model import Instance
from src.scan import (
    EXPLORATORY_LABEL,
    PhaseCell,
    PhaseMatrix,
    check_monotone,
    emit_plots,
    gap_scan,
    phase_sweep,
    predicted_radius,
    seeded_samples,
)
from src.search import SearchOptions

HALF = Fraction(1, 2)


@pytest.fixture
def gc22(inst22: Instance) -> GapConstants:
    return gap_constants(derive_constants(inst22), Fraction(1, 4))


def sweep(inst: Instance, coeff: Fraction, alphas: list[Fraction], betas: list[Fraction],
          **kwargs: object) -> PhaseMatrix:
    return phase_sweep(inst, [20, 40, 60], alphas, betas, coeff, **kwargs)  # type: ignore[arg-type]


class TestGapScan:
    def test_grid_around_witness_is_empty(self, gc22: GapConstants) -> None:
        report = gap_scan(gc22, 50, 5)
        assert report.tau0 == 5100
        assert report.predicted_radius == Fraction(1, 16)
        assert report.step == Fraction(1, 400)
        assert [p.j for p in report.points] == [-2, -1, 0, 1, 2]
        assert {p.status for p in report.points} == {"Empty"}
        assert report.measured_gap == Fraction(1, 200)
        assert report.complete
        assert report.certificate_sha256 == gc22.cert.sha256()

    def test_points_are_exact(self, gc22: GapConstants) -> None:
        report = gap_scan(gc22, 50, 3, step_divisor=5)
        assert [p.tau for p in report.points] == [
            Fraction(5100) - Fraction(1, 80), Fraction(5100), Fraction(5100) + Fraction(1, 80)
        ]
        # the witness floor shifted by the offset
        assert report.points[0].min_residual_exact == Fraction(29, 50) + Fraction(1, 80)

    def test_rows(self, gc22: GapConstants) -> None:
        rows = gap_scan(gc22, 50, 3).rows()
        assert rows[1]["offset"] == "0"
        assert all(row["within_predicted"] for row in rows)

    def test_predicted_radius_is_constant_for_squares(self, gc22: GapConstants) -> None:
        assert predicted_radius(gc22, Fraction(5100), 64) == gc22.C0

    def test_solutions_inside_the_gap_raise(self, gc22: GapConstants) -> None:
        loose = replace(gc22, C=Fraction(1))
        with pytest.raises(GapInconsistencyError) as info:
            gap_scan(loose, 50, 3)
        assert info.value.details["j"] == [-1, 0, 1]

    def test_budget_skips_points(self, gc22: GapConstants) -> None:
        report = gap_scan(gc22, 50, 3, options=SearchOptions(max_candidates=1))
        assert not report.complete
        assert {p.status for p in report.points} == {"skipped"}
        assert report.measured_gap is None

    def test_preconditions(self, gc22: GapConstants) -> None:
        with pytest.raises(PreconditionError):
            gap_scan(gc22, 10, 5)
        with pytest.raises(PreconditionError):
            gap_scan(gc22, 50, 4)
        with pytest.raises(PreconditionError):
            gap_scan(gc22, 50, 1)
        with pytest.raises(PreconditionError):
            gap_scan(gc22, 50, 5, step_divisor=0)

    def test_parallel_matches_serial(self, gc22: GapConstants) -> None:
        serial = gap_scan(gc22, 50, 7, options=SearchOptions(workers=1))
        parallel = gap_scan(gc22, 50, 7, options=SearchOptions(workers=3))
        assert serial.to_dict() == parallel.to_dict()


class TestPhaseSweep:
    def test_narrow_windows_never_solve(self, inst22: Instance) -> None:
        matrix = sweep(inst22, Fraction(1, 8), [Fraction(1, 4), HALF], [Fraction(-1), Fraction(0)])
        assert len(matrix.cells) == 4
        assert all(cell.density == 0 for cell in matrix.cells)
        assert matrix.complete
        assert matrix.label == EXPLORATORY_LABEL

    def test_wide_tolerance_always_solves(self, inst22: Instance) -> None:
        matrix = sweep(inst22, Fraction(1), [HALF], [Fraction(0)])
        cell = matrix.cell(HALF, Fraction(0))
        assert cell.density == 1
        assert cell.solutions == 3
        assert cell.estimate > 0

    def test_cells_in_row_major_order(self, inst22: Instance) -> None:
        alphas, betas = [Fraction(1, 4), HALF], [Fraction(-1), Fraction(0)]
        matrix = sweep(inst22, Fraction(1, 8), alphas, betas)
        assert [(c.alpha, c.beta) for c in matrix.cells] == [(a, b) for a in alphas for b in betas]

    def test_budget_skips_cells(self, inst22: Instance) -> None:
        matrix = sweep(inst22, Fraction(1), [HALF], [Fraction(0)],
                       options=SearchOptions(max_candidates=1))
        assert matrix.cells[0].skipped
        assert matrix.cells[0].density is None
        assert not matrix.complete

    def test_too_many_cells(self, inst22: Instance) -> None:
        with pytest.raises(SearchBudgetExceededError):
            sweep(inst22, Fraction(1), [HALF, Fraction(1, 4)], [Fraction(0), Fraction(-1)],
                  max_cells=3)

    def test_no_samples(self, inst22: Instance) -> None:
        matrix = phase_sweep(inst22, [], [HALF], [Fraction(0)], Fraction(1))
        assert matrix.cells == ()
        assert matrix.to_dict()["alphas"] == []

    def test_rejects_bad_input(self, inst22: Instance) -> None:
        with pytest.raises(PreconditionError):
            phase_sweep(inst22, [20], [HALF], [Fraction(0)], Fraction(0))
        with pytest.raises(PreconditionError):
            phase_sweep(inst22, [0], [HALF], [Fraction(0)], Fraction(1))

    def test_parallel_matches_serial(self, inst22: Instance) -> None:
        args = (Fraction(1, 2), [Fraction(1, 4), HALF], [Fraction(-1), Fraction(0)])
        serial = sweep(inst22, *args, options=SearchOptions(workers=1))
        parallel = sweep(inst22, *args, options=SearchOptions(workers=2))
        assert serial.to_dict() == parallel.to_dict()


class TestCheckMonotone:
    def test_decreasing_density_raises(self, inst22: Instance) -> None:
        matrix = PhaseMatrix(
            inst=inst22,
            alphas=(HALF,),
            betas=(Fraction(-1), Fraction(0)),
            coeff=Fraction(1),
            m_samples=(20, 40),
            cells=(
                PhaseCell(HALF, Fraction(-1), 2, solutions=2),
                PhaseCell(HALF, Fraction(0), 2, solutions=1, empty=1),
            ),
        )
        with pytest.raises(PhaseMonotonicityError):
            check_monotone(matrix)

    def test_skipped_cells_are_ignored(self, inst22: Instance) -> None:
        matrix = PhaseMatrix(
            inst=inst22,
            alphas=(HALF,),
            betas=(Fraction(-1), Fraction(0), Fraction(1)),
            coeff=Fraction(1),
            m_samples=(20, 40),
            cells=(
                PhaseCell(HALF, Fraction(-1), 2, solutions=1, empty=1),
                PhaseCell(HALF, Fraction(0), 2, skipped=True),
                PhaseCell(HALF, Fraction(1), 2, solutions=2),
            ),
        )
        check_monotone(matrix)


class TestSeededSamples:
    def test_reproducible(self) -> None:
        first = seeded_samples(3, 5, 10, 100)
        assert first == seeded_samples(3, 5, 10, 100)
        assert first == sorted(set(first))
        assert all(10 <= m <= 100 for m in first)

    def test_whole_range(self) -> None:
        assert seeded_samples(0, 4, 1, 4) == [1, 2, 3, 4]

    def test_rejects_bad_ranges(self) -> None:
        with pytest.raises(PreconditionError):
            seeded_samples(0, 5, 1, 3)
        with pytest.raises(PreconditionError):
            seeded_samples(0, 1, 5, 4)


class TestEmitPlots:
    def test_gap_report_files(self, gc22: GapConstants, tmp_path: Path) -> None:
        report = gap_scan(gc22, 50, 3)
        provenance = Provenance("scan", {"scan": {"m": 50}}, gc22.cert.sha256())
        paths = emit_plots(report, tmp_path, provenance)
        assert [p.name for p in paths] == ["gap_scan.csv", "gap_scan.svg"]
        csv_text = paths[0].read_text()
        assert "# certificate_sha256: " + gc22.cert.sha256() in csv_text
        assert "j,tau,offset,within_predicted,status,min_residual" in csv_text
        svg = paths[1].read_text()
        assert "<svg" in svg
        assert f"certificate_sha256={gc22.cert.sha256()}" in svg

    def test_phase_files(self, inst22: Instance, tmp_path: Path) -> None:
        matrix = sweep(inst22, Fraction(1), [HALF], [Fraction(0)])
        paths = emit_plots(matrix, tmp_path / "nested", Provenance("phase", {}))
        assert [p.name for p in paths] == ["phase.csv", "phase.svg"]
        assert "exploratory" in paths[0].read_text()

    def test_empty_results_are_refused(self, inst22: Instance, tmp_path: Path) -> None:
        matrix = phase_sweep(inst22, [], [HALF], [Fraction(0)], Fraction(1))
        with pytest.raises(PreconditionError):
            emit_plots(matrix, tmp_path, Provenance("phase", {}))
