"""End-to-end runs of the lab pipeline on the reference instances.

Each class drives one experiment through the public API (or the CLI runner) and checks the
exact values the experiment is expected to reproduce.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from src.certify import check_certificate, closing_checks, derive_constants, gap_constants, verify_certificate
from src.cli.config import parse_config
from src.cli.main import run
from src.problem.model import Instance, RadiusRule, Tolerance, validate_instance
from src.problem.witness import tau_value
from src.scan import gap_scan, phase_sweep
from src.search import SearchSpec, SearchStatus, search

INSTANCES = {
    (2, 2): ["0.3", "0.7"],
    (3, 2): ["0.25", "0.5", "0.75"],
    (2, 3): ["0.3", "0.7"],
    (3, 3): ["0.25", "0.5", "0.75"],
}


def instance(s: int, k: int) -> Instance:
    return validate_instance({"s": s, "k": k, "theta": INSTANCES[(s, k)]})


@pytest.mark.slow
class TestWitnessFamilyIsEmpty:
    @pytest.mark.parametrize(("s", "k"), list(INSTANCES))
    def test_verify_past_m0(self, s: int, k: int) -> None:
        cert = derive_constants(instance(s, k))
        report = verify_certificate(cert, cert.m0, cert.m0 + 10)
        assert report.anomalies == ()
        assert report.complete
        assert set(report.verdicts.values()) == {SearchStatus.EMPTY.value}


class TestMinimumResidualFloor:
    @pytest.mark.parametrize("m", [10, 50, 100])
    def test_floor_and_sharpness(self, inst22: Instance, m: int) -> None:
        tau = tau_value(inst22, m)

        def outcome(eta: str):
            spec = SearchSpec.with_rule(
                inst22, tau, Tolerance.absolute(Fraction(eta)), RadiusRule(Fraction(2))
            )
            return search(spec)

        empty = outcome("1/2")
        assert empty.status == SearchStatus.EMPTY
        assert empty.min_residual_exact == Fraction(29, 50)
        assert empty.argmin == (m + 1, m + 1)
        assert outcome("3/5").solution_points == [(m + 1, m + 1)]


class TestCertificateAudit:
    @pytest.mark.parametrize(("s", "k"), list(INSTANCES))
    def test_all_inequalities_hold(self, s: int, k: int) -> None:
        cert = derive_constants(instance(s, k))
        for m in (cert.m0, 4 * cert.m0):
            assert all(ineq.holds for ineq in check_certificate(cert, m))
        assert all(ineq.holds for ineq in closing_checks(gap_constants(cert, 1)))


@pytest.mark.slow
class TestGapScan:
    def test_full_grid_is_empty_within_prediction(self, inst22: Instance) -> None:
        gc = gap_constants(derive_constants(inst22), Fraction(1, 4))
        report = gap_scan(gc, 50, 101)
        inside = [p for p in report.points if abs(p.tau - report.tau0) <= report.predicted_radius]
        assert len(inside) == 51
        assert {p.status for p in inside} == {SearchStatus.EMPTY.value}
        assert report.measured_gap is not None
        assert report.measured_gap >= report.predicted_radius


class TestPhaseSanity:
    def test_certified_regime_and_solvable_corner(self, inst22: Instance) -> None:
        cert = derive_constants(inst22)
        coeff = min(cert.c, cert.c_prime)
        betas = [Fraction(-1), Fraction(-1, 2), Fraction(0)]
        certified = phase_sweep(inst22, [20, 40, 60], [Fraction(1, 4), Fraction(1, 2)], betas, coeff)
        assert {cell.density for cell in certified.cells} == {0}

        solvable = phase_sweep(inst22, [20, 40, 60], [Fraction(1, 2)], betas, Fraction(1))
        assert solvable.cell(Fraction(1, 2), Fraction(0)).density == 1
        densities = [solvable.cell(Fraction(1, 2), b).density for b in betas]
        assert densities == sorted(densities)  # type: ignore[type-var]


@pytest.mark.slow
class TestDeterminism:
    CONFIG = {
        "search": {"m": 12, "eta": "2", "radius": "3"},
        "instance": {"s": 3, "k": 2, "theta": ["0.25", "0.5", "0.75"]},
        "verify": {"span": 4},
        "scan": {"m": 130, "grid_points": 9},
        "phase": {"m_samples": [20, 30], "coeff": "1"},
    }

    @pytest.mark.parametrize("command", ["search", "verify", "scan", "phase"])
    def test_serial_and_parallel_outputs_are_identical(self, command: str, tmp_path: Path) -> None:
        cfg = parse_config(self.CONFIG)
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        assert run(command, cfg, serial, workers=1) == run(command, cfg, parallel, workers=3)
        names = sorted(p.name for p in serial.iterdir())
        assert names == sorted(p.name for p in parallel.iterdir())
        for name in names:
            assert (serial / name).read_bytes() == (parallel / name).read_bytes(), name
