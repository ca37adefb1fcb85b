"""Tests for src.search.engine: certified search against an exact brute-force oracle."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.exceptions import SearchBudgetExceededError
from src.numeric.ball import Ball, TriBool, ball_from_rat
from src.problem.model import (
    Instance,
    Precision,
    RadiusRule,
    ScaledRoot,
    Tolerance,
    membership_exact,
    validate_instance,
)
from src.problem.witness import tau_value
from src.search import (
    SearchOptions,
    SearchSpec,
    SearchStatus,
    min_residual_profile,
    residual_exact,
    search,
)


def brute_force(
    inst: Instance, tau: Fraction, eta: Fraction, radius: Fraction
) -> tuple[str, list[tuple[int, ...]], Fraction | None, tuple[int, ...] | None]:
    """Plain enumeration in exact rationals, independent of the engine."""
    q = tau / inst.s
    members = []
    x = 1
    while (x - radius) <= 0 or (x - radius) ** inst.k < q:
        if membership_exact(x, q, inst.k, radius):
            members.append(x)
        x += 1
    solutions: list[tuple[int, ...]] = []
    best: Fraction | None = None
    argmin: tuple[int, ...] | None = None
    for point in itertools.product(members, repeat=inst.s):
        value = residual_exact(inst, point, tau)
        if value < eta:
            solutions.append(point)
        if best is None or value < best:
            best, argmin = value, point
    status = "Solutions" if solutions else "Empty"
    return status, solutions, best, argmin


def random_spec(rng: random.Random) -> tuple[Instance, Fraction, Fraction, Fraction]:
    s = rng.choice([2, 3, 4])
    k = rng.choice([2, 2, 3])
    theta = [Fraction(rng.randint(1, d - 1), d) for d in (rng.randint(2, 12) for _ in range(s))]
    inst = validate_instance({"s": s, "k": k, "theta": theta})
    m = rng.randint(2, 25)
    tau = s * Fraction(m) ** k + Fraction(rng.randint(-40, 40), rng.randint(1, 6))
    if tau <= 0:
        tau = Fraction(s * m**k)
    radius = Fraction(rng.randint(1, 5), 2)
    eta = Fraction(rng.randint(1, 24), 4) * (1 if k == 2 else m)
    return inst, tau, eta, radius


def run(inst: Instance, tau: Fraction, eta: Fraction, radius: Fraction, **opts: object):
    spec = SearchSpec(inst, tau, Tolerance.absolute(eta), radius)
    return search(spec, SearchOptions(**opts))  # type: ignore[arg-type]


class TestWitnessFloor:
    @pytest.mark.parametrize("m", [10, 50, 100])
    def test_minimum_residual_is_29_over_50(self, inst22: Instance, m: int) -> None:
        outcome = run(inst22, tau_value(inst22, m), Fraction(1, 2), Fraction(2))
        assert outcome.status == SearchStatus.EMPTY
        assert outcome.min_residual_exact == Fraction(29, 50)
        assert outcome.argmin == (m + 1, m + 1)
        assert outcome.min_residual is not None
        assert outcome.min_residual.contains(Fraction(29, 50))

    def test_sharpness_above_floor(self, inst22: Instance) -> None:
        outcome = run(inst22, Fraction(220), Fraction(3, 5), Fraction(2))
        assert outcome.status == SearchStatus.SOLUTIONS
        assert outcome.solution_points == [(11, 11)]
        assert outcome.solutions[0].residual_exact == Fraction(29, 50)
        assert outcome.solutions[0].in_window == (TriBool.TRUE, TriBool.TRUE)

    def test_strict_inequality_at_the_floor(self, inst22: Instance) -> None:
        outcome = run(inst22, Fraction(220), Fraction(29, 50), Fraction(2))
        assert outcome.status == SearchStatus.EMPTY


class TestOracleEquivalence:
    def test_randomized_specs_match_brute_force(self) -> None:
        rng = random.Random(7)
        statuses = set()
        for _ in range(120):
            inst, tau, eta, radius = random_spec(rng)
            status, solutions, best, argmin = brute_force(inst, tau, eta, radius)
            outcome = run(inst, tau, eta, radius)
            assert outcome.status.value == status
            assert outcome.solution_points == solutions
            assert outcome.min_residual_exact == best
            assert outcome.argmin == argmin
            statuses.add(status)
        assert statuses == {"Solutions", "Empty"}

    def test_mitm_matches_dfs(self) -> None:
        rng = random.Random(11)
        for _ in range(40):
            inst, tau, eta, radius = random_spec(rng)
            dfs = run(inst, tau, eta, radius, mode="dfs")
            mitm = run(inst, tau, eta, radius, mode="mitm")
            assert mitm.mode == "mitm"
            assert mitm.status == dfs.status
            assert mitm.solution_points == dfs.solution_points
            assert mitm.min_residual_exact == dfs.min_residual_exact
            assert mitm.argmin == dfs.argmin

    def test_pruning_does_not_change_results(self) -> None:
        rng = random.Random(13)
        for _ in range(40):
            inst, tau, eta, radius = random_spec(rng)
            pruned = run(inst, tau, eta, radius, prune=True)
            full = run(inst, tau, eta, radius, prune=False)
            assert pruned.to_dict() | {"stats": None} == full.to_dict() | {"stats": None}
            assert full.stats.pruned == 0
            assert full.stats.enumerated == full.window.candidate_count()

    def test_pruning_skips_work(self, inst32: Instance) -> None:
        outcome = run(inst32, tau_value(inst32, 20), Fraction(1, 2), Fraction(3))
        assert outcome.stats.pruned > 0
        assert outcome.stats.enumerated + outcome.stats.pruned == outcome.window.candidate_count()


class TestModesAndPaths:
    def test_auto_picks_mitm_for_wide_four_variable_windows(self) -> None:
        inst = validate_instance({"s": 4, "k": 2, "theta": ["0.1", "0.2", "0.3", "0.4"]})
        outcome = run(inst, Fraction(4 * 30**2), Fraction(1, 10), Fraction(5))
        assert outcome.mode == "mitm"

    def test_ball_path_agrees_on_status(self, inst22: Instance) -> None:
        exact = run(inst22, Fraction(220), Fraction(3, 5), Fraction(2))
        balls = run(inst22, Fraction(220), Fraction(3, 5), Fraction(2), exact=False)
        assert not balls.exact_path
        assert balls.mode == "ball"
        assert balls.status == exact.status
        assert balls.solution_points == exact.solution_points
        assert balls.argmin == exact.argmin
        assert balls.min_residual is not None
        assert balls.min_residual.contains(Fraction(29, 50))

    def test_ball_tau(self, inst22: Instance) -> None:
        tau = ball_from_rat(Fraction(2201, 10), 128)
        spec = SearchSpec(inst22, tau, Tolerance.absolute(Fraction(1, 4)), Fraction(2))
        outcome = search(spec)
        assert outcome.mode == "ball"
        assert outcome.min_residual_exact is None
        assert outcome.status == SearchStatus.EMPTY

    def test_unresolvable_point_is_undecided(self, inst22: Instance) -> None:
        # τ known only to ±1/2 around 220.58: (11,11) can be neither accepted nor rejected
        tau = Ball.hull(Fraction(22008, 100), Fraction(22108, 100))
        spec = SearchSpec(inst22, tau, Tolerance.absolute(Fraction(1, 10)), Fraction(2))
        outcome = search(spec)
        assert outcome.status == SearchStatus.UNDECIDED
        assert (11, 11) in [c.x for c in outcome.undecided]
        assert outcome.stats.refinements > 0

    def test_scaled_tolerance_on_exact_path(self, inst23: Instance) -> None:
        tau = tau_value(inst23, 6)
        eta = Tolerance.scaled(Fraction(1, 2), inst23, tau)
        assert isinstance(eta.value, ScaledRoot) and eta.exact is None
        spec = SearchSpec.with_rule(inst23, tau, eta, RadiusRule(Fraction(1, 4), scaled=True))
        outcome = search(spec)
        assert outcome.exact_path
        assert outcome.status == SearchStatus.EMPTY

    def test_empty_window(self, inst22: Instance) -> None:
        # center √110.25 = 10.5 exactly, |x − 10.5| < 1/2 has no integer
        outcome = run(inst22, Fraction(441, 2), Fraction(1), Fraction(1, 2))
        assert outcome.window.is_empty
        assert outcome.status == SearchStatus.EMPTY
        assert outcome.min_residual is None
        assert outcome.argmin is None

    def test_budget_refusal(self, inst22: Instance) -> None:
        with pytest.raises(SearchBudgetExceededError) as info:
            run(inst22, Fraction(220), Fraction(1), Fraction(2), max_candidates=10)
        assert info.value.estimate == 16
        assert info.value.budget == 10


class TestDeterminism:
    def test_serial_and_parallel_outputs_identical(self, inst32: Instance) -> None:
        tau = tau_value(inst32, 15) + 1
        serial = run(inst32, tau, Fraction(2), Fraction(3), workers=1)
        parallel = run(inst32, tau, Fraction(2), Fraction(3), workers=3)
        assert serial.to_json() == parallel.to_json()
        assert serial.stats.tasks == serial.window.width


class TestProfile:
    def test_profile_rows(self, inst22: Instance) -> None:
        rows = min_residual_profile(inst22, [10, 20], RadiusRule(Fraction(2)))
        assert [r.m for r in rows] == [10, 20]
        assert all(r.min_residual_exact == Fraction(29, 50) for r in rows)
        assert all(r.status == SearchStatus.SOLUTIONS for r in rows)
        assert rows[0].to_dict()["argmin"] == [11, 11]
class TestResidualIdentity:
    @given(
        theta=st.lists(
            st.fractions(Fraction(1, 50), Fraction(49, 50), max_denominator=50),
            min_size=2,
            max_size=4,
        ),
        offsets=st.lists(st.integers(-4, 4), min_size=3, max_size=3),
        m=st.integers(10, 10**4),
    )
    def test_quadratic_residual_at_witness(
        self, theta: list[Fraction], offsets: list[int], m: int
    ) -> None:
        inst = validate_instance({"s": len(theta), "k": 2, "theta": theta})
        head = offsets[: inst.s - 1]
        a = [*head, inst.s - sum(head)]
        x = [m + ai for ai in a]
        expected = sum(((ai - t) ** 2 for ai, t in zip(a, theta, strict=True)), Fraction(0))
        assert residual_exact(inst, x, tau_value(inst, m)) == expected


class TestPrecisionCap:
    def test_raising_the_cap_never_flips_a_verdict(self) -> None:
        rng = random.Random(17)
        for _ in range(30):
            inst, tau, eta, radius = random_spec(rng)
            exact = run(inst, tau, eta, radius).status
            verdicts = [
                run(inst, tau, eta, radius, exact=False, precision=Precision(8, cap)).status
                for cap in (8, 32, 256)
            ]
            decided = {v for v in verdicts if v is not SearchStatus.UNDECIDED}
            assert decided <= {exact}
