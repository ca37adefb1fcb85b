"""Tests for src.numeric.ball: dyadic ball arithmetic and exact rationals."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.exceptions import BallDomainError, BallParseError
from src.numeric.ball import (
    Ball,
    TriBool,
    arith,
    ball_from_decimal,
    ball_from_rat,
    cmp_lt,
    exact_root,
    parse_rational,
    pow_int,
    precision_schedule,
    root_bounds,
    root_k,
)

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6)
dyadics = st.builds(lambda n, e: Fraction(n, 2**e), st.integers(-(10**6), 10**6), st.integers(0, 20))


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))


class TestParseRational:
    def test_decimal(self) -> None:
        assert parse_rational("0.3") == Fraction(3, 10)

    def test_fraction(self) -> None:
        assert parse_rational(" 3/10 ") == Fraction(3, 10)

    def test_exponent(self) -> None:
        assert parse_rational("1e-3") == Fraction(1, 1000)

    def test_negative(self) -> None:
        assert parse_rational("-2.5") == Fraction(-5, 2)

    @pytest.mark.parametrize("text", ["abc", "0.3.1", "", "1/0", "nan", "inf"])
    def test_malformed(self, text: str) -> None:
        with pytest.raises(BallParseError):
            parse_rational(text)


class TestBallConstruction:
    def test_dyadic_is_exact(self) -> None:
        b = ball_from_rat(Fraction(3, 4))
        assert b.is_exact
        assert b.mid == Fraction(3, 4)

    def test_non_dyadic_encloses(self) -> None:
        b = ball_from_rat(Fraction(1, 3), 64)
        assert not b.is_exact
        assert b.contains(Fraction(1, 3))
        assert b.rad <= Fraction(1, 2**62)

    def test_zero(self) -> None:
        assert ball_from_rat(0).is_exact
        assert ball_from_rat(0).contains(0)

    def test_from_decimal(self) -> None:
        assert ball_from_decimal("0.3").contains(Fraction(3, 10))

    def test_from_decimal_rejects_fraction_text(self) -> None:
        with pytest.raises(BallParseError):
            ball_from_decimal("3/10")

    def test_hull_dyadic_endpoints(self) -> None:
        b = Ball.hull(Fraction(1, 4), Fraction(3, 4))
        assert b.mid == Fraction(1, 2)
        assert b.rad == Fraction(1, 4)

    def test_hull_rejects_reversed(self) -> None:
        with pytest.raises(ValueError):
            Ball.hull(Fraction(1), Fraction(0))

    def test_negative_radius_rejected(self) -> None:
        with pytest.raises(ValueError):
            Ball(1, 0, -1, 0)

    def test_dict_round_trip(self) -> None:
        b = ball_from_rat(Fraction(22, 7), 96)
        assert Ball.from_dict(b.to_dict()) == b

    def test_abs(self) -> None:
        b = ball_from_rat(Fraction(-5, 3))
        assert b.abs().contains(Fraction(5, 3))
        assert b.abs().rad == b.rad


class TestArithmetic:
    def test_add_exact(self) -> None:
        assert (Ball.from_int(2) + Ball.from_int(3)).mid == 5

    def test_sub_and_neg(self) -> None:
        a, b = ball_from_rat(Fraction(1, 3)), ball_from_rat(Fraction(1, 7))
        assert (a - b).contains(Fraction(4, 21))
        assert arith("neg", a).contains(Fraction(-1, 3))

    def test_mul_contains(self) -> None:
        a, b = ball_from_rat(Fraction(1, 3)), ball_from_rat(Fraction(-2, 7))
        assert (a * b).contains(Fraction(-2, 21))

    def test_binary_op_needs_two_operands(self) -> None:
        with pytest.raises(ValueError):
            arith("add", Ball.from_int(1))

    def test_pow_int(self) -> None:
        assert pow_int(ball_from_rat(Fraction(1, 3)), 5).contains(Fraction(1, 243))
        assert (Ball.from_int(7) ** 0).mid == 1

    def test_pow_rejects_negative_exponent(self) -> None:
        with pytest.raises(ValueError):
            pow_int(Ball.from_int(2), -1)

    @given(a=st.builds(lambda n, e: Fraction(n, 2**e), st.integers(-1000, 1000), st.integers(0, 8)),
           j=st.integers(0, 6))
    def test_pow_int_equals_repeated_mul_when_exact(self, a: Fraction, j: int) -> None:
        x = ball_from_rat(a, 128)
        repeated = Ball.from_int(1, 128)
        for _ in range(j):
            repeated = repeated * x
        power = pow_int(x, j)
        assert power.is_exact and repeated.is_exact
        assert power.mid == repeated.mid == a**j

    @given(a=rationals, j=st.integers(0, 6))
    def test_pow_int_and_repeated_mul_enclose_the_power(self, a: Fraction, j: int) -> None:
        x = ball_from_rat(a, 53)
        repeated = Ball.from_int(1, 53)
        for _ in range(j):
            repeated = repeated * x
        power = pow_int(x, j)
        assert power.contains(a**j)
        assert repeated.contains(a**j)
        assert power.lower() <= repeated.upper() and repeated.lower() <= power.upper()

    @given(a=rationals, b=rationals)
    def test_product_containment_property(self, a: Fraction, b: Fraction) -> None:
        assert (ball_from_rat(a, 53) * ball_from_rat(b, 53)).contains(a * b)

    @given(a=rationals, b=rationals)
    def test_sum_containment_property(self, a: Fraction, b: Fraction) -> None:
        assert (ball_from_rat(a, 24) + ball_from_rat(b, 24)).contains(a + b)

    def test_randomized_containment_and_refinement(self) -> None:
        rng = random.Random(20240611)
        for _ in range(10_000):
            qa, qb, qc = (_random_rational(rng) for _ in range(3))
            j = rng.randint(0, 3)
            exact = ((qa + qb) * qc - qa) ** j
            prec = rng.choice([16, 32, 64])
            results = []
            for p in (prec, 2 * prec):
                a, b, c = (ball_from_rat(q, p) for q in (qa, qb, qc))
                results.append(((a + b) * c - a) ** j)
            coarse, fine = results
            assert coarse.contains(exact)
            assert fine.contains(exact)
            assert fine.rad <= 2 * coarse.rad


class TestComparison:
    def test_certain_true_and_false(self) -> None:
        third, half = ball_from_rat(Fraction(1, 3)), ball_from_rat(Fraction(1, 2))
        assert cmp_lt(third, half) == TriBool.TRUE
        assert cmp_lt(half, third) == TriBool.FALSE

    def test_equal_exact_values_are_not_less(self) -> None:
        assert cmp_lt(Ball.from_int(1), Ball.from_int(1)) == TriBool.FALSE

    def test_overlap_is_unknown(self) -> None:
        wide = Ball.hull(Fraction(0), Fraction(1))
        assert cmp_lt(wide, ball_from_rat(Fraction(1, 2))) == TriBool.UNKNOWN

    def test_tribool_and(self) -> None:
        assert TriBool.TRUE & TriBool.UNKNOWN == TriBool.UNKNOWN
        assert TriBool.FALSE & TriBool.UNKNOWN == TriBool.FALSE
        assert TriBool.TRUE & TriBool.TRUE == TriBool.TRUE

    @given(a=dyadics, b=dyadics)
    def test_exact_balls_decide_like_fractions(self, a: Fraction, b: Fraction) -> None:
        x, y = ball_from_rat(a, 64), ball_from_rat(b, 64)
        assert x.is_exact and y.is_exact
        assert cmp_lt(x, y) == TriBool.of(a < b)

    def test_randomized_comparisons_are_sound(self) -> None:
        rng = random.Random(31)
        for _ in range(5_000):
            a = _random_rational(rng)
            b = a if rng.random() < 0.1 else _random_rational(rng)
            verdict = cmp_lt(ball_from_rat(a, 64), ball_from_rat(b, 64))
            if verdict is TriBool.TRUE:
                assert a < b
            elif verdict is TriBool.FALSE:
                assert a >= b
            else:
                assert a == b


class TestRoots:
    def test_exact_root(self) -> None:
        assert exact_root(Fraction(9, 4), 2) == Fraction(3, 2)
        assert exact_root(Fraction(27), 3) == 3
        assert exact_root(Fraction(2), 2) is None

    def test_exact_root_negative(self) -> None:
        with pytest.raises(BallDomainError):
            exact_root(Fraction(-1), 3)

    def test_root_bounds_bracket(self) -> None:
        lo, hi = root_bounds(Fraction(2), 2, 64)
        assert lo**2 <= 2 <= hi**2
        assert hi - lo <= Fraction(1, 2**60)

    def test_root_bounds_exact_square(self) -> None:
        assert root_bounds(Fraction(4), 2, 32) == (Fraction(2), Fraction(2))

    def test_root_bounds_domain(self) -> None:
        with pytest.raises(BallDomainError):
            root_bounds(Fraction(0), 2, 32)

    def test_root_k_encloses(self) -> None:
        r = root_k(ball_from_rat(Fraction(5, 3), 128), 3)
        assert r.lower() ** 3 <= Fraction(5, 3) <= r.upper() ** 3

    def test_root_k_needs_positive_ball(self) -> None:
        with pytest.raises(BallDomainError):
            root_k(Ball.hull(Fraction(-1), Fraction(1)), 2)


class TestPrecisionSchedule:
    def test_doubling_to_cap(self) -> None:
        assert precision_schedule(128, 1000) == [128, 256, 512, 1000]

    def test_single_step(self) -> None:
        assert precision_schedule(64, 64) == [64]

    def test_invalid(self) -> None:
        with pytest.raises(ValueError):
            precision_schedule(64, 32)
