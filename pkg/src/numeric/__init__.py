"""Exact rationals and dyadic ball arithmetic."""

from src.numeric.ball import (
    DEFAULT_PREC,
    Ball,
    Rat,
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

__all__ = [
    "DEFAULT_PREC",
    "Ball",
    "Rat",
    "TriBool",
    "arith",
    "ball_from_decimal",
    "ball_from_rat",
    "cmp_lt",
    "exact_root",
    "parse_rational",
    "pow_int",
    "precision_schedule",
    "root_bounds",
    "root_k",
]
