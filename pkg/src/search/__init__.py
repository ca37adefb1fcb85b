"""Shifted Waring Lab: Certified Window Search."""

from src.search.engine import search
from src.search.models import (
    Candidate,
    SearchOptions,
    SearchOutcome,
    SearchSpec,
    SearchStats,
    SearchStatus,
)
from src.search.profile import ProfileRow, min_residual_profile
from src.search.window import build_window, residual, residual_exact

__all__ = [
    "Candidate",
    "ProfileRow",
    "SearchOptions",
    "SearchOutcome",
    "SearchSpec",
    "SearchStats",
    "SearchStatus",
    "build_window",
    "min_residual_profile",
    "residual",
    "residual_exact",
    "search",
]
