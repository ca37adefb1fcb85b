"""Shifted Waring Lab: Search Domain Models.

Candidate, SearchSpec, SearchOptions and the certified SearchOutcome. Outcomes serialize
deterministically (no timings, sorted keys) so serial and parallel runs compare byte for
byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Literal

from src.numeric.ball import Ball, TriBool
from src.problem.model import Instance, Precision, Quantity, RadiusRule, Tolerance, Window

SearchMode = Literal["auto", "dfs", "mitm"]


class SearchStatus(str, Enum):
    SOLUTIONS = "Solutions"
    EMPTY = "Empty"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Candidate:
    """A window point with its residual enclosure |Σ(x_i − θ_i)^k − τ|."""

    x: tuple[int, ...]
    residual: Ball
    residual_exact: Fraction | None = None
    in_window: tuple[TriBool, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "x": list(self.x),
            "residual": self.residual.to_dict(),
            "residual_exact": None if self.residual_exact is None else str(self.residual_exact),
            "in_window": [t.value for t in self.in_window],
        }


@dataclass(frozen=True)
class SearchSpec:
    """What to search: instance, τ, η and the window radius (or a prebuilt window)."""

    inst: Instance
    tau: Fraction | Ball
    eta: Tolerance
    radius: Quantity
    radius_rule: str = "explicit"
    window: Window | None = None

    @classmethod
    def with_rule(
        cls, inst: Instance, tau: Fraction, eta: Tolerance, rule: RadiusRule
    ) -> SearchSpec:
        return cls(inst, tau, eta, rule.radius_for(inst, tau), rule.describe())


@dataclass(frozen=True)
class SearchOptions:
    precision: Precision = field(default_factory=Precision)
    max_candidates: int = 10**8
    workers: int = 1
    mode: SearchMode = "auto"
    prune: bool = True
    exact: bool = True


@dataclass
class SearchStats:
    enumerated: int = 0
    pruned: int = 0
    refinements: int = 0
    tasks: int = 0

    def merge(self, other: SearchStats) -> None:
        self.enumerated += other.enumerated
        self.pruned += other.pruned
        self.refinements += other.refinements
        self.tasks += other.tasks

    def to_dict(self) -> dict[str, int]:
        return {
            "enumerated": self.enumerated,
            "pruned": self.pruned,
            "refinements": self.refinements,
            "tasks": self.tasks,
        }


@dataclass(frozen=True)
class SearchOutcome:
    """Certified search result.

    Solutions: every listed candidate is certified in the window with residual < η.
    Empty: every window candidate is certified to have residual ≥ η.
    Undecided: no solution was certified and ``undecided`` lists what stayed Unknown.
    ``min_residual`` is None only for an empty window.
    """

    status: SearchStatus
    solutions: tuple[Candidate, ...]
    undecided: tuple[Candidate, ...]
    min_residual: Ball | None
    min_residual_exact: Fraction | None
    argmin: tuple[int, ...] | None
    stats: SearchStats
    window: Window
    eta: Tolerance
    tau: Fraction | Ball
    mode: str
    exact_path: bool

    @property
    def solution_points(self) -> list[tuple[int, ...]]:
        return [c.x for c in self.solutions]

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "solutions": [c.to_dict() for c in self.solutions],
            "undecided": [c.to_dict() for c in self.undecided],
            "min_residual": None if self.min_residual is None else self.min_residual.to_dict(),
            "min_residual_exact": (
                None if self.min_residual_exact is None else str(self.min_residual_exact)
            ),
            "argmin": None if self.argmin is None else list(self.argmin),
            "stats": self.stats.to_dict(),
            "window": self.window.to_dict(),
            "eta": self.eta.to_dict(),
            "tau": str(self.tau) if isinstance(self.tau, Fraction) else self.tau.to_dict(),
            "mode": self.mode,
            "exact_path": self.exact_path,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)
