"""Shifted Waring Lab: Scan Domain Models."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from src.problem.model import Instance

EXPLORATORY_LABEL = "exploratory: outside the certified regime, no emptiness claim"


@dataclass(frozen=True)
class GapPoint:
    j: int
    tau: Fraction
    status: str  # a SearchStatus value, or "skipped"
    min_residual_exact: Fraction | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "j": self.j,
            "tau": str(self.tau),
            "status": self.status,
            "min_residual_exact": (
                None if self.min_residual_exact is None else str(self.min_residual_exact)
            ),
        }


@dataclass(frozen=True)
class GapReport:
    """Grid statuses around a witness τ₀ and the measured solution-free interval.

    ``measured_gap`` is the largest j·step with every grid point within it Empty, or None
    when τ₀ itself is not Empty.
    """

    m: int
    tau0: Fraction
    predicted_radius: Fraction
    step: Fraction
    grid_points: int
    points: tuple[GapPoint, ...]
    measured_gap: Fraction | None
    certificate_sha256: str
    eta_rule: str
    radius_rule: str

    @property
    def complete(self) -> bool:
        return all(p.status != "skipped" for p in self.points)

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "tau0": str(self.tau0),
            "predicted_radius": str(self.predicted_radius),
            "step": str(self.step),
            "grid_points": self.grid_points,
            "points": [p.to_dict() for p in self.points],
            "measured_gap": None if self.measured_gap is None else str(self.measured_gap),
            "complete": self.complete,
            "certificate_sha256": self.certificate_sha256,
            "eta_rule": self.eta_rule,
            "radius_rule": self.radius_rule,
        }

    def rows(self) -> list[dict[str, Any]]:
        return [
            {
                "j": p.j,
                "tau": str(p.tau),
                "offset": str(p.tau - self.tau0),
                "within_predicted": abs(p.tau - self.tau0) <= self.predicted_radius,
                "status": p.status,
                "min_residual": "" if p.min_residual_exact is None else str(p.min_residual_exact),
            }
            for p in self.points
        ]


@dataclass(frozen=True)
class PhaseCell:
    """Solvability fractions of one (α, β) cell; None fractions mean the cell was skipped."""

    alpha: Fraction
    beta: Fraction
    samples: int
    solutions: int = 0
    empty: int = 0
    undecided: int = 0
    skipped: bool = False
    estimate: int = 0

    @property
    def density(self) -> Fraction | None:
        return None if self.skipped or not self.samples else Fraction(self.solutions, self.samples)

    @property
    def empty_fraction(self) -> Fraction | None:
        return None if self.skipped or not self.samples else Fraction(self.empty, self.samples)

    @property
    def undecided_fraction(self) -> Fraction | None:
        return None if self.skipped or not self.samples else Fraction(self.undecided, self.samples)

    def to_dict(self) -> dict[str, Any]:
        def show(q: Fraction | None) -> str | None:
            return None if q is None else str(q)

        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "samples": self.samples,
            "density": show(self.density),
            "empty_fraction": show(self.empty_fraction),
            "undecided_fraction": show(self.undecided_fraction),
            "skipped": self.skipped,
            "candidate_estimate": self.estimate,
        }


@dataclass(frozen=True)
class PhaseMatrix:
    inst: Instance
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]
    coeff: Fraction
    m_samples: tuple[int, ...]
    cells: tuple[PhaseCell, ...]
    seed: int | None = None
    label: str = EXPLORATORY_LABEL

    @property
    def complete(self) -> bool:
        return not any(cell.skipped for cell in self.cells)

    def cell(self, alpha: Fraction, beta: Fraction) -> PhaseCell:
        for c in self.cells:
            if c.alpha == alpha and c.beta == beta:
                return c
        raise KeyError((alpha, beta))

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "instance": self.inst.to_dict(),
            "alphas": [str(a) for a in self.alphas],
            "betas": [str(b) for b in self.betas],
            "coeff": str(self.coeff),
            "m_samples": list(self.m_samples),
            "seed": self.seed,
            "cells": [c.to_dict() for c in self.cells],
            "complete": self.complete,
        }

    def rows(self) -> list[dict[str, Any]]:
        return [
            {"label": "exploratory", **{k: ("" if v is None else v) for k, v in c.to_dict().items()}}
            for c in self.cells
        ]
