"""Shifted Waring Lab: Minimum-Residual Profile over the Witness Family."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from src.numeric.ball import Ball
from src.problem.model import Instance, RadiusRule, Tolerance
from src.problem.witness import tau_value
from src.search.engine import search
from src.search.models import SearchOptions, SearchSpec, SearchStatus


@dataclass(frozen=True)
class ProfileRow:
    m: int
    tau: Fraction
    status: SearchStatus
    min_residual: Ball | None
    min_residual_exact: Fraction | None
    argmin: tuple[int, ...] | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "tau": str(self.tau),
            "status": self.status.value,
            "min_residual": None if self.min_residual is None else self.min_residual.to_dict(),
            "min_residual_exact": (
                None if self.min_residual_exact is None else str(self.min_residual_exact)
            ),
            "argmin": None if self.argmin is None else list(self.argmin),
        }


def min_residual_profile(
    inst: Instance,
    m_values: Iterable[int],
    radius_rule: RadiusRule,
    *,
    eta: Tolerance | None = None,
    options: SearchOptions | None = None,
) -> list[ProfileRow]:
    """One row per m (in the given order) with the search minimum at τ = τ_m.

    The tolerance only decides the status column; it defaults to η = 1.
    """
    eta = eta or Tolerance.absolute(1)
    rows: list[ProfileRow] = []
    for m in m_values:
        tau = tau_value(inst, m)
        outcome = search(SearchSpec.with_rule(inst, tau, eta, radius_rule), options)
        rows.append(
            ProfileRow(
                m=m,
                tau=tau,
                status=outcome.status,
                min_residual=outcome.min_residual,
                min_residual_exact=outcome.min_residual_exact,
                argmin=outcome.argmin,
            )
        )
    return rows
