"""Shifted Waring Lab: Certificate Domain Models.

Every number in a certificate is an exact rational; JSON carries them as ``"p/q"`` strings
so that a saved certificate re-audits bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from src.export.models import sha256_of
from src.problem.model import Instance, validate_instance


def _q(text: str | int | Fraction) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class ChainConstant:
    """One constant of the chain with the formula that produced it."""

    name: str
    value: Fraction
    formula: str

    def to_dict(self) -> dict[str, str]:
        return {"name": self.name, "value": str(self.value), "formula": self.formula}


@dataclass(frozen=True)
class Inequality:
    """An audited inequality ``lhs relation rhs`` and whether it holds exactly."""

    name: str
    lhs: Fraction
    relation: str
    rhs: Fraction
    side_condition: str = ""

    @property
    def holds(self) -> bool:
        match self.relation:
            case "<":
                return self.lhs < self.rhs
            case "<=":
                return self.lhs <= self.rhs
            case ">=":
                return self.lhs >= self.rhs
            case "==":
                return self.lhs == self.rhs
        raise ValueError(f"Unknown relation: {self.relation}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": str(self.lhs),
            "relation": self.relation,
            "rhs": str(self.rhs),
            "side_condition": self.side_condition,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class Certificate:
    """Effective constants (c, c′, m₀) for one instance plus the audited chain.

    ``b`` and ``e`` are the rational upper bounds of (2s)^{1/2k} and (2s)^{1−2/k} used to
    make τ_m^{1/2k} ≤ b·m^{1/2} and τ_m^{1−2/k} ≤ e·m^{k−2} rational.
    """

    inst: Instance
    c: Fraction
    c_prime: Fraction
    m0: int
    headroom: Fraction
    L: Fraction
    b: Fraction
    e: Fraction
    chain: tuple[ChainConstant, ...]
    side_conditions: tuple[str, ...] = field(default=())

    @property
    def branch(self) -> str:
        return "k=2: c5 < L" if self.inst.k == 2 else "k>=3: c8*r(m0) <= 1/2 and 2*c7 < L"

    def constant(self, name: str) -> Fraction:
        for item in self.chain:
            if item.name == name:
                return item.value
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "instance": self.inst.to_dict(),
            "c": str(self.c),
            "c_prime": str(self.c_prime),
            "m0": self.m0,
            "headroom": str(self.headroom),
            "L": str(self.L),
            "b": str(self.b),
            "e": str(self.e),
            "branch": self.branch,
            "chain": [item.to_dict() for item in self.chain],
            "side_conditions": list(self.side_conditions),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Certificate:
        return cls(
            inst=validate_instance(data["instance"]),
            c=_q(data["c"]),
            c_prime=_q(data["c_prime"]),
            m0=int(data["m0"]),
            headroom=_q(data["headroom"]),
            L=_q(data["L"]),
            b=_q(data["b"]),
            e=_q(data["e"]),
            chain=tuple(
                ChainConstant(item["name"], _q(item["value"]), item["formula"])
                for item in data["chain"]
            ),
            side_conditions=tuple(data.get("side_conditions", ())),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def sha256(self) -> str:
        return sha256_of(self.to_dict())


@dataclass(frozen=True)
class GapConstants:
    """Constants of the gap statement around a certified witness τ₀ = τ_m, m ≥ m₀.

    No τ with |τ − τ₀| ≤ C0·τ₀^{1−2/k} admits ``|Σ(x_i−θ_i)^k − τ| < C·τ^{1−2/k}`` with
    ``|x_i − (τ/s)^{1/k}| < C′·τ^{1/2k}``.
    """

    cert: Certificate
    C0: Fraction
    C: Fraction
    C_prime: Fraction
    C1: Fraction
    C2: Fraction
    C3: Fraction
    g: Fraction
    h: Fraction
    halvings: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "certificate_sha256": self.cert.sha256(),
            "C0": str(self.C0),
            "C": str(self.C),
            "C_prime": str(self.C_prime),
            "C1": str(self.C1),
            "C2": str(self.C2),
            "C3": str(self.C3),
            "g": str(self.g),
            "h": str(self.h),
            "C0_halvings": self.halvings,
        }


@dataclass(frozen=True)
class VerifyEntry:
    m: int
    tau: Fraction
    status: str  # a SearchStatus value, or "skipped"
    eta: Fraction | None = None
    min_residual_exact: Fraction | None = None
    argmin: tuple[int, ...] | None = None
    window: tuple[int, int] | None = None
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "tau": str(self.tau),
            "status": self.status,
            "eta": None if self.eta is None else str(self.eta),
            "min_residual_exact": (
                None if self.min_residual_exact is None else str(self.min_residual_exact)
            ),
            "argmin": None if self.argmin is None else list(self.argmin),
            "window": None if self.window is None else list(self.window),
            "note": self.note,
        }


@dataclass(frozen=True)
class VerificationReport:
    cert: Certificate
    m_lo: int
    m_hi: int
    entries: tuple[VerifyEntry, ...]
    anomalies: tuple[int, ...]
    gaps: tuple[int, ...]

    @property
    def complete(self) -> bool:
        return not self.gaps

    @property
    def verdicts(self) -> dict[int, str]:
        return {entry.m: entry.status for entry in self.entries}

    def to_dict(self) -> dict[str, Any]:
        return {
            "certificate_sha256": self.cert.sha256(),
            "m0": self.cert.m0,
            "m_checked": [self.m_lo, self.m_hi],
            "entries": [entry.to_dict() for entry in self.entries],
            "anomalies": list(self.anomalies),
            "gaps": list(self.gaps),
            "complete": self.complete,
        }
