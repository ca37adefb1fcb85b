"""Shifted Waring Lab: Experiment Configuration.

One TOML file with ``[sections]`` describes an experiment; ``--set section.key=value``
flags override single keys. The file is validated by pydantic models that reject unknown
keys, and the effective configuration (``Config.echo()``) is written into every output.

Rational values are strings, either finite decimals (``"0.3"``, ``"1e-3"``) or fractions
(``"3/10"``). They are kept as written so the echo re-validates to an equal Config.

Example::

    [instance]
    s = 2
    k = 2
    theta = ["0.3", "0.7"]

    [search]
    tau = "220"
    eta = "0.5"
    radius = "2"
"""

from __future__ import annotations

import tomllib
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import (
    AfterValidator,
    BeforeValidator,
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from src.core.config import get_settings
from src.core.exceptions import BallParseError, ConfigurationError
from src.numeric.ball import parse_rational
from src.problem.model import Instance, Precision, validate_instance


def _rational_text(value: str) -> str:
    try:
        parse_rational(value)
    except BallParseError as exc:
        raise ValueError(exc.message) from exc
    return value.strip()


def _numeric_text(value: Any) -> Any:
    # TOML numbers from --set overrides arrive as int/float
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return repr(value)
    return value


RatStr = Annotated[str, BeforeValidator(_numeric_text), AfterValidator(_rational_text)]


def _positive(value: str) -> str:
    if parse_rational(value) <= 0:
        raise ValueError("must be positive")
    return value


PositiveRat = Annotated[RatStr, AfterValidator(_positive)]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class InstanceSection(_Section):
    s: int = Field(default=2, ge=2)
    k: int = Field(default=2, ge=2)
    theta: list[RatStr] = Field(default_factory=lambda: ["0.3", "0.7"], validate_default=True)

    @field_validator("theta")
    @classmethod
    def _check_theta(cls, theta: list[str], info: ValidationInfo) -> list[str]:
        s = info.data.get("s")
        if s is not None and len(theta) != s:
            raise ValueError(f"theta must have s={s} entries, got {len(theta)}")
        for i, text in enumerate(theta):
            if not 0 < parse_rational(text) < 1:
                raise ValueError(f"theta[{i}]={text} is not in the open interval (0,1)")
        return theta


class PrecisionSection(_Section):
    start_bits: int = Field(default_factory=lambda: get_settings().precision_start_bits, ge=2)
    cap_bits: int = Field(default_factory=lambda: get_settings().precision_cap_bits, ge=2)

    @model_validator(mode="after")
    def _check_order(self) -> PrecisionSection:
        if self.cap_bits < self.start_bits:
            raise ValueError("cap_bits must be >= start_bits")
        return self


class BudgetsSection(_Section):
    max_candidates: int = Field(default_factory=lambda: get_settings().max_candidates, ge=1)
    max_grid_cells: int = Field(default_factory=lambda: get_settings().max_grid_cells, ge=1)


class WitnessSection(_Section):
    m_lo: int = Field(default=1, ge=1)
    m_hi: int = Field(default=10, ge=1)
    profile: bool = False
    profile_radius: PositiveRat = "2"

    @model_validator(mode="after")
    def _check_range(self) -> WitnessSection:
        if self.m_hi < self.m_lo:
            raise ValueError("m_hi must be >= m_lo")
        return self


class SearchSection(_Section):
    tau: PositiveRat | None = None
    m: int | None = Field(default=None, ge=1)
    eta: PositiveRat = "1/2"
    radius: PositiveRat = "2"
    radius_scaled: bool = False
    eta_scaled: bool = False
    mode: Literal["auto", "dfs", "mitm"] = "auto"
    prune: bool = True
    exact: bool = True

    @model_validator(mode="after")
    def _tau_or_m(self) -> SearchSection:
        if (self.tau is None) == (self.m is None):
            raise ValueError("give exactly one of tau or m")
        return self


class CertifySection(_Section):
    headroom: PositiveRat = "1/2"
    C0: PositiveRat = "1/4"

    @field_validator("headroom")
    @classmethod
    def _below_one(cls, value: str) -> str:
        if parse_rational(value) >= 1:
            raise ValueError("headroom must lie in (0, 1)")
        return value


class VerifySection(_Section):
    m_lo: int | None = Field(default=None, ge=1)
    m_hi: int | None = Field(default=None, ge=1)
    span: int = Field(default=10, ge=0)


class ScanSection(_Section):
    m: int | None = Field(default=None, ge=1)
    grid_points: int = Field(default=101, ge=3)
    step_divisor: int = Field(default=25, ge=1)

    @field_validator("grid_points")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("grid_points must be odd")
        return value


class PhaseSection(_Section):
    m_samples: list[int] = Field(default_factory=lambda: [20, 40, 60])
    random_samples: int | None = Field(default=None, ge=1)
    m_range: tuple[int, int] = (10, 100)
    seed: int = 0
    alphas: list[RatStr] = Field(default_factory=lambda: ["1/4", "1/2"])
    betas: list[RatStr] = Field(default_factory=lambda: ["-1", "0"])
    coeff: PositiveRat = "1/8"

    @field_validator("m_samples")
    @classmethod
    def _positive_samples(cls, value: list[int]) -> list[int]:
        if any(m < 1 for m in value):
            raise ValueError("m samples must be >= 1")
        return value


class OutputSection(_Section):
    plots: bool = True
    csv: bool = True


class Config(_Section):
    """Validated experiment configuration."""

    instance: InstanceSection = Field(default_factory=InstanceSection)
    precision: PrecisionSection = Field(default_factory=PrecisionSection)
    budgets: BudgetsSection = Field(default_factory=BudgetsSection)
    witness: WitnessSection = Field(default_factory=WitnessSection)
    search: SearchSection | None = None
    certify: CertifySection = Field(default_factory=CertifySection)
    verify: VerifySection = Field(default_factory=VerifySection)
    scan: ScanSection = Field(default_factory=ScanSection)
    phase: PhaseSection = Field(default_factory=PhaseSection)
    output: OutputSection = Field(default_factory=OutputSection)

    def to_instance(self) -> Instance:
        return validate_instance(self.instance.model_dump())

    def to_precision(self) -> Precision:
        return Precision(self.precision.start_bits, self.precision.cap_bits)

    def echo(self) -> dict[str, Any]:
        """The effective configuration as plain JSON data."""
        return self.model_dump(mode="json")


def _override_value(text: str) -> Any:
    try:
        return tomllib.loads(f"value = {text}")["value"]
    except tomllib.TOMLDecodeError:
        return text


def apply_overrides(data: dict[str, Any], overrides: Sequence[str]) -> dict[str, Any]:
    """Apply ``section.key=value`` overrides to a nested mapping (returns a new dict)."""
    merged: dict[str, Any] = {key: dict(value) if isinstance(value, Mapping) else value
                              for key, value in data.items()}
    for item in overrides:
        path, sep, raw = item.partition("=")
        keys = [part.strip() for part in path.split(".")]
        if not sep or len(keys) != 2 or not all(keys):
            raise ConfigurationError(
                f"override must look like section.key=value, got {item!r}",
                details={"errors": [{"loc": path.strip(), "msg": "malformed override"}]},
            )
        section, key = keys
        target = merged.setdefault(section, {})
        if not isinstance(target, dict):
            raise ConfigurationError(
                f"{section} is not a section",
                details={"errors": [{"loc": section, "msg": "not a section"}]},
            )
        target[key] = _override_value(raw.strip())
    return merged


def _load_toml(path: Path) -> dict[str, Any]:
    try:
        with path.open("rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(
            f"config file not found: {path}",
            details={"errors": [{"loc": "", "msg": "file not found"}]},
        ) from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(
            f"config file is not valid TOML: {exc}",
            details={"errors": [{"loc": "", "msg": str(exc)}]},
        ) from exc


def parse_config(
    source: Path | str | Mapping[str, Any] | None = None,
    overrides: Sequence[str] = (),
) -> Config:
    """Validate a TOML file (or an already-loaded mapping) plus overrides into a Config.

    Raises ConfigurationError whose ``details["errors"]`` lists ``{"loc", "msg"}`` entries
    with dotted key paths such as ``"instance.theta"``.
    """
    if source is None:
        data: dict[str, Any] = {}
    elif isinstance(source, Mapping):
        data = dict(source)
    else:
        data = _load_toml(Path(source))
    data = apply_overrides(data, overrides)
    try:
        return Config.model_validate(data)
    except ValidationError as exc:
        errors = [
            {"loc": ".".join(str(part) for part in err["loc"]), "msg": err["msg"]}
            for err in exc.errors()
        ]
        first = errors[0]["loc"] if errors else ""
        raise ConfigurationError(
            f"invalid configuration at {first!r}", details={"errors": errors}
        ) from exc
