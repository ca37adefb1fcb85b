"""Shifted Waring Lab: Command-Line Entry Point.

Subcommands ``witness``, ``search``, ``certify``, ``verify``, ``scan`` and ``phase`` read a
TOML config (plus ``--set`` overrides), compute, and only then write their JSON/CSV/SVG
outputs into ``--out``. Exit codes:

    search          0 Solutions, 1 Empty, 2 Undecided
    certify/verify  0 success, 3 anomalies (or a failed audit), 4 partial
    scan/phase      0 complete, 4 partial
    any command     5 configuration/instance, 6 numeric/precondition/undecided,
                    7 budget refusal, 8 invariant violation or unexpected failure
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import structlog

from src.certify import (
    Certificate,
    check_certificate,
    closing_checks,
    derive_constants,
    gap_constants,
    verify_certificate,
)
from src.cli.config import Config, parse_config
from src.core.config import get_settings
from src.core.exceptions import (
    ConfigurationError,
    InstanceError,
    InvariantViolationError,
    NumericError,
    PreconditionError,
    SearchBudgetExceededError,
    ShiftLabError,
    UndecidedError,
)
from src.core.logging import configure_logging
from src.export.documents import (
    certificate_document,
    gap_document,
    phase_document,
    profile_document,
    search_document,
    verification_document,
    witness_document,
)
from src.export.models import ExportDocument, ExportFormat, Provenance
from src.export.registry import get_export_registry
from src.numeric.ball import parse_rational
from src.observability.metrics import get_metrics_text
from src.problem.model import RadiusRule, Tolerance
from src.problem.witness import tau_value, witness_table
from src.scan import GapReport, PhaseMatrix, emit_plots, gap_scan, phase_sweep, seeded_samples
from src.search import SearchOptions, SearchSpec, SearchStatus, min_residual_profile, search

logger = structlog.get_logger(__name__)

COMMANDS = ("witness", "search", "certify", "verify", "scan", "phase")

EXIT_OK = 0
EXIT_ANOMALY = 3
EXIT_PARTIAL = 4
EXIT_CONFIG = 5
EXIT_NUMERIC = 6
EXIT_BUDGET = 7
EXIT_INVARIANT = 8

SEARCH_EXIT = {SearchStatus.SOLUTIONS: 0, SearchStatus.EMPTY: 1, SearchStatus.UNDECIDED: 2}


def exit_code_for(exc: BaseException) -> int:
    """Map an exception onto the exit-code contract."""
    if isinstance(exc, (ConfigurationError, InstanceError)):
        return EXIT_CONFIG
    if isinstance(exc, SearchBudgetExceededError):
        return EXIT_BUDGET
    if isinstance(exc, (NumericError, PreconditionError, UndecidedError)):
        return EXIT_NUMERIC
    return EXIT_INVARIANT


@dataclass
class _Plan:
    """What a command produced; nothing is written until the command has finished."""

    code: int
    documents: list[tuple[ExportDocument, tuple[ExportFormat, ...]]] = field(default_factory=list)
    plots: list[GapReport | PhaseMatrix] = field(default_factory=list)
    certificate_sha256: str | None = None


def load_certificate(path: Path, cfg: Config) -> Certificate:
    """Read a certificate (bare or inside a certify envelope) and re-audit it at m₀."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        if "result" in data:
            data = data["result"]
        if "certificate" in data:
            data = data["certificate"]
        cert = Certificate.from_dict(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigurationError(
            f"cannot read certificate {path}: {exc}",
            details={"errors": [{"loc": "certificate", "msg": str(exc)}]},
        ) from exc
    if cert.inst != cfg.to_instance():
        raise ConfigurationError(
            "certificate was derived for a different instance",
            details={"errors": [{"loc": "instance", "msg": "does not match certificate"}]},
        )
    failed = [ineq.name for ineq in check_certificate(cert, cert.m0) if not ineq.holds]
    if failed:
        raise InvariantViolationError("loaded certificate fails its audit", details={"failed": failed})
    return cert


def _options(cfg: Config, workers: int) -> SearchOptions:
    section = cfg.search
    return SearchOptions(
        precision=cfg.to_precision(),
        max_candidates=cfg.budgets.max_candidates,
        workers=workers,
        mode=section.mode if section else "auto",
        prune=section.prune if section else True,
        exact=section.exact if section else True,
    )


def _tabular(cfg: Config) -> tuple[ExportFormat, ...]:
    return (ExportFormat.JSON, ExportFormat.CSV) if cfg.output.csv else (ExportFormat.JSON,)


def _certificate(cfg: Config, certificate: Path | None) -> Certificate:
    if certificate is not None:
        return load_certificate(certificate, cfg)
    return derive_constants(cfg.to_instance(), parse_rational(cfg.certify.headroom))


def _witness(cfg: Config, workers: int, certificate: Path | None) -> _Plan:
    inst = cfg.to_instance()
    section = cfg.witness
    rows = witness_table(inst, section.m_lo, section.m_hi, cfg.precision.start_bits)
    plan = _Plan(code=EXIT_OK, documents=[(witness_document(rows), _tabular(cfg))])
    if section.profile:
        profile = min_residual_profile(
            inst,
            range(section.m_lo, section.m_hi + 1),
            RadiusRule(parse_rational(section.profile_radius)),
            options=_options(cfg, workers),
        )
        plan.documents.append((profile_document(profile), _tabular(cfg)))
    return plan


def _search(cfg: Config, workers: int, certificate: Path | None) -> _Plan:
    section = cfg.search
    if section is None:
        raise ConfigurationError(
            "search needs a [search] section with tau or m",
            details={"errors": [{"loc": "search", "msg": "missing section"}]},
        )
    inst = cfg.to_instance()
    tau = parse_rational(section.tau) if section.tau is not None else tau_value(inst, section.m)
    rule = RadiusRule(parse_rational(section.radius), scaled=section.radius_scaled)
    eta = parse_rational(section.eta)
    tol = Tolerance.scaled(eta, inst, tau) if section.eta_scaled else Tolerance.absolute(eta)
    spec = SearchSpec.with_rule(inst, tau, tol, rule)
    outcome = search(spec, _options(cfg, workers))
    return _Plan(code=SEARCH_EXIT[outcome.status], documents=[(search_document(outcome), _tabular(cfg))])


def _certify(cfg: Config, workers: int, certificate: Path | None) -> _Plan:
    cert = _certificate(cfg, certificate)
    gc = gap_constants(cert, parse_rational(cfg.certify.C0))
    checks = [
        {"m": m, **ineq.to_dict()}
        for m in (cert.m0, 4 * cert.m0)
        for ineq in check_certificate(cert, m)
    ]
    checks += [{"m": None, **ineq.to_dict()} for ineq in closing_checks(gc)]
    failed = [c["name"] for c in checks if not c["holds"]]
    if failed:
        logger.warning("certify.audit_failed", failed=failed)
    return _Plan(
        code=EXIT_ANOMALY if failed else EXIT_OK,
        documents=[(certificate_document(cert, gc, checks), (ExportFormat.JSON,))],
        certificate_sha256=cert.sha256(),
    )


def _verify(cfg: Config, workers: int, certificate: Path | None) -> _Plan:
    cert = _certificate(cfg, certificate)
    section = cfg.verify
    m_lo = section.m_lo if section.m_lo is not None else cert.m0
    m_hi = section.m_hi if section.m_hi is not None else m_lo + section.span
    report = verify_certificate(cert, m_lo, m_hi, _options(cfg, workers))
    if report.anomalies:
        code = EXIT_ANOMALY
    elif not report.complete:
        code = EXIT_PARTIAL
    else:
        code = EXIT_OK
    return _Plan(
        code=code,
        documents=[(verification_document(report), _tabular(cfg))],
        certificate_sha256=cert.sha256(),
    )


def _scan(cfg: Config, workers: int, certificate: Path | None) -> _Plan:
    cert = _certificate(cfg, certificate)
    section = cfg.scan
    if section.grid_points > cfg.budgets.max_grid_cells:
        raise SearchBudgetExceededError(
            section.grid_points, cfg.budgets.max_grid_cells, details={"what": "scan grid points"}
        )
    gc = gap_constants(cert, parse_rational(cfg.certify.C0))
    m = section.m if section.m is not None else max(cert.m0, 50)
    report = gap_scan(
        gc, m, section.grid_points, step_divisor=section.step_divisor, options=_options(cfg, workers)
    )
    return _Plan(
        code=EXIT_OK if report.complete else EXIT_PARTIAL,
        documents=[(gap_document(report), (ExportFormat.JSON,))],
        plots=[report] if cfg.output.plots else [],
        certificate_sha256=cert.sha256(),
    )


def _phase(cfg: Config, workers: int, certificate: Path | None) -> _Plan:
    inst = cfg.to_instance()
    section = cfg.phase
    if section.random_samples is not None:
        samples = seeded_samples(section.seed, section.random_samples, *section.m_range)
        seed: int | None = section.seed
    else:
        samples, seed = list(section.m_samples), None
    matrix = phase_sweep(
        inst,
        samples,
        [parse_rational(a) for a in section.alphas],
        [parse_rational(b) for b in section.betas],
        parse_rational(section.coeff),
        options=_options(cfg, workers),
        max_cells=cfg.budgets.max_grid_cells,
        seed=seed,
    )
    return _Plan(
        code=EXIT_OK if matrix.complete else EXIT_PARTIAL,
        documents=[(phase_document(matrix), (ExportFormat.JSON,))],
        plots=[matrix] if cfg.output.plots and matrix.cells else [],
    )


_HANDLERS = {
    "witness": _witness,
    "search": _search,
    "certify": _certify,
    "verify": _verify,
    "scan": _scan,
    "phase": _phase,
}


def run(
    command: str,
    cfg: Config,
    out_dir: Path,
    *,
    workers: int = 1,
    certificate: Path | None = None,
) -> int:
    """Run one subcommand and write its outputs; returns the command's exit code.

    Exceptions propagate; ``main`` maps them onto exit codes.
    """
    if command not in _HANDLERS:
        raise ConfigurationError(f"unknown command {command!r}", details={"commands": COMMANDS})
    logger.info("cli.run", command=command, workers=workers)
    plan = _HANDLERS[command](cfg, workers, certificate)

    provenance = Provenance(command, cfg.echo(), plan.certificate_sha256)
    registry = get_export_registry()
    written = [
        registry.write(document, fmt, provenance, out_dir)
        for document, formats in plan.documents
        for fmt in formats
    ]
    for report in plan.plots:
        written += emit_plots(report, out_dir, provenance)
    logger.info("cli.done", command=command, exit_code=plan.code, files=[p.name for p in written])
    return plan.code


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML experiment config")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one config key (repeatable)",
    )
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--workers", type=int, default=settings.workers, help="worker processes")
    common.add_argument("--certificate", type=Path, help="reuse a saved certificate")
    common.add_argument("--metrics", type=Path, help="write Prometheus metrics text here")
    common.add_argument("--log-level", default=settings.log_level, help="log level")

    parser = argparse.ArgumentParser(
        prog="shiftlab", description="Certified experiments on Waring's problem with shifts."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "witness": "tabulate the witness family and its diagonal centers",
        "search": "certified search of one diagonal window",
        "certify": "derive and audit effective constants",
        "verify": "check that the witness family has no constrained solution",
        "scan": "grid scan around a certified witness",
        "phase": "exploratory solvability density over window and tolerance exponents",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=descriptions[name])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        if args.workers < 1:
            raise ConfigurationError("--workers must be >= 1", details={"workers": args.workers})
        cfg = parse_config(args.config, args.overrides)
        code = run(
            args.command, cfg, args.out, workers=args.workers, certificate=args.certificate
        )
    except ShiftLabError as exc:
        code = exit_code_for(exc)
        logger.error(
            "cli.failed",
            command=args.command,
            error=type(exc).__name__,
            message=exc.message,
            details=exc.details,
            exit_code=code,
        )
    except Exception:
        logger.exception("cli.unexpected", command=args.command)
        code = EXIT_INVARIANT
    if args.metrics is not None:
        args.metrics.parent.mkdir(parents=True, exist_ok=True)
        args.metrics.write_bytes(get_metrics_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
