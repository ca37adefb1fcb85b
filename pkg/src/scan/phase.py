"""Shifted Waring Lab: Exploratory Phase Sweep.

For every (α, β) cell the search runs at τ = τ_m for each sampled m with window radius
coeff·m^α and tolerance coeff·m^β. The fraction of samples with Solutions is the cell
density; Undecided samples are counted on their own. Cells whose candidate estimate exceeds
the budget are skipped as a whole.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import replace
from fractions import Fraction

import structlog

from src.core.concurrency import ordered_map
from src.core.exceptions import PhaseMonotonicityError, PreconditionError, SearchBudgetExceededError
from src.observability.metrics import phase_cells_total
from src.problem.model import Instance, ScaledRoot, Tolerance
from src.problem.witness import tau_value
from src.scan.models import PhaseCell, PhaseMatrix
from src.search.engine import search
from src.search.models import SearchOptions, SearchSpec, SearchStatus
from src.search.window import build_window

logger = structlog.get_logger(__name__)


def seeded_samples(seed: int, count: int, m_lo: int, m_hi: int) -> list[int]:
    """``count`` distinct m in [m_lo, m_hi], drawn with ``random.Random(seed)``, sorted."""
    if m_lo < 1 or m_hi < m_lo:
        raise PreconditionError("need 1 <= m_lo <= m_hi")
    population = range(m_lo, m_hi + 1)
    if count > len(population):
        raise PreconditionError("more samples requested than the m range holds")
    return sorted(random.Random(seed).sample(population, count))


def _power(coeff: Fraction, m: int, exponent: Fraction) -> ScaledRoot:
    return ScaledRoot(coeff, Fraction(m), exponent.numerator, exponent.denominator)


def _phase_cell(
    job: tuple[Instance, Fraction, Fraction, Fraction, tuple[int, ...], SearchOptions],
) -> PhaseCell:
    inst, alpha, beta, coeff, m_samples, options = job
    specs: list[SearchSpec] = []
    estimate = 0
    for m in m_samples:
        tau = tau_value(inst, m)
        radius = _power(coeff, m, alpha)
        rule = f"{coeff}*m^({alpha})"
        window = build_window(inst, tau, radius, precision=options.precision, radius_rule=rule)
        estimate += window.candidate_count()
        if window.candidate_count() > options.max_candidates:
            return PhaseCell(alpha, beta, len(m_samples), skipped=True, estimate=estimate)
        eta = Tolerance(_power(coeff, m, beta), f"{coeff}*m^({beta})")
        specs.append(SearchSpec(inst, tau, eta, radius, rule, window))

    counts = {status: 0 for status in SearchStatus}
    for spec in specs:
        try:
            counts[search(spec, options).status] += 1
        except SearchBudgetExceededError:
            return PhaseCell(alpha, beta, len(m_samples), skipped=True, estimate=estimate)
    return PhaseCell(
        alpha=alpha,
        beta=beta,
        samples=len(m_samples),
        solutions=counts[SearchStatus.SOLUTIONS],
        empty=counts[SearchStatus.EMPTY],
        undecided=counts[SearchStatus.UNDECIDED],
        estimate=estimate,
    )


def check_monotone(matrix: PhaseMatrix) -> None:
    """Density must not decrease in β for fixed α (skipped cells are ignored)."""
    for alpha in matrix.alphas:
        previous: PhaseCell | None = None
        for beta in sorted(matrix.betas):
            cell = matrix.cell(alpha, beta)
            if cell.density is None:
                continue
            if previous is not None and cell.density < previous.density:  # type: ignore[operator]
                raise PhaseMonotonicityError(
                    f"density fell from {previous.density} to {cell.density} as beta grew",
                    details={"alpha": str(alpha), "betas": [str(previous.beta), str(beta)]},
                )
            previous = cell


def phase_sweep(
    inst: Instance,
    m_samples: Sequence[int],
    alphas: Sequence[Fraction],
    betas: Sequence[Fraction],
    coeff: Fraction,
    *,
    options: SearchOptions | None = None,
    max_cells: int | None = None,
    seed: int | None = None,
) -> PhaseMatrix:
    """Density matrix over α × β in row-major (α, then β) order."""
    options = options or SearchOptions()
    coeff = Fraction(coeff)
    if coeff <= 0:
        raise PreconditionError("coeff must be positive", details={"coeff": str(coeff)})
    if any(m < 1 for m in m_samples):
        raise PreconditionError("m samples must be >= 1")
    cell_count = len(alphas) * len(betas)
    if max_cells is not None and cell_count > max_cells:
        raise SearchBudgetExceededError(cell_count, max_cells, details={"what": "phase cells"})

    samples = tuple(m_samples)
    alphas_t = tuple(Fraction(a) for a in alphas)
    betas_t = tuple(Fraction(b) for b in betas)
    cells: list[PhaseCell] = []
    if samples:
        inner = replace(options, workers=1)
        cells = ordered_map(
            _phase_cell,
            [(inst, a, b, coeff, samples, inner) for a in alphas_t for b in betas_t],
            workers=options.workers,
        )
    for cell in cells:
        phase_cells_total.labels(state="skipped" if cell.skipped else "complete").inc()

    matrix = PhaseMatrix(
        inst=inst,
        alphas=alphas_t if samples else (),
        betas=betas_t if samples else (),
        coeff=coeff,
        m_samples=samples,
        cells=tuple(cells),
        seed=seed,
    )
    check_monotone(matrix)
    logger.info(
        "phase.done",
        cells=len(cells),
        skipped=sum(c.skipped for c in cells),
        samples=len(samples),
        exploratory=True,
    )
    return matrix
