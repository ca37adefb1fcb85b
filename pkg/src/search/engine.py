"""Shifted Waring Lab: Certified Window Search.

Exhaustive search of ``|Σ(x_i − θ_i)^k − τ| < η`` over the diagonal window.

Exact path (rational τ, η rational or a ScaledRoot): every term is scaled to an integer,
``T_i(x) = (D·x − N_i)^k · q`` with ``θ_i = N_i/D`` and ``τ = p/q``, so the residual of a
point is ``|Σ T_i(x_i) − p·D^k| / (q·D^k)`` and the acceptance test becomes ``dev < cut``
for one integer ``cut``. Because x_i ≥ 1 > θ_i every T_i is strictly increasing, so partial
sums bound whole subtrees (depth-first mode) and sorted half sums answer nearest-sum queries
(meet-in-the-middle mode).

Ball path (ball τ or ``exact=False``): every point is evaluated in ball arithmetic with
refinement on Unknown; points still Unknown at the precision cap are reported as undecided.

Work is split into one task per value of the first variable, independent of the worker
count, and merged in that order.
"""

from __future__ import annotations

import itertools
import math
import time
from bisect import bisect_left
from dataclasses import dataclass, field, replace
from fractions import Fraction

import structlog

from src.core.concurrency import ordered_map
from src.core.exceptions import SearchBudgetExceededError
from src.numeric.ball import Ball, TriBool, ball_from_rat, cmp_lt
from src.observability.metrics import (
    search_candidates_total,
    search_duration_seconds,
    search_outcomes_total,
    search_refinements_total,
)
from src.problem.model import Instance, ScaledRoot, Tolerance, Window, exact_value
from src.search.models import (
    Candidate,
    SearchOptions,
    SearchOutcome,
    SearchSpec,
    SearchStats,
    SearchStatus,
)
from src.search.window import build_window, residual

logger = structlog.get_logger(__name__)

MITM_MIN_VARIABLES = 4
MITM_MIN_WIDTH = 8


# ──────────────────────────────────────────────────────────────
# Task frame (installed once per worker process)
# ──────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class _Frame:
    inst: Instance
    tau: Fraction | Ball
    eta: Tolerance
    window: Window
    mode: str  # dfs | mitm | ball
    prune: bool
    precisions: tuple[int, ...]


@dataclass
class _ExactState:
    frame: _Frame
    scale: int
    target: int
    cut: int
    tables: list[list[int]]
    rest_min: list[int]
    rest_max: list[int]
    half: int = 0
    b_keys: list[int] = field(default_factory=list)
    b_points: list[tuple[int, ...]] = field(default_factory=list)


@dataclass
class _TaskResult:
    solutions: list[Candidate] = field(default_factory=list)
    undecided: list[Candidate] = field(default_factory=list)
    best_dev: int | None = None
    best_x: tuple[int, ...] | None = None
    # ball path: minimum enclosure endpoints
    min_lower: Fraction | None = None
    min_upper: Fraction | None = None
    stats: SearchStats = field(default_factory=SearchStats)


_STATE: _ExactState | _Frame | None = None


def _cut_for(eta: Tolerance, scale: int) -> int:
    """Least integer n with ``n / scale >= η``; a point is accepted iff ``dev < cut``."""
    value = eta.exact
    if value is not None:
        return math.ceil(value * scale)
    root = eta.value
    assert isinstance(root, ScaledRoot)
    ball = root.enclose(128)
    lo = math.floor(ball.lower() * scale) - 1
    hi = math.ceil(ball.upper() * scale) + 1
    # invariant: lo accepted, hi rejected
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if root.exceeds(Fraction(mid, scale)):
            lo = mid
        else:
            hi = mid
    return hi


def _prepare_exact(frame: _Frame) -> _ExactState:
    inst, window = frame.inst, frame.window
    assert isinstance(frame.tau, Fraction)
    d = inst.theta_denominator
    dk = d**inst.k
    p, q = frame.tau.numerator, frame.tau.denominator
    shifts = [int(t * d) for t in inst.theta]
    tables = [
        [(d * x - n) ** inst.k * q for x in range(window.lo[i], window.hi[i] + 1)]
        for i, n in enumerate(shifts)
    ]
    s = inst.s
    rest_min = [0] * (s + 1)
    rest_max = [0] * (s + 1)
    for i in range(s - 1, -1, -1):
        rest_min[i] = rest_min[i + 1] + tables[i][0]
        rest_max[i] = rest_max[i + 1] + tables[i][-1]
    scale = q * dk
    state = _ExactState(
        frame=frame,
        scale=scale,
        target=p * dk,
        cut=_cut_for(frame.eta, scale),
        tables=tables,
        rest_min=rest_min,
        rest_max=rest_max,
    )
    if frame.mode == "mitm":
        state.half = s // 2
        entries = sorted(
            (sum(tables[i][j] for i, j in zip(range(state.half, s), idx)), idx)
            for idx in itertools.product(*(range(len(tables[i])) for i in range(state.half, s)))
        )
        state.b_keys = [key for key, _ in entries]
        state.b_points = [
            tuple(window.lo[state.half + n] + j for n, j in enumerate(idx)) for _, idx in entries
        ]
    return state


def _install_frame(frame: _Frame) -> None:
    global _STATE
    _STATE = frame if frame.mode == "ball" else _prepare_exact(frame)


# ──────────────────────────────────────────────────────────────
# Exact path
# ──────────────────────────────────────────────────────────────


class _ExactRun:
    """Depth-first or meet-in-the-middle enumeration below one first-variable value."""

    def __init__(self, state: _ExactState) -> None:
        self.state = state
        self.result = _TaskResult()
        self.prefix: list[int] = []

    def _record(self, x: tuple[int, ...], dev: int) -> None:
        st, res = self.state, self.result
        res.stats.enumerated += 1
        if dev < st.cut:
            value = Fraction(dev, st.scale)
            res.solutions.append(
                Candidate(x, ball_from_rat(value, st.frame.precisions[0]), value)
            )
        if res.best_dev is None or dev < res.best_dev:
            res.best_dev, res.best_x = dev, x

    def _bound_prunes(self, lb: int) -> bool:
        best = self.result.best_dev
        return self.state.frame.prune and best is not None and lb >= max(self.state.cut, best)

    def dfs(self, i: int, partial: int) -> None:
        st = self.state
        s = st.frame.inst.s
        table = st.tables[i]
        width = len(table)
        lo_x = st.frame.window.lo[i]
        if i == s - 1:
            self._leaf(partial, table, lo_x)
            return
        subtree = math.prod(len(st.tables[j]) for j in range(i + 1, s))
        for idx, term in enumerate(table):
            total = partial + term
            low_sum = total + st.rest_min[i + 1]
            high_sum = total + st.rest_max[i + 1]
            if low_sum > st.target:
                lb = low_sum - st.target
            elif high_sum < st.target:
                lb = st.target - high_sum
            else:
                lb = 0
            if lb and self._bound_prunes(lb):
                if low_sum > st.target:
                    # every later value overshoots further
                    self.result.stats.pruned += (width - idx) * subtree
                    return
                self.result.stats.pruned += subtree
                continue
            self.prefix.append(lo_x + idx)
            self.dfs(i + 1, total)
            self.prefix.pop()

    def _leaf(self, partial: int, table: list[int], lo_x: int) -> None:
        st = self.state
        width = len(table)
        if not st.frame.prune:
            indices: list[int] = list(range(width))
        else:
            gap = st.target - partial
            near = bisect_left(table, gap)
            chosen = set(range(bisect_left(table, gap - st.cut + 1), bisect_left(table, gap + st.cut)))
            chosen.update(j for j in (near - 1, near) if 0 <= j < width)
            indices = sorted(chosen)
            self.result.stats.pruned += width - len(indices)
        head = tuple(self.prefix)
        for j in indices:
            self._record((*head, lo_x + j), abs(partial + table[j] - st.target))

    def mitm(self, partial: int) -> None:
        st = self.state
        res = self.result
        keys, points = st.b_keys, st.b_points
        window = st.frame.window
        ranges = [range(len(st.tables[i])) for i in range(1, st.half)]
        for idx in itertools.product(*ranges):
            sum_a = partial + sum(st.tables[i + 1][j] for i, j in enumerate(idx))
            head = (*self.prefix, *(window.lo[i + 1] + j for i, j in enumerate(idx)))
            gap = st.target - sum_a
            res.stats.enumerated += 1
            first = bisect_left(keys, gap - st.cut + 1)
            last = bisect_left(keys, gap + st.cut)
            for pos in range(first, last):
                dev = abs(keys[pos] - gap)
                value = Fraction(dev, st.scale)
                res.solutions.append(
                    Candidate((*head, *points[pos]), ball_from_rat(value, st.frame.precisions[0]), value)
                )
            res.stats.enumerated += last - first
            near = bisect_left(keys, gap)
            nearest: list[tuple[int, tuple[int, ...]]] = []
            if near > 0:
                below = bisect_left(keys, keys[near - 1])
                nearest.append((gap - keys[below], points[below]))
            if near < len(keys):
                nearest.append((keys[near] - gap, points[near]))
            dev, tail = min(nearest)
            if res.best_dev is None or dev < res.best_dev:
                res.best_dev, res.best_x = dev, (*head, *tail)
        res.solutions.sort(key=lambda c: c.x)


def _run_exact(state: _ExactState, x0: int) -> _TaskResult:
    run = _ExactRun(state)
    run.prefix.append(x0)
    partial = state.tables[0][x0 - state.frame.window.lo[0]]
    if state.frame.mode == "mitm":
        run.mitm(partial)
    else:
        run.dfs(1, partial)
    return run.result


# ──────────────────────────────────────────────────────────────
# Ball path
# ──────────────────────────────────────────────────────────────


def _run_ball(frame: _Frame, x0: int) -> _TaskResult:
    result = _TaskResult()
    window = frame.window
    ranges = [range(window.lo[i], window.hi[i] + 1) for i in range(1, frame.inst.s)]
    for rest in itertools.product(*ranges):
        x = (x0, *rest)
        in_window = tuple(window.membership(xi) for xi in x)
        verdict = TriBool.UNKNOWN
        res = Ball.from_int(0)
        for n, prec in enumerate(frame.precisions):
            if n:
                result.stats.refinements += 1
            res = residual(frame.inst, x, frame.tau, prec)
            verdict = cmp_lt(res, frame.eta.enclose(prec))
            if verdict is not TriBool.UNKNOWN:
                break
        result.stats.enumerated += 1
        exact = exact_value(res)
        candidate = Candidate(x, res, exact, in_window)
        certain_member = all(t is TriBool.TRUE for t in in_window)
        if verdict is TriBool.TRUE and certain_member:
            result.solutions.append(candidate)
        elif verdict is TriBool.UNKNOWN or (verdict is TriBool.TRUE and not certain_member):
            result.undecided.append(candidate)
        lower, upper = max(Fraction(0), res.lower()), res.upper()
        if result.min_lower is None or lower < result.min_lower:
            result.min_lower = lower
        if result.min_upper is None or upper < result.min_upper:
            result.min_upper, result.best_x = upper, x
    return result


def _run_task(x0: int) -> _TaskResult:
    state = _STATE
    if state is None:
        raise RuntimeError("search frame not installed in this process")
    if isinstance(state, _ExactState):
        return _run_exact(state, x0)
    return _run_ball(state, x0)


# ──────────────────────────────────────────────────────────────
# Public entry point
# ──────────────────────────────────────────────────────────────


def _uses_exact_path(spec: SearchSpec, options: SearchOptions) -> bool:
    if not options.exact or exact_value(spec.tau) is None:
        return False
    return spec.eta.exact is not None or isinstance(spec.eta.value, ScaledRoot)


def _choose_mode(spec: SearchSpec, window: Window, options: SearchOptions) -> str:
    if options.mode != "auto":
        return options.mode
    if spec.inst.s >= MITM_MIN_VARIABLES and window.width >= MITM_MIN_WIDTH:
        return "mitm"
    return "dfs"


def search(spec: SearchSpec, options: SearchOptions | None = None) -> SearchOutcome:
    """Certified exhaustive search of the window box; see SearchOutcome for the contract."""
    options = options or SearchOptions()
    started = time.perf_counter()
    window = spec.window or build_window(
        spec.inst,
        spec.tau,
        spec.radius,
        precision=options.precision,
        radius_rule=spec.radius_rule,
    )
    estimate = window.candidate_count()
    if estimate > options.max_candidates:
        raise SearchBudgetExceededError(
            estimate, options.max_candidates, details={"window": window.to_dict()}
        )

    exact_path = _uses_exact_path(spec, options)
    tau: Fraction | Ball = spec.tau
    if exact_path:
        tau = exact_value(spec.tau)  # type: ignore[assignment]
        mode = _choose_mode(spec, window, options)
    else:
        mode = "ball"
    frame = _Frame(
        inst=spec.inst,
        tau=tau,
        eta=spec.eta,
        window=window,
        mode=mode,
        prune=options.prune,
        precisions=tuple(options.precision.schedule()),
    )

    stats = SearchStats()
    solutions: list[Candidate] = []
    undecided: list[Candidate] = []
    best_dev: int | None = None
    best_x: tuple[int, ...] | None = None
    min_lower: Fraction | None = None
    min_upper: Fraction | None = None

    if not window.is_empty:
        results = ordered_map(
            _run_task,
            window.values(),
            workers=options.workers,
            initializer=_install_frame,
            initargs=(frame,),
        )
        for part in results:
            stats.merge(part.stats)
            stats.tasks += 1
            solutions.extend(part.solutions)
            undecided.extend(part.undecided)
            if mode == "ball":
                if part.min_lower is not None and (min_lower is None or part.min_lower < min_lower):
                    min_lower = part.min_lower
                if part.min_upper is not None and (min_upper is None or part.min_upper < min_upper):
                    min_upper, best_x = part.min_upper, part.best_x
            elif part.best_dev is not None and (best_dev is None or part.best_dev < best_dev):
                best_dev, best_x = part.best_dev, part.best_x

    prec = frame.precisions[0]
    min_exact: Fraction | None = None
    min_ball: Ball | None = None
    if exact_path and best_dev is not None:
        scale = frame.inst.theta_denominator ** frame.inst.k * tau.denominator  # type: ignore[union-attr]
        min_exact = Fraction(best_dev, scale)
        min_ball = ball_from_rat(min_exact, prec)
    elif min_lower is not None and min_upper is not None:
        min_ball = Ball.hull(min_lower, min_upper, prec)

    if exact_path:
        marked = [
            replace(c, in_window=tuple(window.membership(xi) for xi in c.x)) for c in solutions
        ]
        # points touching an undecided window edge cannot be certified solutions
        solutions, undecided = [], []
        for c in marked:
            target = solutions if all(t is TriBool.TRUE for t in c.in_window) else undecided
            target.append(c)

    if solutions:
        status = SearchStatus.SOLUTIONS
    elif undecided:
        status = SearchStatus.UNDECIDED
    else:
        status = SearchStatus.EMPTY

    outcome = SearchOutcome(
        status=status,
        solutions=tuple(sorted(solutions, key=lambda c: c.x)),
        undecided=tuple(sorted(undecided, key=lambda c: c.x)),
        min_residual=min_ball,
        min_residual_exact=min_exact,
        argmin=best_x,
        stats=stats,
        window=window,
        eta=spec.eta,
        tau=tau,
        mode=mode,
        exact_path=exact_path,
    )

    elapsed = time.perf_counter() - started
    search_candidates_total.labels(fate="enumerated").inc(stats.enumerated)
    search_candidates_total.labels(fate="pruned").inc(stats.pruned)
    search_refinements_total.inc(stats.refinements)
    search_outcomes_total.labels(status=status.value, mode=mode).inc()
    search_duration_seconds.labels(mode=mode).observe(elapsed)
    logger.info(
        "search.done",
        status=status.value,
        mode=mode,
        candidates=estimate,
        solutions=len(outcome.solutions),
        undecided=len(outcome.undecided),
        min_residual=None if min_exact is None else str(min_exact),
        elapsed_s=round(elapsed, 4),
        **stats.to_dict(),
    )
    return outcome
