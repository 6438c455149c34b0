"""Proper scoring rules, market scoring rules, and their cost-function counterparts.

A penalty and a scoring rule are linked both ways by

    alpha(p)  = sum_i p_i s_i(p)
    s_i(p)    = alpha(p) - sum_j (d alpha/d p_j) p_j + d alpha/d p_i

and the linked MSR and cost-function markets pay identical profits while all
prices stay positive.
"""

from dataclasses import dataclass, replace
from enum import Enum
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from pm_ftrl.config import (
    INTERIOR_PRICE_FLOOR,
    MAX_GRID_POINTS,
    MSR_GRID_RESOLUTION,
    SAMPLING_BOX,
    SOLVER_FLOOR,
    TOLERANCES,
    Tolerances,
)
from pm_ftrl.errors import InadmissibleReport, InvalidParameter, InvalidPenalty
from pm_ftrl.markets.cost import CostFunction
from pm_ftrl.penalty import (
    PenaltyFunction,
    PenaltyKind,
    entropic_penalty,
    quadratic_penalty,
)
from pm_ftrl.simplex import ArrayLike, ProbVector, random_interior, simplex_grid


class RuleKind(str, Enum):
    LOGARITHMIC = "logarithmic"
    QUADRATIC = "quadratic"
    FROM_PENALTY = "from_penalty"


@dataclass(frozen=True, eq=False)
class ScoringRule:
    # Score vector (s_1(p), ..., s_N(p)); accepts a single report or a stack of them.
    scores: Callable[[np.ndarray], np.ndarray]
    kind: RuleKind
    b: Optional[float] = None
    penalty: Optional[PenaltyFunction] = None

    def score(self, p: ArrayLike, outcome: int) -> float:
        return float(self.scores(np.asarray(p, dtype=np.float64))[outcome])

    def expected_score(self, belief: ArrayLike, report: ArrayLike) -> float:
        belief = np.asarray(belief, dtype=np.float64)
        s = self.scores(np.asarray(report, dtype=np.float64))
        with np.errstate(invalid="ignore"):
            return float(np.sum(np.where(belief > 0.0, belief * s, 0.0)))

    @property
    def requires_interior(self) -> bool:
        if self.kind == RuleKind.LOGARITHMIC:
            return True
        return self.penalty is not None and self.penalty.kind == PenaltyKind.ENTROPIC


def _check_b(b: float):
    if not b > 0:
        raise InvalidParameter(f"b must be positive, got {b}")


def make_log_rule(b: float) -> ScoringRule:
    """s_i(p) = b log p_i."""
    _check_b(b)

    def scores(p: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return b * np.log(p)

    return ScoringRule(scores=scores, kind=RuleKind.LOGARITHMIC, b=b)


def make_quadratic_rule(b: float) -> ScoringRule:
    """s_i(p) = b (2 p_i - sum_j p_j^2)."""
    _check_b(b)
    return ScoringRule(
        scores=lambda p: b * (2.0 * p - np.sum(p * p, axis=-1, keepdims=True)),
        kind=RuleKind.QUADRATIC,
        b=b,
    )


@dataclass(frozen=True, eq=False)
class MsrState:
    rule: ScoringRule
    current: ProbVector
    initial: ProbVector

    @classmethod
    def open(cls, rule: ScoringRule, initial: ProbVector) -> "MsrState":
        _check_admissible(rule, initial)
        return cls(rule=rule, current=initial, initial=initial)


def _finite_scores(rule: ScoringRule, p: np.ndarray) -> Optional[np.ndarray]:
    try:
        s = rule.scores(p)
    except InvalidPenalty:
        return None
    return s if np.all(np.isfinite(s)) else None


def _check_admissible(rule: ScoringRule, report: ProbVector):
    if report.is_interior():
        return
    if rule.requires_interior:
        raise InadmissibleReport(
            "a logarithmic score charges an infinite amount for zero-probability reports"
        )
    if rule.kind == RuleKind.FROM_PENALTY and _finite_scores(rule, np.asarray(report)) is None:
        raise InadmissibleReport(f"the rule has no finite score at the boundary report {report}")


def _limit_scores(rule: ScoringRule, points: np.ndarray) -> np.ndarray:
    """Scores at each row; rows where the rule is infinite or undefined take the limit from the interior."""
    out = np.empty_like(points)
    for k, p in enumerate(points):
        s = _finite_scores(rule, p)
        if s is None:
            s = rule.scores((1.0 - p.size * SOLVER_FLOOR) * p + SOLVER_FLOOR)
        out[k] = s
    return out


def msr_trade(state: MsrState, report: ProbVector) -> tuple[MsrState, np.ndarray]:
    """Move the standing report; payoff[i] = s_i(report) - s_i(current)."""
    if len(report) != len(state.current):
        raise InvalidParameter(f"report has {len(report)} entries, market has {len(state.current)}")
    _check_admissible(state.rule, report)
    payoffs = state.rule.scores(np.asarray(report)) - state.rule.scores(np.asarray(state.current))
    return replace(state, current=report), payoffs


def msr_session(
    rule: ScoringRule, initial: ProbVector, reports: Sequence[ProbVector]
) -> tuple[MsrState, list[np.ndarray]]:
    """Run the reports in order; returns the final state and each trader's payoff vector."""
    state = MsrState.open(rule, initial)
    payoffs = []
    for report in reports:
        state, payoff = msr_trade(state, report)
        payoffs.append(payoff)
    return state, payoffs


def _grid_resolution(n: int, resolution: float) -> int:
    m = max(1, int(round(1.0 / resolution)))
    while m > 1 and comb(m + n - 1, n - 1) > MAX_GRID_POINTS:
        m -= max(1, m // 20)
    return m


def msr_worst_case_loss(
    rule: ScoringRule, initial: ProbVector, resolution: float = MSR_GRID_RESOLUTION
) -> float:
    """max_i max_p s_i(p) - s_i(initial): the maker only pays the final trader's score."""
    _check_admissible(rule, initial)
    p0 = np.asarray(initial)
    n = p0.size
    base = rule.scores(p0)

    # Both built-in rules peak at the vertices.
    vertices = np.eye(n)
    if rule.kind == RuleKind.FROM_PENALTY:
        at_vertices = _limit_scores(rule, vertices)
    else:
        at_vertices = rule.scores(vertices)
    analytic = float(np.max(np.diag(at_vertices) - base))

    if rule.kind == RuleKind.LOGARITHMIC:
        return analytic

    grid = simplex_grid(n, _grid_resolution(n, resolution))
    if rule.kind == RuleKind.FROM_PENALTY:
        at_grid = _limit_scores(rule, grid)
    else:
        at_grid = rule.scores(grid)
    with np.errstate(invalid="ignore"):
        certificate = float(np.nanmax(at_grid - base))
    return max(analytic, certificate)


def penalty_from_rule(rule: ScoringRule) -> PenaltyFunction:
    """alpha(p) = sum_i p_i s_i(p), evaluated through the rule's scores."""

    def value(p: np.ndarray) -> float:
        s = rule.scores(p)
        with np.errstate(invalid="ignore"):
            return np.sum(np.where(p > 0.0, p * s, 0.0), axis=-1)

    if rule.kind == RuleKind.LOGARITHMIC:
        return PenaltyFunction(
            value, entropic_penalty(rule.b).gradient, PenaltyKind.ENTROPIC, rule.b
        )
    if rule.kind == RuleKind.QUADRATIC:
        return PenaltyFunction(
            value, quadratic_penalty(rule.b).gradient, PenaltyKind.QUADRATIC, rule.b
        )

    source = rule.penalty
    return PenaltyFunction(
        value,
        None if source is None else source.gradient,
        PenaltyKind.CUSTOM if source is None else source.kind,
        None if source is None else source.b,
    )


def _central_gradient(alpha: PenaltyFunction, h: float) -> Callable[[np.ndarray], np.ndarray]:
    def gradient(p: np.ndarray) -> np.ndarray:
        g = np.empty(p.size)
        for j in range(p.size):
            step = min(h, 0.5 * p[j]) if p[j] > 0 else h
            e = np.zeros(p.size)
            e[j] = step
            g[j] = (alpha(p + e) - alpha(p - e)) / (2.0 * step)
        return g

    return gradient


def rule_from_penalty(
    alpha: PenaltyFunction, tolerances: Tolerances = TOLERANCES
) -> ScoringRule:
    """s_i(p) = alpha(p) - sum_j (d alpha/d p_j) p_j + d alpha/d p_i.

    Uses the penalty's own gradient when it has one, central differences otherwise.
    """
    if alpha.gradient is not None:
        gradient = alpha.grad
    else:
        gradient = _central_gradient(alpha, tolerances.finitediff_h)

    def single(p: np.ndarray) -> np.ndarray:
        value = alpha(p)
        if not np.isfinite(value):
            raise InvalidPenalty(f"penalty is not finite at {p}")
        g = gradient(p)
        if not np.all(np.isfinite(g)):
            raise InvalidPenalty(f"penalty gradient is not finite at {p}")
        return value - g @ p + g

    def scores(p: np.ndarray) -> np.ndarray:
        if p.ndim == 1:
            return single(p)
        return np.array([single(row) for row in p])

    return ScoringRule(scores=scores, kind=RuleKind.FROM_PENALTY, b=alpha.b, penalty=alpha)


def quantities_for_report(rule: ScoringRule, report: ArrayLike) -> np.ndarray:
    """q_i = s_i(r): the share vector at which the linked cost market quotes r."""
    return rule.scores(np.asarray(report, dtype=np.float64))


@dataclass
class EquivalenceReport:
    trials: int
    # max over trades and outcomes of |cost-market profit - MSR profit|
    max_profit_gap: float
    reach_trials: int
    # max over targets r of |p(s(r)) - r|
    max_reach_gap: float
    profit_tolerance: float = 1e-8
    reach_tolerance: float = TOLERANCES.equality_eps

    @property
    def passed(self) -> bool:
        return (
            self.max_profit_gap <= self.profit_tolerance
            and self.max_reach_gap <= self.reach_tolerance
        )


def _interior_quantities(
    cf: CostFunction, rng: np.random.Generator, scale: float
) -> tuple[np.ndarray, np.ndarray]:
    for _ in range(10_000):
        q = rng.uniform(-scale, scale, size=cf.n)
        p = np.asarray(cf.prices(q))
        if np.all(p > INTERIOR_PRICE_FLOOR):
            return q, p
    raise InvalidParameter("could not sample quantities with all prices above the floor")


def verify_equivalence(
    rule: ScoringRule, cf: CostFunction, trials: int, seed: int, reach_trials: int = 100
) -> EquivalenceReport:
    """Compare per-outcome trade profits of the MSR and the linked cost market."""
    if trials < 1 or reach_trials < 1:
        raise InvalidParameter("trials must be at least 1")
    rng = np.random.default_rng(seed)
    scale = min(cf.liquidity, SAMPLING_BOX)

    worst_profit = 0.0
    for _ in range(trials):
        q, p = _interior_quantities(cf, rng, scale)
        q_next, p_next = _interior_quantities(cf, rng, scale)
        cost_profit = (q_next - q) - (cf.cost(q_next) - cf.cost(q))
        msr_profit = rule.scores(p_next) - rule.scores(p)
        worst_profit = max(worst_profit, float(np.max(np.abs(cost_profit - msr_profit))))

    worst_reach = 0.0
    for target in random_interior(rng, cf.n, size=reach_trials, floor=INTERIOR_PRICE_FLOOR):
        reached = np.asarray(cf.prices(quantities_for_report(rule, target)))
        worst_reach = max(worst_reach, float(np.max(np.abs(reached - target))))

    return EquivalenceReport(
        trials=trials,
        max_profit_gap=worst_profit,
        reach_trials=reach_trials,
        max_reach_gap=worst_reach,
    )


def check_properness(rule: ScoringRule, n: int, seed: int = 0, beliefs: int = 100) -> float:
    """Worst gain from misreporting: max over sampled (p, p') of E_p[s(p')] - E_p[s(p)]."""
    rng = np.random.default_rng(seed)
    truths = random_interior(rng, n, size=beliefs, floor=1e-3)
    worst = -np.inf
    for belief in truths:
        reports = random_interior(rng, n, size=beliefs, floor=1e-3)
        honest = rule.expected_score(belief, belief)
        for report in reports:
            worst = max(worst, rule.expected_score(belief, report) - honest)
    return float(worst)
