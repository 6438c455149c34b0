"""Run learners over loss sequences and account for their regret."""

from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np
from tqdm import tqdm

from pm_ftrl.errors import InvalidTrace
from pm_ftrl.learning.bounds import doubling_periods
from pm_ftrl.learning.learners import (
    LearnerConfig,
    ftrl_weights,
    start_learner,
    step_learner,
)
from pm_ftrl.penalty import PenaltyFunction
from pm_ftrl.simplex import LossMatrix


@dataclass
class RegretRecord:
    t: int
    alg_loss: float
    best_expert_loss: float
    regret: float
    bound: Optional[float] = None


@dataclass(eq=False)
class RegretTrace:
    losses: LossMatrix
    # Row t holds the weights played in round t + 1.
    weights: np.ndarray
    alg_losses: np.ndarray
    bound: Optional[float] = None
    periods: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if self.weights.shape != self.losses.rows.shape or self.alg_losses.shape != (self.losses.t,):
            raise InvalidTrace(
                f"trace shapes {self.weights.shape}/{self.alg_losses.shape} "
                f"do not match losses {self.losses.rows.shape}"
            )

    @property
    def t(self) -> int:
        return self.losses.t

    @property
    def best_expert_losses(self) -> np.ndarray:
        return self.losses.cumulative()[1:].min(axis=1)

    @property
    def cumulative_regret(self) -> np.ndarray:
        return np.cumsum(self.alg_losses) - self.best_expert_losses

    @property
    def final_regret(self) -> float:
        return float(self.cumulative_regret[-1])

    @property
    def records(self) -> list[RegretRecord]:
        cumulative = np.cumsum(self.alg_losses)
        best = self.best_expert_losses
        return [
            RegretRecord(t + 1, float(cumulative[t]), float(best[t]), float(cumulative[t] - best[t]), self.bound)
            for t in range(self.t)
        ]

    def as_rows(self) -> list[dict]:
        return [asdict(record) for record in self.records]


def run_learner(
    config: LearnerConfig,
    losses: LossMatrix,
    bound: Optional[float] = None,
    progress: bool = False,
) -> RegretTrace:
    """Play rounds 1..T: weights from L_{t-1}, loss w_t . l_t, then update L."""
    state = start_learner(config, losses.n)
    weights = np.empty(losses.rows.shape)
    alg_losses = np.empty(losses.t)

    for t in tqdm(range(losses.t), desc="Rounds", disable=not progress, leave=False):
        weights[t] = np.asarray(state.weights)
        state, alg_losses[t] = step_learner(state, losses[t])

    return RegretTrace(losses, weights, alg_losses, bound, [(0, losses.t)])


def run_with_doubling(
    family: Callable[[int], LearnerConfig],
    losses: LossMatrix,
    bound: Optional[float] = None,
    progress: bool = False,
) -> RegretTrace:
    """Restart the learner on periods of length 1, 2, 4, ..., each tuned for its nominal length."""
    weights = np.empty(losses.rows.shape)
    alg_losses = np.empty(losses.t)
    periods = doubling_periods(losses.t)

    for k, (start, stop) in enumerate(tqdm(periods, desc="Periods", disable=not progress, leave=False)):
        state = start_learner(family(2 ** k), losses.n)
        for t in range(start, stop):
            weights[t] = np.asarray(state.weights)
            state, alg_losses[t] = step_learner(state, losses[t])

    return RegretTrace(losses, weights, alg_losses, bound, periods)


def lemma1_decomposition(
    trace: RegretTrace,
    regularizer: PenaltyFunction,
    eta: float,
    atol: float = 1e-6,
) -> tuple[float, float]:
    """(drift, range) with regret <= drift + range for an FTRL run.

    drift = sum_t l_t . (w_t - w_{t+1}); range = (R(e*) - R(w_1)) / eta, e* the best expert.
    """
    cumulative = trace.losses.cumulative()
    # w_{T+1} closes the telescoping sum.
    expected = np.array([np.asarray(ftrl_weights(regularizer, eta, L)) for L in cumulative])
    if not np.allclose(trace.weights, expected[:-1], rtol=0.0, atol=atol):
        raise InvalidTrace("trace weights do not come from FTRL with this regularizer and eta")

    drift = float(np.sum(trace.losses.rows * (expected[:-1] - expected[1:])))
    best = np.zeros(trace.losses.n)
    best[int(np.argmin(cumulative[-1]))] = 1.0
    spread = regularizer(best) - regularizer(expected[0])
    return drift, float(spread / eta)
