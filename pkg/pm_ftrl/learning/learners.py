"""Expert-advice learners and the market-to-learner reduction.

Every learner maps the cumulative expert losses L_{t-1} to the weights it
plays in round t. Stepping is pure: a LearnerState goes in, a new one comes out.
"""

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from pm_ftrl.errors import InvalidInput, InvalidParameter
from pm_ftrl.learning.bounds import tune_epsilon
from pm_ftrl.markets.cost import CostFunction
from pm_ftrl.markets.scoring import ScoringRule, penalty_from_rule
from pm_ftrl.penalty import PenaltyFunction, log_sum_exp, maximize
from pm_ftrl.simplex import ArrayLike, ProbVector, _project, as_finite_vector


def _check_positive(name: str, value: float):
    if not value > 0:
        raise InvalidParameter(f"{name} must be positive, got {value}")


def ftrl_weights(regularizer: PenaltyFunction, eta: float, cumulative_losses: ArrayLike) -> ProbVector:
    """argmin_w w.L + R(w)/eta, i.e. the prices of the market with penalty R/eta at q = -L."""
    _check_positive("eta", eta)
    L = as_finite_vector(cumulative_losses, "cumulative losses")
    return maximize(regularizer.scaled(1.0 / eta), -L).prices


def market_reduction_weights(cf: CostFunction, epsilon: float, cumulative_losses: ArrayLike) -> ProbVector:
    """w_t = p(-epsilon * L_{t-1})."""
    _check_positive("epsilon", epsilon)
    L = as_finite_vector(cumulative_losses, "cumulative losses")
    return ProbVector(np.asarray(cf.prices(-epsilon * L)))


def wm_weights(eta: float, cumulative_losses: ArrayLike) -> ProbVector:
    """Weighted Majority: w_i proportional to exp(-eta L_i)."""
    _check_positive("eta", eta)
    L = as_finite_vector(cumulative_losses, "cumulative losses")
    return ProbVector(log_sum_exp(-L, 1.0 / eta)[1])


def ogd_weights(step: float, cumulative_losses: ArrayLike) -> ProbVector:
    """Lazy projected gradient descent: projection of uniform - step * L onto the simplex."""
    _check_positive("step", step)
    L = as_finite_vector(cumulative_losses, "cumulative losses")
    return ProbVector(_project(np.full(L.size, 1.0 / L.size) - step * L))


def ftl_weights(cumulative_losses: ArrayLike) -> ProbVector:
    """Follow the Leader; ties share the weight uniformly."""
    L = as_finite_vector(cumulative_losses, "cumulative losses")
    leaders = np.isclose(L, L.min(), rtol=0.0, atol=1e-12)
    return ProbVector(leaders / leaders.sum())


def scoring_rule_weights(rule: ScoringRule, epsilon: float, cumulative_losses: ArrayLike) -> ProbVector:
    """argmin_w sum_i w_i (epsilon L_i + s_i(w)); a proper rule turns the score term into alpha(w)."""
    return ftrl_weights(penalty_from_rule(rule), epsilon, cumulative_losses)


@dataclass(frozen=True)
class FtrlConfig:
    regularizer: PenaltyFunction
    eta: float


@dataclass(frozen=True)
class ReductionConfig:
    cost_fn: CostFunction
    epsilon: float

    @classmethod
    def tuned(cls, cost_fn: CostFunction, t: int) -> "ReductionConfig":
        """epsilon = sqrt(2B / (phi T)) from the market's loss and stability bounds."""
        if cost_fn.loss_bound is None or cost_fn.phi_bound is None:
            raise InvalidParameter(f"market '{cost_fn.name}' has no analytic loss or phi bound")
        return cls(cost_fn, tune_epsilon(cost_fn.loss_bound, cost_fn.phi_bound, t))


@dataclass(frozen=True)
class WmConfig:
    eta: float

    @classmethod
    def tuned(cls, n: int, t: int) -> "WmConfig":
        return cls(float(np.sqrt(np.log(n) / t)))


@dataclass(frozen=True)
class OgdConfig:
    step: float

    @classmethod
    def tuned(cls, n: int, t: int, b: float = 1.0) -> "OgdConfig":
        # Same step as the Quad-market reduction: epsilon / (2b).
        epsilon = tune_epsilon(b * (n - 1) / n, (n * n - 1) / (2.0 * b), t)
        return cls(epsilon / (2.0 * b))


@dataclass(frozen=True)
class FtlConfig:
    pass


LearnerConfig = Union[FtrlConfig, ReductionConfig, WmConfig, OgdConfig, FtlConfig]


def weights_for(config: LearnerConfig, cumulative_losses: ArrayLike) -> ProbVector:
    if isinstance(config, FtrlConfig):
        return ftrl_weights(config.regularizer, config.eta, cumulative_losses)
    if isinstance(config, ReductionConfig):
        return market_reduction_weights(config.cost_fn, config.epsilon, cumulative_losses)
    if isinstance(config, WmConfig):
        return wm_weights(config.eta, cumulative_losses)
    if isinstance(config, OgdConfig):
        return ogd_weights(config.step, cumulative_losses)
    if isinstance(config, FtlConfig):
        return ftl_weights(cumulative_losses)
    raise InvalidParameter(f"unknown learner config {config!r}")


@dataclass(frozen=True, eq=False)
class LearnerState:
    config: LearnerConfig
    cumulative_losses: np.ndarray
    round: int
    # Weights to play next round; computed from cumulative_losses only.
    weights: ProbVector


def start_learner(config: LearnerConfig, n: int) -> LearnerState:
    if n < 1:
        raise InvalidParameter(f"n must be positive, got {n}")
    losses = np.zeros(n)
    return LearnerState(config, losses, 0, weights_for(config, losses))


def step_learner(state: LearnerState, losses: ArrayLike) -> tuple[LearnerState, float]:
    """Play state.weights against one round of losses; returns the next state and the learner's loss."""
    row = as_finite_vector(losses, "round losses")
    if row.size != state.cumulative_losses.size:
        raise InvalidInput(f"round has {row.size} losses, learner has {state.cumulative_losses.size} experts")
    if row.min() < 0.0 or row.max() > 1.0:
        raise InvalidInput("round losses must lie in [0, 1]")

    played = float(np.asarray(state.weights) @ row)
    cumulative = state.cumulative_losses + row
    return (
        replace(
            state,
            cumulative_losses=cumulative,
            round=state.round + 1,
            weights=weights_for(state.config, cumulative),
        ),
        played,
    )
