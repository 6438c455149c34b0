"""Cost-function-based market makers.

A trader moving the outstanding shares from q to q + r pays C(q + r) - C(q);
the instantaneous prices are p_i = dC/dq_i.
"""

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from pm_ftrl.errors import InvalidOutcome, InvalidParameter, InvalidPenalty
from pm_ftrl.penalty import (
    PenaltyFunction,
    entropic_penalty,
    is_convex,
    log_sum_exp,
    maximize,
    penalty_range,
    quad_price_closed_form,
    quadratic_penalty,
)
from pm_ftrl.simplex import ArrayLike, ProbVector, as_finite_vector


@dataclass(frozen=True, eq=False)
class CostFunction:
    n: int
    cost: Callable[[ArrayLike], float]
    prices: Callable[[ArrayLike], ProbVector]
    penalty: Optional[PenaltyFunction] = None
    phi_bound: Optional[float] = None
    loss_bound: Optional[float] = None
    name: str = "custom"
    # Liquidity parameter b; scales the limit-order search bracket.
    liquidity: float = 1.0
    jacobian: Optional[Callable[[ArrayLike], np.ndarray]] = None


def _check_market_parameters(b: float, n: int):
    if not b > 0:
        raise InvalidParameter(f"b must be positive, got {b}")
    if n < 2:
        raise InvalidParameter(f"a market needs at least 2 outcomes, got {n}")


def make_lmsr(b: float, n: int) -> CostFunction:
    """C(q) = b log sum_i exp(q_i / b)."""
    _check_market_parameters(b, n)

    def cost(q: ArrayLike) -> float:
        return log_sum_exp(as_finite_vector(q, "q"), b)[0]

    def prices(q: ArrayLike) -> ProbVector:
        return ProbVector(log_sum_exp(as_finite_vector(q, "q"), b)[1])

    def jacobian(q: ArrayLike) -> np.ndarray:
        p = log_sum_exp(as_finite_vector(q, "q"), b)[1]
        return (np.diag(p) - np.outer(p, p)) / b

    return CostFunction(
        n=n,
        cost=cost,
        prices=prices,
        penalty=entropic_penalty(b),
        phi_bound=2.0 / b,
        loss_bound=b * float(np.log(n)),
        name="lmsr",
        liquidity=b,
        jacobian=jacobian,
    )


def make_quad(b: float, n: int) -> CostFunction:
    """C(q) = sup_p p.q - b sum_i p_i^2 (Quad-SCPM with a uniform prior)."""
    _check_market_parameters(b, n)

    def prices(q: ArrayLike) -> ProbVector:
        return quad_price_closed_form(b, q)[0]

    def cost(q: ArrayLike) -> float:
        q = as_finite_vector(q, "q")
        p = np.asarray(quad_price_closed_form(b, q)[0])
        return float(p @ q - b * (p @ p))

    def jacobian(q: ArrayLike) -> np.ndarray:
        # One-sided regime derivative: (delta_ij - 1/|M|)/(2b) on the positive support M.
        support = np.asarray(prices(q)) > 0.0
        k = support.sum()
        block = (np.eye(n) - 1.0 / k) / (2.0 * b)
        return np.where(np.outer(support, support), block, 0.0)

    return CostFunction(
        n=n,
        cost=cost,
        prices=prices,
        penalty=quadratic_penalty(b),
        phi_bound=(n * n - 1) / (2.0 * b),
        loss_bound=b * (n - 1) / n,
        name="quad",
        liquidity=b,
        jacobian=jacobian,
    )


def make_custom(penalty: PenaltyFunction, n: int, seed: int = 0) -> CostFunction:
    """Convex cost function represented by an arbitrary convex penalty."""
    if n < 1:
        raise InvalidParameter(f"n must be positive, got {n}")
    if not is_convex(penalty, n, seed):
        raise InvalidPenalty("penalty failed the convexity spot-check")

    return CostFunction(
        n=n,
        cost=lambda q: maximize(penalty, q).cost,
        prices=lambda q: maximize(penalty, q).prices,
        penalty=penalty,
        name="custom",
        liquidity=penalty.b or 1.0,
    )


def worst_case_loss(cf: CostFunction) -> float:
    """Analytic loss bound when known, otherwise the range of the penalty."""
    if cf.loss_bound is not None:
        return cf.loss_bound
    if cf.penalty is None:
        raise InvalidParameter(f"cost function '{cf.name}' has neither a loss bound nor a penalty")
    return penalty_range(cf.penalty, cf.n).value


def price_jacobian(cf: CostFunction, q: ArrayLike) -> np.ndarray:
    if cf.jacobian is None:
        raise InvalidParameter(f"cost function '{cf.name}' has no analytic Jacobian")
    return cf.jacobian(q)


@dataclass(frozen=True, eq=False)
class MarketState:
    cost_fn: CostFunction
    q: np.ndarray
    # Cumulative trade payments; equals C(q) - C(0).
    collected: float
    initial_cost: float

    @property
    def prices(self) -> ProbVector:
        return self.cost_fn.prices(self.q)


@dataclass(frozen=True, eq=False)
class TradeReceipt:
    shares: np.ndarray
    payment: float
    prices_before: ProbVector
    prices_after: ProbVector


def open_market(cf: CostFunction) -> MarketState:
    q = np.zeros(cf.n)
    q.setflags(write=False)
    return MarketState(cost_fn=cf, q=q, collected=0.0, initial_cost=cf.cost(q))


def trade(state: MarketState, r: ArrayLike) -> tuple[MarketState, TradeReceipt]:
    cf = state.cost_fn
    r = as_finite_vector(r, "trade")
    if r.size != cf.n:
        raise InvalidParameter(f"trade has {r.size} entries, market has {cf.n} outcomes")

    q_after = state.q + r
    q_after.setflags(write=False)
    payment = cf.cost(q_after) - cf.cost(state.q)
    receipt = TradeReceipt(
        shares=r,
        payment=payment,
        prices_before=cf.prices(state.q),
        prices_after=cf.prices(q_after),
    )
    return replace(state, q=q_after, collected=state.collected + payment), receipt


def check_outcome(outcome: int, n: int):
    if not 0 <= outcome < n:
        raise InvalidOutcome(f"outcome {outcome} is outside 0..{n - 1}")


def realized_maker_loss(state: MarketState, outcome: int) -> float:
    """Payout owed on `outcome` minus the money taken in."""
    check_outcome(outcome, state.cost_fn.n)
    return float(state.q[outcome] - state.collected)


MARKET_FACTORIES: dict[str, Callable[[float, int], CostFunction]] = {
    "lmsr": make_lmsr,
    "quad": make_quad,
}
