import numpy as np

from pm_ftrl.config import LIMIT_ORDER_MAX_EXPANSIONS, LIMIT_ORDER_SHARE_TOL
from pm_ftrl.errors import InvalidParameter
from pm_ftrl.markets.cost import (
    MarketState,
    TradeReceipt,
    check_outcome,
    trade,
)


def _own_price(state: MarketState, outcome: int, shares: float) -> float:
    q = state.q.copy()
    q[outcome] += shares
    return float(state.cost_fn.prices(q)[outcome])


def shares_to_price(state: MarketState, outcome: int, limit_price: float) -> float:
    """Shares of `outcome` that move its price up to `limit_price` (0 if already there).

    Bisection on the own-price curve, which is continuous and non-decreasing.
    """
    if _own_price(state, outcome, 0.0) >= limit_price:
        return 0.0

    cf = state.cost_fn
    odds = limit_price / (1.0 - limit_price) * (cf.n - 1)
    upper = max(cf.liquidity * np.log(odds) + np.max(np.abs(state.q)) + 1.0, 1.0)
    for _ in range(LIMIT_ORDER_MAX_EXPANSIONS):
        if _own_price(state, outcome, upper) >= limit_price:
            break
        upper *= 2.0
    else:
        raise InvalidParameter(f"price of outcome {outcome} never reaches {limit_price}")

    lower = 0.0
    while upper - lower > LIMIT_ORDER_SHARE_TOL:
        middle = 0.5 * (lower + upper)
        if _own_price(state, outcome, middle) >= limit_price:
            upper = middle
        else:
            lower = middle
    return 0.5 * (lower + upper)


def accept_limit_order(
    state: MarketState, outcome: int, max_shares: float, limit_price: float
) -> tuple[MarketState, TradeReceipt]:
    """Fill a limit order: min(max_shares, shares that drive the price to limit_price)."""
    check_outcome(outcome, state.cost_fn.n)
    if not max_shares > 0:
        raise InvalidParameter(f"max_shares must be positive, got {max_shares}")
    if not 0.0 < limit_price < 1.0:
        raise InvalidParameter(f"limit_price must lie in (0, 1), got {limit_price}")

    if _own_price(state, outcome, 0.0) >= limit_price:
        accepted = 0.0
    elif _own_price(state, outcome, max_shares) <= limit_price:
        accepted = max_shares
    else:
        accepted = min(max_shares, shares_to_price(state, outcome, limit_price))

    order = np.zeros(state.cost_fn.n)
    order[outcome] = accepted
    return trade(state, order)
