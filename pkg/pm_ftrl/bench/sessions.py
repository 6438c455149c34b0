"""Random trading sessions against the market makers, logged as CSV rows."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pm_ftrl.errors import InvalidParameter
from pm_ftrl.markets.cost import CostFunction, MarketState, open_market, trade
from pm_ftrl.markets.scoring import MsrState, ScoringRule, msr_trade
from pm_ftrl.simplex import ProbVector, random_interior
from pm_ftrl.utils import write_csv

# Reports stay this far inside the simplex so the log rule admits them.
REPORT_FLOOR = 1e-3


@dataclass(eq=False)
class MarketSession:
    final: MarketState
    rows: list[list]

    @property
    def header(self) -> list[str]:
        return ["step", "outcome_dim", "shares", "payment"] + [
            f"price_{i + 1}" for i in range(self.final.cost_fn.n)
        ]

    def write(self, path: Path):
        write_csv(path, self.header, self.rows)


@dataclass(eq=False)
class MsrSession:
    final: MsrState
    rows: list[list]
    payoffs: list[np.ndarray]

    @property
    def header(self) -> list[str]:
        n = len(self.final.current)
        return (
            ["step"]
            + [f"report_{i + 1}" for i in range(n)]
            + [f"payoff_if_{i + 1}" for i in range(n)]
        )

    def write(self, path: Path):
        write_csv(path, self.header, self.rows)


def _check_count(trades: int):
    if trades < 0:
        raise InvalidParameter(f"number of trades must be non-negative, got {trades}")


def simulate_market_session(cf: CostFunction, trades: int, seed: int) -> MarketSession:
    """Single-outcome trades of random size; buys outweigh sales so quantities drift."""
    _check_count(trades)
    rng = np.random.default_rng(seed)
    state = open_market(cf)
    rows = []
    for step in range(1, trades + 1):
        outcome = int(rng.integers(cf.n))
        shares = float(rng.uniform(-0.5, 1.5) * cf.liquidity)
        order = np.zeros(cf.n)
        order[outcome] = shares
        state, receipt = trade(state, order)
        # CSV keeps 1-based outcome numbering.
        rows.append([step, outcome + 1, shares, receipt.payment] + receipt.prices_after.tolist())
    return MarketSession(state, rows)


def simulate_msr_session(rule: ScoringRule, n: int, reports: int, seed: int) -> MsrSession:
    """Uniform opening report followed by random interior reports."""
    _check_count(reports)
    if n < 2:
        raise InvalidParameter(f"a market needs at least 2 outcomes, got {n}")
    rng = np.random.default_rng(seed)
    state = MsrState.open(rule, ProbVector.uniform(n))
    rows, payoffs = [], []
    for step in range(1, reports + 1):
        report = ProbVector(random_interior(rng, n, floor=REPORT_FLOOR))
        state, payoff = msr_trade(state, report)
        payoffs.append(payoff)
        rows.append([step] + report.tolist() + payoff.tolist())
    return MsrSession(state, rows, payoffs)
