"""Regret experiments: one learner, one loss generator, one bound."""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from pm_ftrl.bench.generators import GeneratorKind, LossGenerator, generate
from pm_ftrl.errors import InvalidParameter
from pm_ftrl.learning.bounds import (
    doubling_bound,
    reduction_bound,
    tune_epsilon,
    wm_bound,
)
from pm_ftrl.learning.learners import (
    FtlConfig,
    LearnerConfig,
    OgdConfig,
    ReductionConfig,
    WmConfig,
)
from pm_ftrl.learning.runner import RegretTrace, run_learner, run_with_doubling
from pm_ftrl.markets.cost import CostFunction
from pm_ftrl.utils import write_csv

TRACE_HEADER = ["t", "alg_loss", "best_expert_loss", "regret", "bound"]

# FTL on the alternating adversary loses about half a unit per round.
FTL_LINEAR_RATE = 0.45


class Algorithm(str, Enum):
    WM = "wm"
    OGD = "ogd"
    FTL = "ftl"
    REDUCTION = "reduction"


@dataclass
class ExperimentConfig:
    algo: Algorithm
    # Market for the reduction; OGD and the comparison bounds use its liquidity b.
    cost_fn: CostFunction
    t: int
    generator: GeneratorKind
    seed: int = 0
    epsilon: Optional[float] = None
    eta: Optional[float] = None
    doubling: bool = False
    out: Optional[Path] = None

    def __post_init__(self):
        self.algo = Algorithm(self.algo)
        self.generator = GeneratorKind(self.generator)
        if self.t < 1:
            raise InvalidParameter(f"T must be at least 1, got {self.t}")
        if self.doubling and self.algo == Algorithm.FTL:
            raise InvalidParameter("FTL has no step size to restart with")

    @property
    def n(self) -> int:
        return self.cost_fn.n

    @property
    def b(self) -> float:
        return self.cost_fn.liquidity


@dataclass
class ExperimentSummary:
    final_regret: float
    bound: float
    passed: bool
    # FTL's bound is a lower bound on regret; passing means the regret really is linear.
    expected_linear: bool = False

    def line(self) -> str:
        return f"{self.final_regret!r},{self.bound!r},{'pass' if self.passed else 'fail'}"


def _quad_constants(n: int, b: float) -> tuple[float, float]:
    return b * (n - 1) / n, (n * n - 1) / (2.0 * b)


def _market_constants(cf: CostFunction) -> tuple[float, float]:
    if cf.loss_bound is None or cf.phi_bound is None:
        raise InvalidParameter(f"market '{cf.name}' has no analytic loss or phi bound")
    return cf.loss_bound, cf.phi_bound


def learner_for(cfg: ExperimentConfig) -> tuple[Callable[[int], LearnerConfig], Callable[[int], float]]:
    """(config for a horizon, regret bound for a horizon) of the chosen learner."""
    n, b = cfg.n, cfg.b

    if cfg.algo == Algorithm.WM:
        if cfg.eta is not None:
            return lambda t: WmConfig(cfg.eta), lambda t: wm_bound(cfg.eta, n, t)
        return lambda t: WmConfig.tuned(n, t), lambda t: wm_bound(WmConfig.tuned(n, t).eta, n, t)

    if cfg.algo == Algorithm.OGD:
        B, phi = _quad_constants(n, b)
        if cfg.epsilon is not None:
            return (
                lambda t: OgdConfig(cfg.epsilon / (2.0 * b)),
                lambda t: reduction_bound(B, phi, t, cfg.epsilon),
            )
        return lambda t: OgdConfig.tuned(n, t, b), lambda t: reduction_bound(B, phi, t, tune_epsilon(B, phi, t))

    if cfg.algo == Algorithm.REDUCTION:
        B, phi = _market_constants(cfg.cost_fn)
        if cfg.epsilon is not None:
            return (
                lambda t: ReductionConfig(cfg.cost_fn, cfg.epsilon),
                lambda t: reduction_bound(B, phi, t, cfg.epsilon),
            )
        return (
            lambda t: ReductionConfig.tuned(cfg.cost_fn, t),
            lambda t: reduction_bound(B, phi, t, tune_epsilon(B, phi, t)),
        )

    return lambda t: FtlConfig(), lambda t: FTL_LINEAR_RATE * t


def _doubling_bound(cfg: ExperimentConfig) -> float:
    if cfg.algo == Algorithm.WM:
        # Tuned WM is the LMSR reduction with B = log N, phi = 2 at b = 1.
        return doubling_bound(float(np.log(cfg.n)), 2.0, cfg.t)
    if cfg.algo == Algorithm.OGD:
        return doubling_bound(*_quad_constants(cfg.n, cfg.b), cfg.t)
    return doubling_bound(*_market_constants(cfg.cost_fn), cfg.t)


def run_trace(cfg: ExperimentConfig, progress: bool = False) -> tuple[RegretTrace, ExperimentSummary]:
    family, bound_for = learner_for(cfg)
    generator = LossGenerator(
        cfg.generator,
        cfg.seed,
        cfg.n,
        cfg.t,
        shadow=family(cfg.t) if cfg.generator == GeneratorKind.ADAPTIVE else None,
    )
    losses = generate(generator)

    if cfg.doubling:
        trace = run_with_doubling(family, losses, _doubling_bound(cfg), progress=progress)
    else:
        trace = run_learner(family(cfg.t), losses, bound_for(cfg.t), progress=progress)

    regret = trace.final_regret
    if cfg.algo == Algorithm.FTL:
        summary = ExperimentSummary(regret, trace.bound, regret >= trace.bound, expected_linear=True)
    else:
        summary = ExperimentSummary(regret, trace.bound, regret <= trace.bound + 1e-6)
    return trace, summary


def write_trace(trace: RegretTrace, path: Path):
    write_csv(
        path,
        TRACE_HEADER,
        ([r.t, r.alg_loss, r.best_expert_loss, r.regret, r.bound] for r in trace.records),
    )


def run_experiment(cfg: ExperimentConfig, progress: bool = False) -> ExperimentSummary:
    """Run the learner, write its trace CSV (when cfg.out is set) and summarize the bound check."""
    trace, summary = run_trace(cfg, progress=progress)
    if cfg.out is not None:
        write_trace(trace, cfg.out)
    return summary
