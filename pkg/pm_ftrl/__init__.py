from pm_ftrl.bench import (
    ExperimentConfig,
    GeneratorKind,
    LossGenerator,
    generate,
    run_experiment,
    simulate_market_session,
    simulate_msr_session,
    verify_all,
)
from pm_ftrl.config import TOLERANCES, Tolerances
from pm_ftrl.errors import (
    InadmissibleReport,
    InvalidInput,
    InvalidOutcome,
    InvalidParameter,
    InvalidPenalty,
    InvalidTrace,
    PmFtrlError,
    SolverDiverged,
)
from pm_ftrl.learning import (
    FtlConfig,
    FtrlConfig,
    OgdConfig,
    ReductionConfig,
    RegretTrace,
    WmConfig,
    doubling_bound,
    ftl_weights,
    ftrl_bound,
    ftrl_weights,
    lemma1_decomposition,
    market_reduction_weights,
    ogd_weights,
    run_learner,
    run_with_doubling,
    scoring_rule_weights,
    theorem2_bound,
    tune_epsilon,
    wm_bound,
    wm_weights,
)
from pm_ftrl.markets import (
    CostFunction,
    MarketState,
    MsrState,
    ScoringRule,
    accept_limit_order,
    check_properness,
    check_validity,
    estimate_phi,
    make_custom,
    make_lmsr,
    make_log_rule,
    make_quad,
    make_quadratic_rule,
    msr_trade,
    msr_worst_case_loss,
    open_market,
    penalty_from_rule,
    price_jacobian,
    price_sensitivity,
    realized_maker_loss,
    rule_from_penalty,
    trade,
    verify_equivalence,
    verify_pricing_diff_bound,
    worst_case_loss,
)
from pm_ftrl.penalty import (
    PenaltyFunction,
    check_convexity,
    custom_penalty,
    entropic_penalty,
    maximize,
    penalty_range,
    quad_price_closed_form,
    quadratic_penalty,
)
from pm_ftrl.simplex import (
    LossMatrix,
    ProbVector,
    QuantityVector,
    entropy,
    project_to_simplex,
    random_interior,
    simplex_grid,
)

__all__ = [
    "ProbVector",
    "QuantityVector",
    "LossMatrix",
    "project_to_simplex",
    "entropy",
    "simplex_grid",
    "random_interior",
    "Tolerances",
    "TOLERANCES",
    "PenaltyFunction",
    "entropic_penalty",
    "quadratic_penalty",
    "custom_penalty",
    "maximize",
    "quad_price_closed_form",
    "penalty_range",
    "check_convexity",
    "CostFunction",
    "MarketState",
    "make_lmsr",
    "make_quad",
    "make_custom",
    "open_market",
    "trade",
    "realized_maker_loss",
    "worst_case_loss",
    "price_jacobian",
    "price_sensitivity",
    "estimate_phi",
    "check_validity",
    "verify_pricing_diff_bound",
    "accept_limit_order",
    "ScoringRule",
    "MsrState",
    "make_log_rule",
    "make_quadratic_rule",
    "msr_trade",
    "msr_worst_case_loss",
    "penalty_from_rule",
    "rule_from_penalty",
    "verify_equivalence",
    "check_properness",
    "FtrlConfig",
    "ReductionConfig",
    "WmConfig",
    "OgdConfig",
    "FtlConfig",
    "RegretTrace",
    "ftrl_weights",
    "market_reduction_weights",
    "wm_weights",
    "ogd_weights",
    "ftl_weights",
    "scoring_rule_weights",
    "tune_epsilon",
    "theorem2_bound",
    "ftrl_bound",
    "wm_bound",
    "doubling_bound",
    "run_learner",
    "run_with_doubling",
    "lemma1_decomposition",
    "LossGenerator",
    "GeneratorKind",
    "generate",
    "ExperimentConfig",
    "run_experiment",
    "simulate_market_session",
    "simulate_msr_session",
    "verify_all",
    "PmFtrlError",
    "InvalidInput",
    "InvalidParameter",
    "InvalidPenalty",
    "InvalidOutcome",
    "InadmissibleReport",
    "InvalidTrace",
    "SolverDiverged",
]
