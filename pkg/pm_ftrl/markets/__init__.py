from pm_ftrl.markets.cost import (
    MARKET_FACTORIES,
    CostFunction,
    MarketState,
    TradeReceipt,
    make_custom,
    make_lmsr,
    make_quad,
    open_market,
    price_jacobian,
    realized_maker_loss,
    trade,
    worst_case_loss,
)
from pm_ftrl.markets.orders import accept_limit_order, shares_to_price
from pm_ftrl.markets.scoring import (
    EquivalenceReport,
    MsrState,
    RuleKind,
    ScoringRule,
    check_properness,
    make_log_rule,
    make_quadratic_rule,
    msr_session,
    msr_trade,
    msr_worst_case_loss,
    penalty_from_rule,
    quantities_for_report,
    rule_from_penalty,
    verify_equivalence,
)
from pm_ftrl.markets.stability import (
    BoundReport,
    PropertyCheck,
    ValidityReport,
    check_validity,
    estimate_phi,
    price_sensitivity,
    verify_pricing_diff_bound,
)
