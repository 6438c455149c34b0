from enum import Enum

from pm_ftrl.bench.experiments import Algorithm
from pm_ftrl.bench.generators import GeneratorKind
from pm_ftrl.markets.cost import MARKET_FACTORIES
from pm_ftrl.markets.scoring import make_log_rule, make_quadratic_rule


class MarketChoice(str, Enum):
    LMSR = "lmsr"
    QUAD = "quad"


class RuleChoice(str, Enum):
    LOG_RULE = "log-rule"
    QUAD_RULE = "quad-rule"


AlgoChoice = Algorithm
GeneratorChoice = GeneratorKind

MARKETS = {choice: MARKET_FACTORIES[choice.value] for choice in MarketChoice}

RULES = {
    RuleChoice.LOG_RULE: make_log_rule,
    RuleChoice.QUAD_RULE: make_quadratic_rule,
}
