from pm_ftrl.learning.bounds import (
    doubling_bound,
    doubling_periods,
    ftrl_bound,
    reduction_bound,
    theorem2_bound,
    tune_epsilon,
    wm_bound,
)
from pm_ftrl.learning.learners import (
    FtlConfig,
    FtrlConfig,
    LearnerConfig,
    LearnerState,
    OgdConfig,
    ReductionConfig,
    WmConfig,
    ftl_weights,
    ftrl_weights,
    market_reduction_weights,
    ogd_weights,
    scoring_rule_weights,
    start_learner,
    step_learner,
    weights_for,
    wm_weights,
)
from pm_ftrl.learning.runner import (
    RegretRecord,
    RegretTrace,
    lemma1_decomposition,
    run_learner,
    run_with_doubling,
)
