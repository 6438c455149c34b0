from pm_ftrl.bench.experiments import (
    Algorithm,
    ExperimentConfig,
    ExperimentSummary,
    run_experiment,
    run_trace,
)
from pm_ftrl.bench.generators import GeneratorKind, LossGenerator, generate
from pm_ftrl.bench.sessions import (
    MarketSession,
    MsrSession,
    simulate_market_session,
    simulate_msr_session,
)
from pm_ftrl.bench.verification import CheckResult, VerificationReport, verify_all
