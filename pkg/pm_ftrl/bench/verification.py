"""The full bound and equivalence suite, one report line per check."""

from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from tqdm import tqdm

from pm_ftrl.bench.experiments import Algorithm, ExperimentConfig, run_trace
from pm_ftrl.bench.generators import GeneratorKind
from pm_ftrl.bench.sessions import simulate_market_session, simulate_msr_session
from pm_ftrl.config import VALIDITY_TOLERANCES, VERIFICATION_SUITE, Tolerances
from pm_ftrl.learning.learners import (
    ReductionConfig,
    ftrl_weights,
    market_reduction_weights,
    ogd_weights,
    wm_weights,
)
from pm_ftrl.learning.runner import run_learner
from pm_ftrl.markets.cost import (
    MARKET_FACTORIES,
    CostFunction,
    make_lmsr,
    make_quad,
    realized_maker_loss,
    worst_case_loss,
)
from pm_ftrl.markets.scoring import (
    make_log_rule,
    make_quadratic_rule,
    msr_worst_case_loss,
    penalty_from_rule,
    rule_from_penalty,
    verify_equivalence,
)
from pm_ftrl.markets.stability import check_validity, estimate_phi, verify_pricing_diff_bound
from pm_ftrl.penalty import (
    entropic_penalty,
    log_sum_exp,
    maximize,
    quad_price_closed_form,
    quadratic_penalty,
)
from pm_ftrl.simplex import LossMatrix, ProbVector, random_interior, simplex_grid

# Generic solver tolerance when it is compared against closed forms at 1e-8.
ORACLE_TOLERANCES = Tolerances(solver_eps=1e-10)


@dataclass
class CheckResult:
    name: str
    observed: float
    bound: float
    passed: bool

    def line(self) -> str:
        return f"{self.name},{self.observed!r},{self.bound!r},{'pass' if self.passed else 'fail'}"


@dataclass
class VerificationReport:
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def lines(self) -> list[str]:
        return [check.line() for check in self.checks]


def _at_most(name: str, observed: float, bound: float) -> CheckResult:
    return CheckResult(name, float(observed), float(bound), bool(observed <= bound))


def _at_least(name: str, observed: float, bound: float) -> CheckResult:
    return CheckResult(name, float(observed), float(bound), bool(observed >= bound))


def _validity_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["validity"]
    for market, b in suite["markets"].items():
        report = check_validity(MARKET_FACTORIES[market](b, suite["n"]), suite["samples"], seed)
        for check in report.checks:
            yield _at_most(f"{market}_validity_{check.name}", check.worst_violation, check.tolerance)

    # C(q) = sum q_i^2 is differentiable and increasing nowhere near translation invariant.
    broken = CostFunction(
        n=suite["n"],
        cost=lambda q: float(np.sum(np.asarray(q) ** 2)),
        prices=lambda q: 2.0 * np.asarray(q),
        name="sum_of_squares",
    )
    shift = check_validity(broken, suite["samples"], seed)["translation_invariance"]
    yield _at_least(
        "broken_cost_translation_invariance_violation",
        shift.worst_violation,
        VALIDITY_TOLERANCES["translation_invariance"],
    )


def _phi_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["phi"]
    for market, factory in MARKET_FACTORIES.items():
        for b in suite["b"]:
            for n in suite["n"]:
                cf = factory(b, n)
                yield _at_most(
                    f"{market}_phi_estimate:b={b:g}:n={n}",
                    estimate_phi(cf, suite["samples"], seed),
                    cf.phi_bound + 1e-3,
                )


def _pricing_diff_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["pricing_diff"]
    for market, factory in MARKET_FACTORIES.items():
        cf = factory(suite["b"], suite["n"])
        for eps in suite["eps"]:
            report = verify_pricing_diff_bound(cf, eps, suite["trials"], seed)
            yield CheckResult(
                f"{market}_pricing_diff:eps={eps:g}", report.max_abs_gap, report.bound, report.passed
            )


def _maker_loss_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["maker_loss"]
    for market, factory in MARKET_FACTORIES.items():
        cf = factory(suite["b"], suite["n"])
        worst = -np.inf
        for session in range(suite["sessions"]):
            final = simulate_market_session(cf, suite["trades"], seed + session).final
            worst = max(worst, max(realized_maker_loss(final, i) for i in range(cf.n)))
        yield _at_most(f"{market}_max_maker_loss", worst, worst_case_loss(cf) + 1e-6)

    b, n = suite["b"], suite["n"]
    for name, rule, bound in (
        ("log", make_log_rule(b), b * np.log(n)),
        ("quad", make_quadratic_rule(b), b * (n - 1) / n),
    ):
        yield _at_most(
            f"msr_{name}_worst_case_loss", msr_worst_case_loss(rule, ProbVector.uniform(n)), bound + 1e-6
        )

        # Trader payoffs telescope to s(final) - s(initial).
        session = simulate_msr_session(rule, n, suite["trades"], seed)
        total = np.sum(session.payoffs, axis=0)
        expected = rule.scores(np.asarray(session.final.current)) - rule.scores(
            np.asarray(session.final.initial)
        )
        yield _at_most(f"msr_{name}_conservation_gap", np.max(np.abs(total - expected)), 1e-9)


def _equivalence_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["equivalence"]
    b, n = suite["b"], suite["n"]
    reports = [
        verify_equivalence(make_log_rule(b), make_lmsr(b, n), suite["trials"], seed, suite["reach_trials"]),
        verify_equivalence(
            make_quadratic_rule(b), make_quad(b, n), suite["trials"], seed, suite["reach_trials"]
        ),
    ]
    yield _at_most("msr_cost_equivalence_max_gap", max(r.max_profit_gap for r in reports), 1e-8)
    yield _at_most("msr_price_reachability_max_gap", max(r.max_reach_gap for r in reports), 1e-6)


def _round_trip_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["round_trip"]
    b, n = suite["b"], suite["n"]
    points = random_interior(np.random.default_rng(seed), n, size=suite["points"], floor=1e-3)
    for name, rule, penalty in (
        ("log_rule", make_log_rule(b), entropic_penalty(b)),
        ("quad_rule", make_quadratic_rule(b), quadratic_penalty(b)),
    ):
        induced = penalty_from_rule(rule)
        regenerated = rule_from_penalty(induced)
        penalty_gap = max(abs(induced(p) - penalty(p)) for p in points)
        rule_gap = max(np.max(np.abs(regenerated.scores(p) - rule.scores(p))) for p in points)
        yield _at_most(f"round_trip_{name}_max_gap", max(penalty_gap, rule_gap), 1e-9)


def _reduction_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["reduction"]
    b, n, epsilon = suite["b"], suite["n"], suite["epsilon"]
    rng = np.random.default_rng(seed)
    vectors = rng.uniform(0.0, 10.0, size=(suite["vectors"], n))

    for market, factory in MARKET_FACTORIES.items():
        cf = factory(b, n)
        gap = max(
            np.max(
                np.abs(
                    np.asarray(market_reduction_weights(cf, epsilon, L))
                    - np.asarray(ftrl_weights(cf.penalty, epsilon, L))
                )
            )
            for L in vectors
        )
        yield _at_most(f"{market}_reduction_vs_ftrl_max_gap", gap, 1e-8)

    quad = make_quad(b, n)
    ogd_gap = max(
        np.max(
            np.abs(
                np.asarray(market_reduction_weights(quad, epsilon, L))
                - np.asarray(ogd_weights(epsilon / (2.0 * b), L))
            )
        )
        for L in vectors
    )
    yield _at_most("quad_reduction_vs_ogd_max_gap", ogd_gap, 1e-8)

    t = 1_000
    losses = LossMatrix(rng.uniform(size=(t, 10)))
    small = run_learner(ReductionConfig.tuned(make_lmsr(0.5, 10), t), losses)
    large = run_learner(ReductionConfig.tuned(make_lmsr(5.0, 10), t), losses)
    yield _at_most("lmsr_reduction_b_invariance_max_gap", np.max(np.abs(small.weights - large.weights)), 1e-10)

    eta = np.sqrt(np.log(10) / t)
    wm_gap = max(
        np.max(np.abs(np.asarray(wm_weights(eta, L)) - w))
        for L, w in zip(losses.cumulative()[:-1], small.weights)
    )
    yield _at_most("lmsr_reduction_vs_wm_max_gap", wm_gap, 1e-12)


def _oracle_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["oracle"]
    b = suite["b"]
    rng = np.random.default_rng(seed)

    for n in suite["n"]:
        grid = simplex_grid(n, suite["spacing"])
        for name, penalty in (("entropic", entropic_penalty(b)), ("quadratic", quadratic_penalty(b))):
            generic = penalty.as_custom()
            shortfall = -np.inf
            for q in rng.uniform(-3.0, 3.0, size=(suite["queries"], n)):
                best_on_grid = float(np.max(grid @ q - penalty.value(grid)))
                shortfall = max(shortfall, best_on_grid - maximize(generic, q).cost)
            yield _at_most(f"solver_grid_dominance:{name}:n={n}", shortfall, 1e-6)

    n = max(suite["n"])
    generic = quadratic_penalty(b).as_custom()
    gap = 0.0
    for q in rng.uniform(-3.0, 3.0, size=(suite["random_q"], n)):
        closed = np.asarray(quad_price_closed_form(b, q)[0])
        solved = np.asarray(maximize(generic, q, ORACLE_TOLERANCES).prices)
        gap = max(gap, float(np.max(np.abs(closed - solved))))
    yield _at_most("quad_closed_form_vs_solver_max_gap", gap, 1e-8)

    generic = entropic_penalty(b).as_custom()
    gap = 0.0
    for q in rng.uniform(-3.0, 3.0, size=(suite["softmax_q"], n)):
        closed = log_sum_exp(q, b)[1]
        solved = np.asarray(maximize(generic, q).prices)
        gap = max(gap, float(np.max(np.abs(closed - solved))))
    yield _at_most("softmax_vs_solver_max_gap", gap, 1e-5)


def _dominance_checks(seed: int) -> Iterator[CheckResult]:
    suite = VERIFICATION_SUITE["dominance"]
    for market, factory in MARKET_FACTORIES.items():
        for b in suite["b"]:
            for n in suite["n"]:
                for generator in suite["generators"]:
                    if generator == GeneratorKind.ALTERNATING.value and n != 2:
                        continue
                    cfg = ExperimentConfig(Algorithm.REDUCTION, factory(b, n), suite["t"], generator, seed)
                    _, summary = run_trace(cfg)
                    yield CheckResult(
                        f"{market}_regret_dominance:b={b:g}:n={n}:{generator}",
                        summary.final_regret,
                        summary.bound,
                        summary.passed,
                    )


def _ftl_checks(seed: int) -> Iterator[CheckResult]:
    t = VERIFICATION_SUITE["ftl"]["t"]
    lmsr = make_lmsr(1.0, 2)
    _, ftl = run_trace(ExperimentConfig(Algorithm.FTL, lmsr, t, GeneratorKind.ALTERNATING, seed))
    _, wm = run_trace(ExperimentConfig(Algorithm.WM, lmsr, t, GeneratorKind.ALTERNATING, seed))
    yield _at_least("ftl_alternating_regret", ftl.final_regret, ftl.bound)
    yield _at_most("wm_alternating_regret", wm.final_regret, wm.bound + 1e-6)


SUITES: dict[str, Callable[[int], Iterator[CheckResult]]] = {
    "validity": _validity_checks,
    "phi": _phi_checks,
    "pricing_diff": _pricing_diff_checks,
    "maker_loss": _maker_loss_checks,
    "equivalence": _equivalence_checks,
    "round_trip": _round_trip_checks,
    "reduction": _reduction_checks,
    "oracle": _oracle_checks,
    "dominance": _dominance_checks,
    "ftl": _ftl_checks,
}


def verify_all(seed: int = 0, progress: bool = False) -> VerificationReport:
    """Run every suite; failures are report lines, never exceptions."""
    report = VerificationReport(seed)
    for name in tqdm(SUITES, desc="Verifying", disable=not progress):
        report.checks.extend(SUITES[name](seed))
    return report
