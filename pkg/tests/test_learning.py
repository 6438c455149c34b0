import unittest

import numpy as np
from numpy.testing import assert_allclose

from pm_ftrl.errors import InvalidInput, InvalidParameter, InvalidTrace
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
    wm_weights,
)
from pm_ftrl.learning.runner import lemma1_decomposition, run_learner, run_with_doubling
from pm_ftrl.markets.cost import make_lmsr, make_quad
from pm_ftrl.markets.scoring import make_log_rule, make_quadratic_rule
from pm_ftrl.penalty import entropic_penalty, quadratic_penalty
from pm_ftrl.simplex import LossMatrix


def alternating(t: int) -> LossMatrix:
    rows = np.empty((t, 2))
    rows[0] = (0.5, 0.0)
    rows[1::2] = (0.0, 1.0)
    rows[2::2] = (1.0, 0.0)
    return LossMatrix(rows)


class Weights_Tests(unittest.TestCase):
    def test_zero_losses_give_uniform(self):
        for penalty in (entropic_penalty(1.0), quadratic_penalty(1.0)):
            assert_allclose(np.asarray(ftrl_weights(penalty, 0.7, [0.0, 0.0, 0.0])), 1 / 3)
        for cf in (make_lmsr(1.0, 3), make_quad(1.0, 3)):
            assert_allclose(np.asarray(market_reduction_weights(cf, 0.5, [0.0, 0.0, 0.0])), 1 / 3)

    def test_entropic_ftrl(self):
        w = ftrl_weights(entropic_penalty(1.0), np.log(2.0), [0.0, 1.0])
        assert_allclose(np.asarray(w), [2 / 3, 1 / 3])

    def test_quadratic_ftrl(self):
        w = ftrl_weights(quadratic_penalty(1.0), 1.0, [0.0, 1.0])
        assert_allclose(np.asarray(w), [0.75, 0.25])

    def test_lmsr_reduction(self):
        w = market_reduction_weights(make_lmsr(1.0, 2), 1.0, [0.0, 1.0])
        assert_allclose(np.asarray(w), [0.7310585786300049, 0.2689414213699951])

    def test_reduction_matches_ftrl(self):
        rng = np.random.default_rng(0)
        for cf in (make_lmsr(1.0, 4), make_quad(1.0, 4)):
            for L in rng.uniform(0.0, 20.0, size=(100, 4)):
                assert_allclose(
                    np.asarray(market_reduction_weights(cf, 0.3, L)),
                    np.asarray(ftrl_weights(cf.penalty, 0.3, L)),
                    atol=1e-8,
                )

    def test_lmsr_reduction_is_weighted_majority(self):
        t, n = 10_000, 10
        rng = np.random.default_rng(1)
        for b in (0.5, 1.0, 5.0):
            epsilon = b * np.sqrt(np.log(n) / t)
            for L in rng.uniform(0.0, 100.0, size=(50, n)):
                assert_allclose(
                    np.asarray(market_reduction_weights(make_lmsr(b, n), epsilon, L)),
                    np.asarray(wm_weights(np.sqrt(np.log(n) / t), L)),
                    atol=1e-12,
                )

    def test_quad_reduction_is_gradient_descent(self):
        rng = np.random.default_rng(2)
        quad = make_quad(2.0, 5)
        for L in rng.uniform(0.0, 30.0, size=(100, 5)):
            assert_allclose(
                np.asarray(market_reduction_weights(quad, 0.4, L)),
                np.asarray(ogd_weights(0.4 / 4.0, L)),
                atol=1e-8,
            )

    def test_scoring_rule_form(self):
        L = [0.3, 1.2, 0.0]
        assert_allclose(
            np.asarray(scoring_rule_weights(make_log_rule(1.0), 0.5, L)),
            np.asarray(ftrl_weights(entropic_penalty(1.0), 0.5, L)),
            atol=1e-12,
        )
        assert_allclose(
            np.asarray(scoring_rule_weights(make_quadratic_rule(1.0), 0.5, L)),
            np.asarray(ftrl_weights(quadratic_penalty(1.0), 0.5, L)),
            atol=1e-12,
        )

    def test_ftl_splits_ties(self):
        assert_allclose(np.asarray(ftl_weights([1.0, 0.0, 0.0])), [0.0, 0.5, 0.5])
        assert_allclose(np.asarray(ftl_weights([2.0, 3.0])), [1.0, 0.0])

    def test_nonpositive_rates_rejected(self):
        with self.assertRaises(InvalidParameter):
            ftrl_weights(entropic_penalty(1.0), 0.0, [0.0, 0.0])
        with self.assertRaises(InvalidParameter):
            market_reduction_weights(make_lmsr(1.0, 2), -1.0, [0.0, 0.0])


class Bounds_Tests(unittest.TestCase):
    def test_tune_epsilon(self):
        self.assertAlmostEqual(tune_epsilon(1.0, 2.0, 1), 1.0)
        self.assertAlmostEqual(tune_epsilon(2.7726, 1.0, 10_000), 0.023548, places=6)
        b, n, t = 3.0, 10, 500
        self.assertAlmostEqual(tune_epsilon(b * np.log(n), 2.0 / b, t), b * np.sqrt(np.log(n) / t))

    def test_tune_epsilon_rejects_nonpositive(self):
        with self.assertRaises(InvalidParameter):
            tune_epsilon(0.0, 1.0, 10)
        with self.assertRaises(InvalidParameter):
            tune_epsilon(1.0, 1.0, 0)

    def test_theorem2_bound(self):
        self.assertAlmostEqual(theorem2_bound(2.0, 1.0, 8), np.sqrt(32.0))
        t, n = 10_000, 10
        self.assertAlmostEqual(theorem2_bound(np.log(n), 2.0, t), 2.0 * np.sqrt(t * np.log(n)))
        self.assertLessEqual(theorem2_bound(4 / 5, 5**2 / 2.0, t), 5 * np.sqrt(t))

    def test_tuned_reduction_bound_is_theorem2(self):
        B, phi, t = 1.5, 2.0, 400
        self.assertAlmostEqual(
            reduction_bound(B, phi, t, tune_epsilon(B, phi, t)), theorem2_bound(B, phi, t)
        )

    def test_ftrl_bound(self):
        self.assertAlmostEqual(ftrl_bound(1.0, 1.0, 1), 2.0 * np.sqrt(2.0))
        with self.assertRaises(InvalidParameter):
            ftrl_bound(0.0, 1.0, 1)

    def test_wm_bound(self):
        t = 1000
        eta = np.sqrt(np.log(2.0) / t)
        self.assertAlmostEqual(wm_bound(eta, 2, t), 2.0 * np.sqrt(t * np.log(2.0)))

    def test_doubling_periods(self):
        self.assertEqual(doubling_periods(1), [(0, 1)])
        self.assertEqual(doubling_periods(7), [(0, 1), (1, 3), (3, 7)])
        self.assertEqual(doubling_periods(5), [(0, 1), (1, 3), (3, 5)])
        self.assertEqual(len(doubling_periods(4095)), 12)

    def test_doubling_bound(self):
        B, phi = np.log(10.0), 2.0
        expected = sum(np.sqrt(2 * B * phi * 2**k) for k in range(12))
        self.assertAlmostEqual(doubling_bound(B, phi, 4095), expected)


class Stepping_Tests(unittest.TestCase):
    def test_step_is_pure(self):
        state = start_learner(WmConfig(0.5), 2)
        after, loss = step_learner(state, [1.0, 0.0])
        self.assertEqual(loss, 0.5)
        assert_allclose(state.cumulative_losses, [0.0, 0.0])
        self.assertEqual(state.round, 0)
        self.assertEqual(after.round, 1)
        assert_allclose(after.cumulative_losses, [1.0, 0.0])

    def test_bad_round_rejected(self):
        state = start_learner(FtlConfig(), 2)
        with self.assertRaises(InvalidInput):
            step_learner(state, [1.0, 0.0, 0.0])
        with self.assertRaises(InvalidInput):
            step_learner(state, [2.0, 0.0])


class Runner_Tests(unittest.TestCase):
    def test_zero_losses(self):
        trace = run_learner(WmConfig(0.1), LossMatrix(np.zeros((50, 3))))
        self.assertEqual(trace.final_regret, 0.0)

    def test_weights_use_previous_losses_only(self):
        trace = run_learner(FtlConfig(), alternating(4))
        assert_allclose(trace.weights, [[0.5, 0.5], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])

    def test_ftl_has_linear_regret(self):
        trace = run_learner(FtlConfig(), alternating(1000))
        self.assertAlmostEqual(trace.final_regret, 499.75)
        self.assertGreaterEqual(trace.final_regret, 450.0)

    def test_wm_beats_its_bound_on_the_alternating_sequence(self):
        t = 1000
        trace = run_learner(WmConfig.tuned(2, t), alternating(t))
        self.assertLessEqual(trace.final_regret, 2.0 * np.sqrt(t * np.log(2.0)))

    def test_regret_accounting(self):
        losses = LossMatrix(np.random.default_rng(3).uniform(size=(200, 4)))
        trace = run_learner(OgdConfig.tuned(4, 200), losses)
        expected = np.sum(trace.weights * losses.rows) - losses.rows.sum(axis=0).min()
        self.assertAlmostEqual(trace.final_regret, expected, places=9)
        self.assertEqual(len(trace.records), 200)
        self.assertAlmostEqual(trace.records[-1].regret, trace.final_regret)

    def test_reduction_regret_within_theorem2(self):
        t = 2000
        losses = LossMatrix(np.random.default_rng(4).uniform(size=(t, 10)))
        for cf in (make_lmsr(1.0, 10), make_quad(1.0, 10)):
            trace = run_learner(ReductionConfig.tuned(cf, t), losses)
            self.assertLessEqual(trace.final_regret, theorem2_bound(cf.loss_bound, cf.phi_bound, t) + 1e-6)

    def test_reduction_traces_do_not_depend_on_b(self):
        t = 500
        losses = LossMatrix(np.random.default_rng(5).uniform(size=(t, 10)))
        small = run_learner(ReductionConfig.tuned(make_lmsr(0.5, 10), t), losses)
        large = run_learner(ReductionConfig.tuned(make_lmsr(5.0, 10), t), losses)
        assert_allclose(small.weights, large.weights, atol=1e-10)


class Doubling_Tests(unittest.TestCase):
    def test_single_round_matches_plain_run(self):
        losses = LossMatrix([[0.3, 0.9]])
        family = lambda t: ReductionConfig.tuned(make_lmsr(1.0, 2), t)
        doubled = run_with_doubling(family, losses)
        plain = run_learner(family(1), losses)
        assert_allclose(doubled.weights, plain.weights)
        self.assertEqual(doubled.final_regret, plain.final_regret)

    def test_periods_restart_the_learner(self):
        losses = LossMatrix(np.tile([1.0, 0.0], (7, 1)))
        trace = run_with_doubling(lambda t: WmConfig.tuned(2, t), losses)
        self.assertEqual(trace.periods, [(0, 1), (1, 3), (3, 7)])
        for start, _ in trace.periods:
            assert_allclose(trace.weights[start], [0.5, 0.5])

    def test_doubling_regret_within_bound(self):
        t, n = 4095, 10
        lmsr = make_lmsr(1.0, n)
        losses = LossMatrix(np.random.default_rng(6).uniform(size=(t, n)))
        trace = run_with_doubling(lambda k: ReductionConfig.tuned(lmsr, k), losses)
        self.assertLessEqual(trace.final_regret, doubling_bound(lmsr.loss_bound, lmsr.phi_bound, t))


class Lemma1_Tests(unittest.TestCase):
    def test_terms_bound_regret(self):
        eta = 0.2
        regularizer = entropic_penalty(1.0)
        losses = LossMatrix(np.random.default_rng(7).uniform(size=(100, 2)))
        trace = run_learner(FtrlConfig(regularizer, eta), losses)
        drift, spread = lemma1_decomposition(trace, regularizer, eta)
        self.assertGreaterEqual(drift + spread, trace.final_regret - 1e-6)

    def test_constant_losses_have_no_drift_after_the_first_round(self):
        eta = 1.0
        regularizer = quadratic_penalty(1.0)
        losses = LossMatrix(np.tile([0.0, 1.0], (40, 1)))
        trace = run_learner(FtrlConfig(regularizer, eta), losses)
        drift, _ = lemma1_decomposition(trace, regularizer, eta)
        # Weights reach (1, 0) after two rounds, after which the drift terms vanish.
        first_steps = np.sum(losses.rows[:2] * (trace.weights[:2] - trace.weights[1:3]))
        self.assertAlmostEqual(drift, first_steps, places=12)

    def test_range_term_vanishes_for_large_eta(self):
        regularizer = entropic_penalty(1.0)
        losses = LossMatrix(np.zeros((10, 3)))
        trace = run_learner(FtrlConfig(regularizer, 1e9), losses)
        drift, spread = lemma1_decomposition(trace, regularizer, 1e9)
        self.assertEqual(drift, 0.0)
        self.assertLess(spread, 1e-8)

    def test_mismatched_trace(self):
        losses = alternating(10)
        trace = run_learner(FtlConfig(), losses)
        with self.assertRaises(InvalidTrace):
            lemma1_decomposition(trace, entropic_penalty(1.0), 0.5)


if __name__ == "__main__":
    unittest.main()
