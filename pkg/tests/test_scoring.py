import unittest

import numpy as np
from numpy.testing import assert_allclose

from pm_ftrl.errors import InadmissibleReport, InvalidParameter, InvalidPenalty
from pm_ftrl.markets.cost import make_lmsr, make_quad, open_market, trade
from pm_ftrl.markets.scoring import (
    MsrState,
    RuleKind,
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
from pm_ftrl.penalty import custom_penalty, entropic_penalty, quadratic_penalty
from pm_ftrl.simplex import ProbVector, random_interior, simplex_grid

SOFTMAX_1_0 = ProbVector([0.7310585786300049, 0.2689414213699951])


class Rules_Tests(unittest.TestCase):
    def test_log_rule(self):
        rule = make_log_rule(1.0)
        self.assertAlmostEqual(rule.score([0.5, 0.5], 0), -np.log(2.0))
        self.assertEqual(rule.score([1.0, 0.0], 0), 0.0)
        self.assertAlmostEqual(make_log_rule(2.0).score([0.25, 0.75], 1), 2.0 * np.log(0.75))

    def test_quadratic_rule(self):
        rule = make_quadratic_rule(1.0)
        self.assertAlmostEqual(rule.score([0.5, 0.5], 0), 0.5)
        self.assertAlmostEqual(rule.score([1.0, 0.0], 0), 1.0)
        self.assertAlmostEqual(rule.score([0.6, 0.4], 1), 0.28)

    def test_nonpositive_b_rejected(self):
        with self.assertRaises(InvalidParameter):
            make_log_rule(0.0)
        with self.assertRaises(InvalidParameter):
            make_quadratic_rule(-2.0)

    def test_rules_are_proper(self):
        for rule in (make_log_rule(1.0), make_quadratic_rule(2.0)):
            self.assertLessEqual(check_properness(rule, 3, seed=4, beliefs=30), 1e-12)


class MsrTrade_Tests(unittest.TestCase):
    def test_no_op_report(self):
        state = MsrState.open(make_log_rule(1.0), ProbVector.uniform(2))
        _, payoff = msr_trade(state, ProbVector.uniform(2))
        assert_allclose(payoff, 0.0)

    def test_log_rule_matches_lmsr_trade(self):
        state = MsrState.open(make_log_rule(1.0), ProbVector.uniform(2))
        after, payoff = msr_trade(state, SOFTMAX_1_0)
        self.assertAlmostEqual(payoff[0], 0.3798854930417224)

        market, receipt = trade(open_market(make_lmsr(1.0, 2)), [1.0, 0.0])
        self.assertAlmostEqual(payoff[0], 1.0 - receipt.payment)
        self.assertAlmostEqual(payoff[1], -receipt.payment)
        assert_allclose(np.asarray(after.current), np.asarray(SOFTMAX_1_0))

    def test_quadratic_rule_payoff(self):
        state = MsrState.open(make_quadratic_rule(1.0), ProbVector.uniform(2))
        _, payoff = msr_trade(state, ProbVector([0.75, 0.25]))
        self.assertAlmostEqual(payoff[0], 0.375)

    def test_log_rule_rejects_zero_probability(self):
        state = MsrState.open(make_log_rule(1.0), ProbVector.uniform(2))
        with self.assertRaises(InadmissibleReport):
            msr_trade(state, ProbVector([1.0, 0.0]))
        with self.assertRaises(InadmissibleReport):
            MsrState.open(make_log_rule(1.0), ProbVector([0.0, 1.0]))

    def test_session_payoffs_telescope(self):
        rule = make_quadratic_rule(1.0)
        reports = [ProbVector(p) for p in random_interior(np.random.default_rng(0), 3, size=20)]
        final, payoffs = msr_session(rule, ProbVector.uniform(3), reports)
        expected = rule.scores(np.asarray(reports[-1])) - rule.scores(np.full(3, 1 / 3))
        assert_allclose(np.sum(payoffs, axis=0), expected, atol=1e-12)
        self.assertIs(final.current, reports[-1])


class WorstCaseLoss_Tests(unittest.TestCase):
    def test_log_rule(self):
        self.assertAlmostEqual(msr_worst_case_loss(make_log_rule(1.0), ProbVector.uniform(2)), np.log(2.0))

    def test_quadratic_rule(self):
        self.assertAlmostEqual(msr_worst_case_loss(make_quadratic_rule(1.0), ProbVector.uniform(2)), 0.5)
        self.assertAlmostEqual(
            msr_worst_case_loss(make_quadratic_rule(1.0), ProbVector.uniform(4)), 0.75, places=9
        )

    def test_quadratic_rule_from_a_vertex(self):
        # Outcome 0 already scores its maximum; the loss comes from outcome 1 at the other vertex.
        self.assertAlmostEqual(
            msr_worst_case_loss(make_quadratic_rule(1.0), ProbVector.point_mass(2, 0)), 2.0
        )


class Conversion_Tests(unittest.TestCase):
    def test_log_rule_penalty(self):
        alpha = penalty_from_rule(make_log_rule(1.0))
        self.assertAlmostEqual(alpha([0.5, 0.5]), -np.log(2.0))
        self.assertEqual(alpha([1.0, 0.0]), 0.0)

    def test_quadratic_rule_penalty(self):
        alpha = penalty_from_rule(make_quadratic_rule(1.0))
        self.assertAlmostEqual(alpha([0.5, 0.5]), 0.5)
        self.assertAlmostEqual(alpha([1.0, 0.0]), 1.0)

    def test_round_trips(self):
        points = random_interior(np.random.default_rng(9), 3, size=100, floor=1e-3)
        for rule, penalty in (
            (make_log_rule(1.5), entropic_penalty(1.5)),
            (make_quadratic_rule(0.5), quadratic_penalty(0.5)),
        ):
            induced = penalty_from_rule(rule)
            regenerated = rule_from_penalty(induced)
            for p in points:
                self.assertAlmostEqual(induced(p), penalty(p), places=9)
                assert_allclose(regenerated.scores(p), rule.scores(p), atol=1e-9)

    def test_rule_from_penalty_without_gradient(self):
        rule = rule_from_penalty(custom_penalty(lambda p: np.sum(p * p, axis=-1)))
        self.assertEqual(rule.kind, RuleKind.FROM_PENALTY)
        p = np.array([0.6, 0.4])
        assert_allclose(rule.scores(p), make_quadratic_rule(1.0).scores(p), atol=1e-6)

    def test_reachability(self):
        for rule, cf in ((make_log_rule(1.0), make_lmsr(1.0, 3)), (make_quadratic_rule(1.0), make_quad(1.0, 3))):
            target = np.array([0.2, 0.5, 0.3])
            assert_allclose(np.asarray(cf.prices(quantities_for_report(rule, target))), target, atol=1e-9)


class Equivalence_Tests(unittest.TestCase):
    def test_log_rule_and_lmsr(self):
        report = verify_equivalence(make_log_rule(1.0), make_lmsr(1.0, 3), trials=100, seed=0, reach_trials=20)
        self.assertTrue(report.passed)
        self.assertLessEqual(report.max_profit_gap, 1e-8)

    def test_quadratic_rule_and_quad(self):
        report = verify_equivalence(
            make_quadratic_rule(1.0), make_quad(1.0, 3), trials=100, seed=0, reach_trials=20
        )
        self.assertTrue(report.passed)
        self.assertLessEqual(report.max_reach_gap, 1e-6)

    def test_mismatched_pair_fails(self):
        report = verify_equivalence(make_log_rule(1.0), make_quad(1.0, 3), trials=20, seed=0, reach_trials=5)
        self.assertFalse(report.passed)


def _expected_scores(rule, beliefs: np.ndarray, reports: np.ndarray) -> np.ndarray:
    """beliefs x reports matrix of expected scores; zero-probability reports score -1e300."""
    scores = np.nan_to_num(rule.scores(reports), neginf=-1e300)
    return beliefs @ scores.T


class GridProperness_Tests(unittest.TestCase):
    def setUp(self):
        self.grid = simplex_grid(3, 100)
        self.rng = np.random.default_rng(21)

    def test_grid_beliefs_are_their_own_best_report(self):
        for rule in (make_log_rule(1.0), make_quadratic_rule(1.0)):
            picks = self.rng.choice(len(self.grid), size=100, replace=False)
            expected = _expected_scores(rule, self.grid[picks], self.grid)
            for row, index in enumerate(picks):
                best = int(np.argmax(expected[row]))
                self.assertEqual(best, index)
                runner_up = np.max(np.delete(expected[row], index))
                self.assertGreater(expected[row, index] - runner_up, 1e-9)

    def test_best_grid_report_minimizes_the_rule_divergence(self):
        # D(p, r) = E_p[s(p)] - E_p[s(r)]: KL for the log rule, b |p - r|^2 for the quadratic rule.
        beliefs = random_interior(self.rng, 3, size=100, floor=1e-3)
        interior = self.grid[np.all(self.grid > 0.0, axis=1)]

        expected = _expected_scores(make_log_rule(1.0), beliefs, interior)
        kl = np.sum(beliefs[:, None, :] * np.log(beliefs[:, None, :] / interior[None, :, :]), axis=-1)
        self.assertTrue(np.array_equal(np.argmax(expected, axis=1), np.argmin(kl, axis=1)))

        expected = _expected_scores(make_quadratic_rule(1.0), beliefs, self.grid)
        distance = ((beliefs[:, None, :] - self.grid[None, :, :]) ** 2).sum(axis=-1)
        self.assertTrue(np.array_equal(np.argmax(expected, axis=1), np.argmin(distance, axis=1)))


class DerivedRule_Tests(unittest.TestCase):
    def test_entropic_rule_worst_case_loss(self):
        rule = rule_from_penalty(entropic_penalty(1.0))
        self.assertAlmostEqual(msr_worst_case_loss(rule, ProbVector.uniform(2)), np.log(2.0), places=9)

    def test_entropic_rule_rejects_boundary_reports(self):
        rule = rule_from_penalty(entropic_penalty(1.0))
        self.assertTrue(rule.requires_interior)
        state = MsrState.open(rule, ProbVector.uniform(2))
        with self.assertRaises(InadmissibleReport):
            msr_trade(state, ProbVector([1.0, 0.0]))

    def test_quadratic_rule_matches_built_in(self):
        rule = rule_from_penalty(quadratic_penalty(1.0))
        self.assertFalse(rule.requires_interior)
        self.assertAlmostEqual(msr_worst_case_loss(rule, ProbVector.uniform(2)), 0.5, places=9)
        _, payoff = msr_trade(MsrState.open(rule, ProbVector.uniform(2)), ProbVector([1.0, 0.0]))
        assert_allclose(payoff, [0.5, -1.5], atol=1e-12)

    def test_penalty_without_gradient_on_three_outcomes(self):
        alpha = custom_penalty(lambda p: p[..., 0] ** 2 + p[..., 1] ** 2 + p[..., 2] ** 2)
        rule = rule_from_penalty(alpha)
        p = np.array([0.2, 0.3, 0.5])
        assert_allclose(rule.scores(p), make_quadratic_rule(1.0).scores(p), atol=1e-6)

    def test_non_finite_penalty_is_reported(self):
        rule = rule_from_penalty(custom_penalty(lambda p: np.inf + np.sum(p, axis=-1)))
        with self.assertRaises(InvalidPenalty):
            rule.scores(np.array([0.5, 0.5]))


if __name__ == "__main__":
    unittest.main()
