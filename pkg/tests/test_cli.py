import importlib.util
import re
import tempfile
import unittest
from pathlib import Path

HAS_TYPER = importlib.util.find_spec("typer") is not None

SUMMARY = re.compile(r"^(\S+),(\S+),(pass|fail)$", re.MULTILINE)


@unittest.skipUnless(HAS_TYPER, "the cli extra is not installed")
class Cli_Tests(unittest.TestCase):
    def setUp(self):
        from typer.testing import CliRunner

        from pm_ftrl.cli.application import app

        self.runner = CliRunner()
        self.app = app
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def invoke(self, *args: str):
        return self.runner.invoke(self.app, list(args))

    def test_simulate_writes_session(self):
        out = self.dir / "session.csv"
        result = self.invoke("simulate", "--market", "quad", "--n", "4", "--trades", "30", "--seed", "7", "--out", str(out))
        self.assertEqual(result.exit_code, 0, result.output)
        lines = out.read_text().splitlines()
        self.assertEqual(lines[0], "step,outcome_dim,shares,payment,price_1,price_2,price_3,price_4")
        self.assertEqual(len(lines), 31)

    def test_simulate_scoring_rule(self):
        out = self.dir / "msr.csv"
        result = self.invoke("simulate", "--rule", "log-rule", "--n", "3", "--trades", "5", "--out", str(out))
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertTrue(out.read_text().startswith("step,report_1,report_2,report_3,payoff_if_1"))

    def test_simulate_needs_an_output(self):
        result = self.invoke("simulate", "--trades", "3")
        self.assertEqual(result.exit_code, 1)

    def test_regret_passes(self):
        out = self.dir / "trace.csv"
        result = self.invoke("regret", "--algo", "reduction", "--market", "lmsr", "--n", "5", "--t", "500", "--out", str(out))
        self.assertEqual(result.exit_code, 0, result.output)
        match = SUMMARY.search(result.output)
        self.assertIsNotNone(match)
        self.assertEqual(match.group(3), "pass")
        self.assertLessEqual(float(match.group(1)), float(match.group(2)))
        self.assertEqual(len(out.read_text().splitlines()), 501)

    def test_regret_ftl_on_alternating(self):
        result = self.invoke("regret", "--algo", "ftl", "--n", "2", "--t", "200", "--gen", "alt")
        self.assertEqual(result.exit_code, 0, result.output)
        match = SUMMARY.search(result.output)
        self.assertGreaterEqual(float(match.group(1)), 90.0)

    def test_regret_rejects_alt_with_three_experts(self):
        result = self.invoke("regret", "--n", "3", "--gen", "alt")
        self.assertEqual(result.exit_code, 1)

    def test_regret_rejects_unknown_algorithm(self):
        result = self.invoke("regret", "--algo", "hedge")
        self.assertNotEqual(result.exit_code, 0)

    def test_config_file_and_flag_precedence(self):
        config = self.dir / "regret.conf"
        config.write_text("# from file\nalgo = ogd\nn = 4\nt = 50\n")
        out = self.dir / "trace.csv"
        result = self.invoke("regret", "--config", str(config), "--t", "20", "--out", str(out))
        self.assertEqual(result.exit_code, 0, result.output)
        # --t on the command line beats t = 50 from the file.
        self.assertEqual(len(out.read_text().splitlines()), 21)

    def test_unreadable_config_file(self):
        result = self.invoke("regret", "--config", str(self.dir / "missing.conf"))
        self.assertEqual(result.exit_code, 1)

    def test_convert_round_trip(self):
        result = self.invoke("convert", "--from", "quad-rule", "--b", "2", "--n", "3", "--points", "4")
        self.assertEqual(result.exit_code, 0, result.output)
        lines = result.output.splitlines()
        self.assertTrue(lines[0].startswith("p_1,p_2,p_3,alpha,score_1"))
        rows = [line.split(",") for line in lines[1:5]]
        for row in rows:
            self.assertEqual(len(row), 10)
            scores, again = map(float, row[4:7]), map(float, row[7:10])
            for s, r in zip(scores, again):
                self.assertAlmostEqual(s, r, places=6)

    def test_no_arguments_shows_help(self):
        result = self.invoke()
        self.assertIn("regret", result.output)


if __name__ == "__main__":
    unittest.main()
