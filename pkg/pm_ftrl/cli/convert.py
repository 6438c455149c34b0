from pathlib import Path
from typing import Optional

import numpy as np
import typer
from rich import print
from typing_extensions import Annotated

from pm_ftrl.cli.config import RULES, RuleChoice
from pm_ftrl.cli.utils import fail, resolve_options
from pm_ftrl.errors import PmFtrlError
from pm_ftrl.markets.scoring import penalty_from_rule, rule_from_penalty
from pm_ftrl.simplex import random_interior

app = typer.Typer()


@app.command("convert")
def convert_command(
    ctx: typer.Context,
    source: Annotated[
        RuleChoice, typer.Option("--from", help="Scoring rule to convert")
    ] = RuleChoice.LOG_RULE,
    b: Annotated[float, typer.Option("--b", help="Liquidity parameter")] = 1.0,
    n: Annotated[int, typer.Option("--n", help="Number of outcomes")] = 2,
    points: Annotated[int, typer.Option("--points", help="Sampled interior points")] = 5,
    seed: Annotated[int, typer.Option("--seed", help="Random seed")] = 0,
    config: Annotated[
        Optional[Path], typer.Option("--config", help="key=value file with default flag values")
    ] = None,
):
    """Print the penalty induced by a scoring rule and the rule regenerated from that penalty."""
    opts = resolve_options(
        ctx,
        config,
        {
            "source": (source, RuleChoice),
            "b": (b, float),
            "n": (n, int),
            "points": (points, int),
            "seed": (seed, int),
        },
        aliases={"from": "source"},
    )
    n = opts["n"]
    if n < 2 or opts["points"] < 1:
        fail("Need at least 2 outcomes and 1 point.")

    try:
        rule = RULES[opts["source"]](opts["b"])
        penalty = penalty_from_rule(rule)
        regenerated = rule_from_penalty(penalty)
        samples = random_interior(np.random.default_rng(opts["seed"]), n, size=opts["points"], floor=1e-3)
    except PmFtrlError as e:
        fail(str(e))

    typer.echo(
        ",".join(
            [f"p_{i + 1}" for i in range(n)]
            + ["alpha"]
            + [f"score_{i + 1}" for i in range(n)]
            + [f"regenerated_{i + 1}" for i in range(n)]
        )
    )
    worst = 0.0
    for p in samples:
        scores, again = rule.scores(p), regenerated.scores(p)
        worst = max(worst, float(np.max(np.abs(scores - again))))
        row = p.tolist() + [penalty(p)] + scores.tolist() + again.tolist()
        typer.echo(",".join(repr(float(value)) for value in row))

    print(f"[bold green]Success![/bold green] Largest score round-trip gap: {worst:.3e}")


if __name__ == "__main__":
    app()
