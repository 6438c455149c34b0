from pathlib import Path
from typing import Optional

import typer
from rich import print
from typing_extensions import Annotated

from pm_ftrl.bench.sessions import simulate_market_session, simulate_msr_session
from pm_ftrl.cli.config import MARKETS, RULES, MarketChoice, RuleChoice
from pm_ftrl.cli.utils import fail, resolve_options
from pm_ftrl.errors import PmFtrlError

app = typer.Typer()


@app.command("simulate")
def simulate_command(
    ctx: typer.Context,
    market: Annotated[
        MarketChoice, typer.Option("--market", "-m", help="Cost-function market maker")
    ] = MarketChoice.LMSR,
    b: Annotated[float, typer.Option("--b", help="Liquidity parameter")] = 1.0,
    n: Annotated[int, typer.Option("--n", help="Number of outcomes")] = 2,
    trades: Annotated[int, typer.Option("--trades", help="Number of random trades")] = 100,
    seed: Annotated[int, typer.Option("--seed", help="Random seed")] = 0,
    rule: Annotated[
        Optional[RuleChoice],
        typer.Option("--rule", help="Run a market scoring rule session instead"),
    ] = None,
    out: Annotated[
        Optional[Path], typer.Option("--out", "-o", help="Output CSV path")
    ] = None,
    config: Annotated[
        Optional[Path], typer.Option("--config", help="key=value file with default flag values")
    ] = None,
):
    """Simulate a random trading session and log every trade to CSV."""
    opts = resolve_options(
        ctx,
        config,
        {
            "market": (market, MarketChoice),
            "b": (b, float),
            "n": (n, int),
            "trades": (trades, int),
            "seed": (seed, int),
            "rule": (rule, RuleChoice),
            "out": (out, Path),
        },
    )
    if opts["out"] is None:
        fail("No output path given (--out or 'out' in the config file).")

    try:
        if opts["rule"] is not None:
            session = simulate_msr_session(
                RULES[opts["rule"]](opts["b"]), opts["n"], opts["trades"], opts["seed"]
            )
        else:
            cf = MARKETS[opts["market"]](opts["b"], opts["n"])
            session = simulate_market_session(cf, opts["trades"], opts["seed"])
        session.write(opts["out"])
    except PmFtrlError as e:
        fail(str(e))
    except OSError as e:
        fail(f"Could not write {opts['out']}: {e}")

    print(f"[bold green]Success![/bold green] Session saved to: {opts['out']}")


if __name__ == "__main__":
    app()
