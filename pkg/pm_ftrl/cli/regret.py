from pathlib import Path
from typing import Optional

import typer
from rich import print
from rich.progress import Progress, SpinnerColumn, TextColumn
from typing_extensions import Annotated

from pm_ftrl.bench.experiments import ExperimentConfig, run_experiment
from pm_ftrl.cli.config import MARKETS, AlgoChoice, GeneratorChoice, MarketChoice
from pm_ftrl.cli.utils import fail, resolve_options
from pm_ftrl.errors import PmFtrlError

app = typer.Typer()


@app.command("regret")
def regret_command(
    ctx: typer.Context,
    algo: Annotated[
        AlgoChoice, typer.Option("--algo", "-a", help="Learning algorithm")
    ] = AlgoChoice.REDUCTION,
    market: Annotated[
        MarketChoice, typer.Option("--market", "-m", help="Market used by the reduction")
    ] = MarketChoice.LMSR,
    b: Annotated[float, typer.Option("--b", help="Liquidity parameter")] = 1.0,
    n: Annotated[int, typer.Option("--n", help="Number of experts")] = 2,
    t: Annotated[int, typer.Option("--t", help="Number of rounds")] = 1000,
    gen: Annotated[
        GeneratorChoice, typer.Option("--gen", "-g", help="Loss sequence generator")
    ] = GeneratorChoice.UNIFORM,
    seed: Annotated[int, typer.Option("--seed", help="Random seed")] = 0,
    epsilon: Annotated[
        Optional[float],
        typer.Option("--epsilon", help="Reduction/OGD epsilon (tuned to T when omitted)"),
    ] = None,
    eta: Annotated[
        Optional[float], typer.Option("--eta", help="WM learning rate (tuned to T when omitted)")
    ] = None,
    doubling: Annotated[
        bool, typer.Option("--doubling", help="Restart on periods 1, 2, 4, ... instead of tuning to T")
    ] = False,
    out: Annotated[
        Optional[Path], typer.Option("--out", "-o", help="Output regret trace CSV path")
    ] = None,
    config: Annotated[
        Optional[Path], typer.Option("--config", help="key=value file with default flag values")
    ] = None,
):
    """Run a learner on a loss sequence; prints final_regret,bound,pass|fail."""
    opts = resolve_options(
        ctx,
        config,
        {
            "algo": (algo, AlgoChoice),
            "market": (market, MarketChoice),
            "b": (b, float),
            "n": (n, int),
            "t": (t, int),
            "gen": (gen, GeneratorChoice),
            "seed": (seed, int),
            "epsilon": (epsilon, float),
            "eta": (eta, float),
            "doubling": (doubling, bool),
            "out": (out, Path),
        },
    )

    try:
        cfg = ExperimentConfig(
            algo=opts["algo"],
            cost_fn=MARKETS[opts["market"]](opts["b"], opts["n"]),
            t=opts["t"],
            generator=opts["gen"],
            seed=opts["seed"],
            epsilon=opts["epsilon"],
            eta=opts["eta"],
            doubling=opts["doubling"],
            out=opts["out"],
        )
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            transient=True,
        ) as progress:
            progress.add_task(description="Running learner...", total=None)
            summary = run_experiment(cfg)
    except PmFtrlError as e:
        fail(str(e))
    except OSError as e:
        fail(f"Could not write {opts['out']}: {e}")

    typer.echo(summary.line())
    if summary.expected_linear:
        print("[yellow]Note:[/yellow] FTL regret is expected to grow linearly; the bound is a lower bound.")
    if opts["out"] is not None:
        print(f"[bold green]Success![/bold green] Regret trace saved to: {opts['out']}")
    if not summary.passed:
        raise typer.Exit(code=1)


if __name__ == "__main__":
    app()
