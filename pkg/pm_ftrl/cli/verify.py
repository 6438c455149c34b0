from pathlib import Path
from typing import Optional

import typer
from rich import print
from typing_extensions import Annotated

from pm_ftrl.bench.verification import verify_all
from pm_ftrl.cli.utils import fail, resolve_options

app = typer.Typer()


@app.command("verify")
def verify_command(
    ctx: typer.Context,
    seed: Annotated[int, typer.Option("--seed", help="Random seed")] = 0,
    out: Annotated[
        Optional[Path], typer.Option("--out", "-o", help="Also write the report to this file")
    ] = None,
    config: Annotated[
        Optional[Path], typer.Option("--config", help="key=value file with default flag values")
    ] = None,
):
    """Run every bound and equivalence check; exits 0 only if all pass."""
    opts = resolve_options(ctx, config, {"seed": (seed, int), "out": (out, Path)})

    report = verify_all(opts["seed"], progress=True)
    lines = report.lines()
    for line in lines:
        typer.echo(line)

    if opts["out"] is not None:
        try:
            opts["out"].parent.mkdir(parents=True, exist_ok=True)
            opts["out"].write_text("name,observed,bound,status\n" + "\n".join(lines) + "\n")
        except OSError as e:
            fail(f"Could not write {opts['out']}: {e}")

    failed = [check.name for check in report.checks if not check.passed]
    if failed:
        print(f"[bold red]Error![/bold red] {len(failed)} of {len(lines)} checks failed: {', '.join(failed)}")
        raise typer.Exit(code=1)
    print(f"[bold green]Success![/bold green] All {len(lines)} checks passed.")


if __name__ == "__main__":
    app()
