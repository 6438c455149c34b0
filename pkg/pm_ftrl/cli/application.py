import typer

from pm_ftrl.cli.convert import app as convert_app
from pm_ftrl.cli.regret import app as regret_app
from pm_ftrl.cli.simulate import app as simulate_app
from pm_ftrl.cli.verify import app as verify_app

app = typer.Typer(
    no_args_is_help=True,
    help="Prediction-market cost functions, scoring rules and no-regret learning.",
)


app.add_typer(simulate_app)
app.add_typer(regret_app)
app.add_typer(verify_app)
app.add_typer(convert_app)
