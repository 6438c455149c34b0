from pathlib import Path
from typing import Any, Callable, NoReturn, Optional

import typer
try:  # newer typer releases vendor click as typer._click
    from typer._click.core import ParameterSource
except ImportError:
    from click.core import ParameterSource
from rich import print

from pm_ftrl.utils import read_config_file


def _parse_bool(raw: str) -> bool:
    return raw.strip().lower() in {"1", "true", "yes", "on"}


def resolve_options(
    ctx: typer.Context,
    config: Optional[Path],
    options: dict[str, tuple[Any, Callable[[str], Any]]],
    aliases: Optional[dict[str, str]] = None,
) -> dict[str, Any]:
    """Merge a key=value config file under the parsed options; flags given on the command line win.

    `options` maps each parameter name to (parsed value, cast for file values);
    `aliases` maps file keys to parameter names when the two differ.
    """
    values = {name: value for name, (value, _) in options.items()}
    if config is None:
        return values

    try:
        from_file = read_config_file(config)
    except (OSError, ValueError) as e:
        print(f"[bold red]Error![/bold red] Could not read config file {config}: {e}")
        raise typer.Exit(code=1)

    for key, raw in from_file.items():
        key = (aliases or {}).get(key, key)
        if key not in options:
            print(f"[yellow]Warning:[/yellow] ignoring unknown config key '{key}' in {config}")
            continue
        if ctx.get_parameter_source(key) == ParameterSource.COMMANDLINE:
            continue
        cast = options[key][1]
        try:
            values[key] = _parse_bool(raw) if cast is bool else cast(raw)
        except ValueError as e:
            print(f"[bold red]Error![/bold red] Bad value for '{key}' in {config}: {e}")
            raise typer.Exit(code=1)
    return values


def fail(message: str) -> NoReturn:
    print(f"[bold red]Error![/bold red] {message}")
    raise typer.Exit(code=1)
