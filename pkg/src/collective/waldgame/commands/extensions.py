"""
Intense competition, observable actions and N-player commands.
"""

from collective.waldgame.commands import ConfigArg
from collective.waldgame.commands import execute
from collective.waldgame.commands import NoUiOpt
from collective.waldgame.commands import OutOpt
from collective.waldgame.commands import PriorOpt
from typing import Annotated

import typer


app = typer.Typer(name="extensions", no_args_is_help=True)


@app.command()
def competition(
    config: ConfigArg,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Deadline T_ps, lower prior bound and value curves of pure learning."""
    options = {"variant": "competition"}
    execute("extensions", config, options, prior=prior, out=out, no_ui=no_ui)


@app.command()
def mrss(
    config: ConfigArg,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Hazard of the mimicking strategy under observable actions."""
    options = {"variant": "mrss"}
    execute("extensions", config, options, prior=prior, out=out, no_ui=no_ui)


@app.command()
def nplayer(
    config: ConfigArg,
    players: Annotated[
        str, typer.Option("--players", help="Comma-separated player counts")
    ] = "2,3,4,5",
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Cutoff, initial rate and completion time of random stopping per N."""
    Ns = [int(item) for item in players.split(",") if item.strip()]
    options = {"variant": "nplayer", "Ns": Ns}
    execute("extensions", config, options, prior=prior, out=out, no_ui=no_ui)
