"""
Two-period example command.
"""

from collective.waldgame.commands import ConfigArg
from collective.waldgame.commands import execute
from collective.waldgame.commands import NoUiOpt
from collective.waldgame.commands import OutOpt
from collective.waldgame.commands import PriorOpt

import typer


app = typer.Typer()


@app.command(name="two-period")
def two_period(
    config: ConfigArg,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Payoff curves of the two-period example against every opponent."""
    execute("two-period", config, prior=prior, out=out, no_ui=no_ui)
