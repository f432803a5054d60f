"""
Prior-level commands: single decision maker, cutoffs and classification.
"""

from collective.waldgame.commands import ConfigArg
from collective.waldgame.commands import execute
from collective.waldgame.commands import NoUiOpt
from collective.waldgame.commands import OutOpt
from collective.waldgame.commands import PriorOpt

import typer


app = typer.Typer()


@app.command(name="single-dm")
def single_dm(
    config: ConfigArg,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Free boundaries, value and policy of the single decision maker."""
    execute("single-dm", config, prior=prior, out=out, no_ui=no_ui)


@app.command()
def cutoffs(
    config: ConfigArg,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Every cutoff of the model, with the reasons for undefined ones."""
    execute("cutoffs", config, prior=prior, out=out, no_ui=no_ui)


@app.command()
def classify(
    config: ConfigArg,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Regimes whose defining condition holds at the prior."""
    execute("classify", config, prior=prior, out=out, no_ui=no_ui)
