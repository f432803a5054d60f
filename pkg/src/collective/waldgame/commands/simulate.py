"""
Monte Carlo command.
"""

from collective.waldgame.commands import ConfigArg
from collective.waldgame.commands import execute
from collective.waldgame.commands import NoUiOpt
from collective.waldgame.commands import OutOpt
from collective.waldgame.commands import PriorOpt
from collective.waldgame.commands import RegimeOpt
from typing import Annotated

import typer


app = typer.Typer()


@app.command()
def simulate(
    config: ConfigArg,
    regime: RegimeOpt = None,
    mrss: Annotated[
        bool,
        typer.Option("--mrss", help="Play the observable-actions mimicking strategy"),
    ] = False,
    reps: Annotated[int | None, typer.Option("--reps", min=1)] = None,
    seed: Annotated[int | None, typer.Option("--seed", min=0)] = None,
    report_step: Annotated[
        float | None, typer.Option("--report-step", help="Step of the CDF grid")
    ] = None,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Simulate the game and write the empirical stopping CDFs."""
    overrides = {
        name: value
        for name, value in (
            ("reps", reps),
            ("seed", seed),
            ("report_step", report_step),
        )
        if value is not None
    }
    options = {
        "regime": regime.value if regime else None,
        "variant": "mrss" if mrss else "profile",
    }
    execute(
        "simulate",
        config,
        options,
        prior=prior,
        out=out,
        no_ui=no_ui,
        total=lambda resolved: resolved.simulation.reps,
        simulation=overrides,
    )
