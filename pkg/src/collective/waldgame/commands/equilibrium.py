"""
Equilibrium construction and certification commands.
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

StartOpt = Annotated[
    float | None,
    typer.Option("--that", "--t-hat", help="Start of randomization (random stopping)"),
]


def _options(regime, T_hat) -> dict:
    return {"regime": regime.value if regime else None, "T_hat": T_hat}


@app.command()
def solve(
    config: ConfigArg,
    regime: RegimeOpt = None,
    T_hat: StartOpt = None,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Build the symmetric profile of a regime and write its strategy path."""
    execute(
        "solve", config, _options(regime, T_hat), prior=prior, out=out, no_ui=no_ui
    )


@app.command()
def verify(
    config: ConfigArg,
    regime: RegimeOpt = None,
    T_hat: StartOpt = None,
    hjb: Annotated[
        bool, typer.Option("--hjb", help="Also report HJB residuals")
    ] = False,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Certify a profile against every deterministic deviation."""
    options = {**_options(regime, T_hat), "hjb": hjb}
    execute("verify", config, options, prior=prior, out=out, no_ui=no_ui)
