"""
Parameter sweeps over any single run-file key.
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


def parse_values(value: str) -> list[float]:
    """Parse comma-separated numbers, or ``start:stop:count`` for a linear grid."""
    if ":" in value:
        start, stop, count = value.split(":")
        count_ = int(count)
        if count_ < 2:
            return [float(start)]
        step = (float(stop) - float(start)) / (count_ - 1)
        return [float(start) + index * step for index in range(count_)]
    return [float(item) for item in value.split(",") if item.strip()]


@app.command()
def sweep(
    config: ConfigArg,
    key: Annotated[str, typer.Option("--key", help="Run-file key to vary")],
    values: Annotated[
        str,
        typer.Option("--values", help="Comma-separated values or start:stop:count"),
    ],
    inner: Annotated[
        str, typer.Option("--command", help="Command evaluated at every value")
    ] = "cutoffs",
    regime: RegimeOpt = None,
    prior: PriorOpt = None,
    out: OutOpt = None,
    no_ui: NoUiOpt = False,
):
    """Evaluate a command over a grid of one key and concatenate the summaries."""
    grid = parse_values(values)
    options = {
        "key": key,
        "values": grid,
        "inner": inner,
        "regime": regime.value if regime else None,
    }
    execute(
        "sweep",
        config,
        options,
        prior=prior,
        out=out,
        no_ui=no_ui,
        total=lambda resolved: len(grid),
    )
