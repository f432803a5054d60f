"""
Command Line Interface for collective.waldgame.

This module provides the main CLI application using Typer, with subcommands
for the single decision maker benchmark, cutoffs, regime classification,
equilibrium construction and certification, Monte Carlo simulation, sweeps,
the two-period example, the model extensions and settings management.
"""

from collective.waldgame.commands.analysis import app as app_analysis
from collective.waldgame.commands.equilibrium import app as app_equilibrium
from collective.waldgame.commands.extensions import app as app_extensions
from collective.waldgame.commands.settings import app as app_settings
from collective.waldgame.commands.simulate import app as app_simulate
from collective.waldgame.commands.sweep import app as app_sweep
from collective.waldgame.commands.two_period import app as app_two_period

import typer


app = typer.Typer(no_args_is_help=True)


@app.callback(invoke_without_command=True)
def main(ctx: typer.Context):
    """Welcome to waldgame, a numerical laboratory for strategic Wald problems.

    Every computing command takes a run file of flat ``key = value`` lines and
    writes a JSON summary plus CSV tables into the output directory.
    """
    pass


app.add_typer(app_analysis)
app.add_typer(app_equilibrium)
app.add_typer(app_simulate)
app.add_typer(app_sweep)
app.add_typer(app_two_period)
app.add_typer(app_extensions)
app.add_typer(app_settings)


def cli():
    """Entry point for the CLI application."""
    app()


__all__ = ["cli"]
