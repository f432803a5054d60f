"""
Shared plumbing of the command line.

Every command loads a run file, applies the command-line overrides, runs the
registered handler through ``runner.dispatch`` and prints a summary. Domain
errors end the command with exit code 1 and a machine-readable JSON document
on standard output.
"""

from collections.abc import Callable
from collective.waldgame import _types as t
from collective.waldgame import layout
from collective.waldgame import logger
from collective.waldgame.config import load_config
from collective.waldgame.exceptions import WaldGameError
from collective.waldgame.runner import dispatch
from collective.waldgame.runner import error_document
from collective.waldgame.utils import files as file_utils
from collective.waldgame.utils import report_time
from dataclasses import replace
from pathlib import Path
from typing import Annotated
from typing import Any

import typer


ConfigArg = Annotated[
    Path, typer.Argument(help="Run file with flat key = value lines (TOML)")
]
PriorOpt = Annotated[
    float | None, typer.Option("--prior", "--p0", help="Override the prior")
]
OutOpt = Annotated[
    Path | None, typer.Option("--out", help="Directory receiving the artifacts")
]
NoUiOpt = Annotated[
    bool, typer.Option("--no-ui", help="Plain log output instead of rich panels")
]
RegimeOpt = Annotated[
    t.Regime | None,
    typer.Option("--regime", help="Regime to build, the first applicable by default"),
]


def resolve(
    config_path: Path, prior: float | None = None, out: Path | None = None
) -> t.RunConfig:
    """Load a run file and apply command-line overrides."""
    config = load_config(config_path)
    updates: dict[str, Any] = {}
    if prior is not None:
        updates["prior"] = prior
    if out is not None:
        updates["out_dir"] = out
    return replace(config, **updates) if updates else config


def _fail(command: str, exc: WaldGameError, config: t.RunConfig | None):
    document = error_document(command, exc)
    if config is not None:
        target = file_utils.ensure_dir(config.out_dir) / f"{command}.error.json"
        file_utils.json_dump(document, target)
    logger.error(f"{command} failed: {exc}")
    typer.echo(file_utils.json_dumps(document).decode("utf-8"))
    raise typer.Exit(code=1)


def execute(
    command: str,
    config_path: Path,
    options: dict[str, Any] | None = None,
    prior: float | None = None,
    out: Path | None = None,
    no_ui: bool = False,
    total: Callable[[t.RunConfig], int] | None = None,
    simulation: dict[str, Any] | None = None,
) -> t.CommandResult:
    """Run ``command`` on a run file and report the outcome.

    Args:
        command: Registered command name
        config_path: Run file
        options: Command options passed to the handler
        prior: Prior override
        out: Output directory override
        no_ui: Log instead of printing rich panels
        total: Units of work of the progress bar for a config, no bar when None
        simulation: Overrides of the simulation controls
    """
    consoles = layout.create_consoles()
    if no_ui:
        consoles.disable_ui()
    consoles.print(layout.Header(title=f"{command} {config_path}"))
    config = None
    try:
        config = resolve(config_path, prior, out)
        if simulation:
            controls = replace(config.simulation, **simulation)
            config = replace(config, simulation=controls)
        with report_time(command, consoles):
            if total is None:
                result = dispatch(command, config, options)
            else:
                with layout.progress_bar(consoles, command, total(config)) as advance:
                    result = dispatch(command, config, options, advance)
    except WaldGameError as exc:
        _fail(command, exc, config)
    consoles.print(layout.SummaryReport(result.summary, f"[b]{command}"))
    consoles.print(layout.ArtifactsReport(result))
    consoles.print_log(layout.one_line(result))
    return result
