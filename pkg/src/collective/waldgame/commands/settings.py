from collective.waldgame import logger
from collective.waldgame import settings
from collective.waldgame.config import dump_config
from collective.waldgame.config import load_config
from collective.waldgame.exceptions import WaldGameError
from dynaconf.loaders import toml_loader
from pathlib import Path
from tempfile import NamedTemporaryFile
from typing import Annotated

import typer


app = typer.Typer()


@app.command(name="settings")
def app_settings(
    run_file: Annotated[
        Path | None,
        typer.Argument(help="Run file to resolve against the package settings"),
    ] = None,
):
    """Report settings to be used by this application.

    With a run file, report the fully resolved run configuration instead.
    """
    with NamedTemporaryFile(suffix=".toml", delete_on_close=False) as fp:
        filepath = fp.name
        if run_file is None:
            logger.info("Settings used by this application")
            data = {k.lower(): v for k, v in settings.wg_config.as_dict().items()}
            toml_loader.write(filepath, data)
        else:
            logger.info(f"Resolved run file {run_file}")
            try:
                dump_config(load_config(run_file), Path(filepath))
            except WaldGameError as exc:
                typer.echo(f"{type(exc).__name__}: {exc}")
                raise typer.Exit(code=1) from None
        response = Path(filepath).read_text(encoding="utf-8")
    logger.info("")
    for line in response.split("\n"):
        logger.info(line)
    typer.echo(response)
