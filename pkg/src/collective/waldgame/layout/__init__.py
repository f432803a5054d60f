"""
Layout and UI components for collective.waldgame.

This module provides the rich terminal components the commands print: a
header panel, a summary panel for command results and a progress bar for
Monte Carlo runs and sweeps.
"""

from collections.abc import Callable
from collections.abc import Iterator
from collections.abc import Mapping
from collective.waldgame import _types as t
from contextlib import contextmanager
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn
from rich.progress import Progress
from rich.progress import SpinnerColumn
from rich.progress import TextColumn
from rich.table import Table
from typing import Any


class Header:
    """Display header for the application."""

    def __init__(self, title: str):
        self.title = title

    def __rich__(self) -> Panel:
        grid = Table.grid(expand=True)
        grid.add_column(justify="center", ratio=1)
        grid.add_row("[b]collective.waldgame[/b]")
        grid.add_row(f"[b]{self.title}[/b]")
        return Panel(grid, style="white on blue")


def _render(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, Mapping):
        return f"{len(value)} entries"
    if isinstance(value, list | tuple) and len(value) > 4:
        return f"{len(value)} items"
    return f"{value}"


class SummaryReport:
    """Top-level scalars of a command summary in a two-column panel."""

    def __init__(self, data: Mapping[str, Any], title: str):
        self.title = title
        self.data = data

    def __rich__(self) -> Panel:
        grid = Table.grid(expand=True)
        grid.add_column(justify="left", ratio=2)
        grid.add_column(justify="right", ratio=1)
        for name, value in sorted(self.data.items()):
            grid.add_row(name, _render(value))
        return Panel(grid, title=self.title, border_style="green")


class ArtifactsReport:
    """Files written by a command."""

    def __init__(self, result: t.CommandResult):
        self.result = result

    def __rich__(self) -> Panel:
        grid = Table.grid(expand=True)
        grid.add_column(justify="left", ratio=1)
        for path in self.result.artifacts:
            grid.add_row(f"{path}")
        return Panel(grid, title="[b]Artifacts", border_style="green")


def create_consoles() -> t.ConsoleArea:
    """Console area printing to the terminal."""
    return t.ConsoleArea(main=Console())


def one_line(result: t.CommandResult) -> str:
    """Summary line printed after every successful command."""
    keys = ", ".join(sorted(result.summary)[:6])
    return f"{result.command}: ok ({keys}); {len(result.artifacts)} file(s) written"


@contextmanager
def progress_bar(
    consoles: t.ConsoleArea, description: str, total: int
) -> Iterator[Callable[[int], None]]:
    """Progress bar advanced by the callable it yields.

    Without UI the callable does nothing.
    """
    if not consoles.ui:
        yield lambda advance: None
        return
    progress = Progress(
        "{task.description}",
        SpinnerColumn(),
        BarColumn(),
        TextColumn(
            "[progress.percentage]{task.percentage:>3.0f}%[/progress.percentage] "
            "({task.completed}/{task.total})"
        ),
        console=consoles.main,
        expand=True,
    )
    task_id = progress.add_task(f"[green]{description}", total=total)
    with progress:
        yield lambda advance: progress.advance(task_id, advance)
