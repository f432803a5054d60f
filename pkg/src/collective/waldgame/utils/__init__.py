"""
Utility functions for the collective.waldgame package.

This module provides the default numerical controls read from the package
settings and the timing helper used by the commands.
"""

from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.settings import wg_config
from contextlib import contextmanager
from datetime import datetime
from functools import cache


@cache
def default_controls() -> t.SolverControls:
    """Solver controls from the package settings."""
    solver = wg_config.solver
    return t.SolverControls(
        ode_step=float(solver.ode_step),
        scan_step=float(solver.scan_step),
        bisect_tol=float(solver.bisect_tol),
        root_tol=float(solver.root_tol),
        horizon=float(solver.horizon),
        max_iter=int(solver.max_iter),
        max_rho_step=float(solver.max_rho_step),
        start_margin=float(solver.start_margin),
    )


@cache
def default_verifier() -> t.VerifierControls:
    """Verifier controls from the package settings."""
    verifier = wg_config.verifier
    return t.VerifierControls(
        eps=float(verifier.eps),
        sweep_step=float(verifier.sweep_step),
        sweep_horizon=float(verifier.sweep_horizon),
    )


@cache
def default_simulation() -> t.SimulationControls:
    """Simulation controls from the package settings."""
    simulation = wg_config.simulation
    return t.SimulationControls(
        reps=int(simulation.reps),
        seed=int(simulation.seed),
        report_step=float(simulation.report_step),
        chunk_size=int(simulation.chunk_size),
    )


@contextmanager
def report_time(title: str, consoles: t.ConsoleArea):
    """Context manager for timing operations and reporting duration.

    Args:
        title: Title for the timing report
        consoles: Console area for output display
    """
    start = datetime.now()
    consoles.debug(f"{title} started at {start}")
    yield
    finish = datetime.now()
    msg = f"{title} took {(finish - start).total_seconds():.3f} seconds"
    consoles.debug(f"{title} ended at {finish}")
    logger.info(msg)
