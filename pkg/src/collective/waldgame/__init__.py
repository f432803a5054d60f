"""
Collective Waldgame - Numerical laboratory for strategic Wald problems

This package computes, verifies and simulates the equilibria of a stopping
game in which players buy costly Poisson information about a binary state
before choosing a risky action R or a safe action S, and the first player to
take R earns a premium over later takers.

The package consists of several key components:
- model_core: Parameters, belief dynamics and the stopping payoff primitive
- single_dm: Free-boundary benchmark of a single decision maker
- cutoffs: Prior cutoffs and auxiliary times of the equilibrium regimes
- ode_solver: Indifference ODE generating the random stopping paths
- equilibrium: Regime classification and profile construction
- verifier: Best-response sweeps and equilibrium certificates
- simulator: Monte Carlo engine for the continuous-time game
- extensions: Intense competition, observable actions and N players
- two_period: Exact enumeration of the two-period example
- Settings: Configuration management using TOML files
- Commands: CLI interface for every computation

Usage:
    waldgame cutoffs <config.toml>
    waldgame solve <config.toml> --regime random-stopping
    waldgame verify <config.toml> --regime random-stopping
    waldgame simulate <config.toml> --regime random-stopping --reps 100000
    waldgame settings
"""

from .about import __version__  # noQA: F401
from pathlib import Path

import logging


PACKAGE_NAME = "collective.waldgame"


def _setup_logging():
    """Set up logging configuration for the package.

    Configures logging with appropriate level (DEBUG if debug mode is enabled,
    otherwise INFO) and creates a file handler for logging to a configurable
    log file path.

    Returns:
        logging.Logger: Configured logger instance for the package.
    """
    from collective.waldgame.settings import is_debug
    from collective.waldgame.settings import wg_config

    level = logging.DEBUG if is_debug else logging.INFO

    logger = logging.getLogger(PACKAGE_NAME)
    logger.setLevel(level)

    path = Path.cwd() / wg_config.config.log_file
    file_handler = logging.FileHandler(path, "a")
    file_handler.setLevel(level)
    file_formatter = logging.Formatter("%(levelname)s: %(message)s")
    file_handler.setFormatter(file_formatter)
    logger.addHandler(file_handler)

    return logger


logger = _setup_logging()
