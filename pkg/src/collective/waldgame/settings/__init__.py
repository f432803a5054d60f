"""
Settings management for collective.waldgame.

This module provides configuration management using Dynaconf, supporting
TOML configuration files, environment variables, and validation. It holds the
package-wide numerical defaults used whenever a run file leaves a control out.
"""

from dynaconf import Dynaconf
from dynaconf import Validator
from pathlib import Path


def _settings() -> Dynaconf:
    """Initialize and configure Dynaconf settings.

    Sets up the configuration system with default TOML file, environment
    variable support, and validation rules.

    Returns:
        Configured Dynaconf settings object
    """
    local_path = Path(__file__).parent
    default = local_path / "default.toml"
    settings = Dynaconf(
        envvar_prefix="WALDGAME",
        preload=[default],
        settings_files=["waldgame.toml"],
        merge_enabled=True,
        validators=[
            Validator("solver.ode_step", "solver.scan_step", cast=float, gt=0),
            Validator("solver.bisect_tol", "solver.root_tol", cast=float, gt=0),
            Validator("solver.horizon", "solver.max_rho_step", cast=float, gt=0),
            Validator("solver.start_margin", cast=float, gt=0, lt=1),
            Validator("solver.max_iter", cast=int, gt=0),
            Validator("verifier.eps", "verifier.sweep_step", cast=float, gt=0),
            Validator("verifier.sweep_horizon", cast=float, gt=0),
            Validator("simulation.reps", "simulation.chunk_size", cast=int, gt=0),
            Validator("simulation.seed", cast=int, gte=0),
            Validator("simulation.report_step", cast=float, gt=0),
            Validator("output.schema_version", cast=str, default="1"),
        ],
    )
    return settings


# Global configuration object
wg_config: Dynaconf = _settings()

# Debug mode flag
is_debug: bool = wg_config.config.debug

__all__ = ["is_debug", "wg_config"]
