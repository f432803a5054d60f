from collective.waldgame import settings

import pytest


@pytest.mark.parametrize(
    "key,expected",
    [
        ["config.debug", bool],
        ["config.log_file", str],
        ["solver.ode_step", float],
        ["solver.max_iter", int],
        ["solver.start_margin", float],
        ["verifier.eps", float],
        ["verifier.sweep_horizon", float],
        ["simulation.reps", int],
        ["simulation.seed", int],
        ["output.schema_version", str],
        ["output.prior", float],
    ],
)
def test_settings_wg_config_default(key: str, expected):
    value = settings.wg_config
    parts = key.split(".")
    for part in parts:
        value = getattr(value, part)
    assert isinstance(value, expected)


def test_settings_is_debug_default():
    assert settings.is_debug is False
