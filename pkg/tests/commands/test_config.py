from collective.waldgame import config
from collective.waldgame.exceptions import ConfigError
from collective.waldgame.exceptions import InvalidParameters
from collective.waldgame.model_core import validate_params
from pathlib import Path

import pytest


def test_load_config(resource_path, base_values):
    run = config.load_config(resource_path("base.toml"))
    assert run.params == validate_params(base_values)
    assert run.prior == 0.5
    assert run.controls.ode_step == 1e-4
    assert run.simulation.reps == 100_000


@pytest.mark.parametrize(
    "filename,key,line",
    [
        ["malformed.toml", None, 3],
        ["unknown_key.toml", "temperature", 8],
    ],
)
def test_load_config_reports_line(resource_path, filename: str, key, line: int):
    with pytest.raises(ConfigError) as exc:
        config.load_config(resource_path(filename))
    assert exc.value.fields["line"] == line
    assert exc.value.fields.get("key") == key


def test_duplicate_key(run_file, base_values):
    path = run_file(base_values)
    path.write_text(path.read_text() + "A = 0.5\n")
    with pytest.raises(ConfigError) as exc:
        config.load_config(path)
    assert "repeats" in str(exc.value)


def test_keys_are_case_insensitive(run_file, base_values):
    values = {key.upper(): value for key, value in base_values.items()}
    run = config.load_config(run_file({**values, "P0": 0.3}))
    assert run.params == validate_params(base_values)
    assert run.prior == 0.3


def test_controls_override_settings(run_file, base_values):
    path = run_file({**base_values, "eps": 1e-3, "reps": 500, "seed": 3})
    run = config.load_config(path)
    assert run.verifier.eps == 1e-3
    assert run.simulation.reps == 500
    assert isinstance(run.simulation.reps, int)
    assert run.simulation.seed == 3


@pytest.mark.parametrize(
    "key,value",
    [
        ["ode_step", 0.0],
        ["eps", -1e-4],
        ["reps", 0],
        ["seed", -1],
        ["prior", 1.0],
        ["start_margin", 1.5],
    ],
)
def test_rejects_bad_controls(run_file, base_values, key: str, value):
    with pytest.raises(ConfigError) as exc:
        config.load_config(run_file({**base_values, key: value}))
    assert exc.value.fields["key"] == key


def test_invalid_parameters_name_the_constraint(run_file, base_values):
    with pytest.raises(InvalidParameters) as exc:
        config.load_config(run_file({**base_values, "c": -0.1}))
    assert exc.value.fields["constraint"] == "c > 0"


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        config.load_config(tmp_path / "absent.toml")


def test_wrong_suffix(run_file, base_values):
    with pytest.raises(ConfigError):
        config.load_config(run_file(base_values, name="run.cfg"))


def test_dump_and_load_give_the_same_config(run_file, base_values, tmp_path):
    run = config.load_config(
        run_file({**base_values, "prior": 0.37, "out_dir": tmp_path / "out"})
    )
    target = config.dump_config(run, tmp_path / "resolved.toml")
    assert config.load_config(target) == run


def test_config_to_dict(resource_path):
    data = config.config_to_dict(config.load_config(resource_path("base.toml")))
    assert data["dbar_H"] == data["dbar_L"] == 0.7
    assert data["prior"] == 0.5
    assert data["out_dir"] == "."
    assert {"ode_step", "eps", "reps", "N", "u_S"} <= set(data)


def test_config_from_mapping_rejects_unknown_keys(base_values):
    with pytest.raises(ConfigError) as exc:
        config.config_from_mapping({**base_values, "speed": 1.0})
    assert exc.value.fields["key"] == "speed"


def test_config_from_mapping_defaults(base_values):
    run = config.config_from_mapping(base_values)
    assert run.prior == 0.5
    assert run.out_dir == Path(".")
