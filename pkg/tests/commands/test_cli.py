from collective.waldgame.cli import app
from typer.testing import CliRunner

import orjson
import pytest


runner = CliRunner()


@pytest.fixture
def base_file(run_file, base_values, tmp_path):
    return run_file({**base_values, "prior": 0.5, "out_dir": tmp_path / "out"})


@pytest.mark.parametrize(
    "command,artifact",
    [
        ["cutoffs", "cutoffs.json"],
        ["classify", "classify.json"],
        ["single-dm", "single_dm.csv"],
        ["two-period", "two_period_Learn.csv"],
    ],
)
def test_prior_commands(base_file, tmp_path, command: str, artifact: str):
    result = runner.invoke(app, [command, str(base_file), "--no-ui"])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "out" / artifact).exists()


def test_prior_and_out_overrides(base_file, tmp_path):
    out = tmp_path / "elsewhere"
    args = ["classify", str(base_file), "--p0", "0.9", "--out", str(out), "--no-ui"]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    document = orjson.loads((out / "classify.json").read_bytes())
    assert document["result"]["regimes"] == ["immediate-r"]
    assert document["config"]["prior"] == 0.9


def test_solve_above_p_tilde_fails(base_file, tmp_path):
    args = [
        "solve",
        str(base_file),
        "--regime",
        "random-stopping",
        "--that",
        "0",
        "--p0",
        "0.7",
        "--no-ui",
    ]
    result = runner.invoke(app, args)
    assert result.exit_code == 1
    error = orjson.loads((tmp_path / "out" / "solve.error.json").read_bytes())
    assert error["error"] == "NoRandomization"
    assert error["slope"] < 0.0
    assert '"NoRandomization"' in result.output


def test_verify(base_file, tmp_path):
    args = ["verify", str(base_file), "--regime", "immediate-r", "--p0", "0.9"]
    result = runner.invoke(app, [*args, "--no-ui"])
    assert result.exit_code == 0, result.output
    document = orjson.loads((tmp_path / "out" / "verify.json").read_bytes())
    assert document["result"]["certificate"]["certified"] is True


def test_simulate_same_seed_same_bytes(base_file, tmp_path):
    args = [
        "simulate",
        str(base_file),
        "--regime",
        "random-stopping",
        "--reps",
        "3000",
        "--seed",
        "5",
        "--no-ui",
    ]
    target = tmp_path / "out" / "simulate.json"
    assert runner.invoke(app, args).exit_code == 0
    first = target.read_bytes()
    assert runner.invoke(app, args).exit_code == 0
    assert target.read_bytes() == first
    assert orjson.loads(first)["result"]["reps"] == 3000


def test_simulate_mrss(base_file, tmp_path):
    args = ["simulate", str(base_file), "--mrss", "--reps", "2000", "--p0", "0.55"]
    result = runner.invoke(app, [*args, "--no-ui"])
    assert result.exit_code == 0, result.output
    document = orjson.loads((tmp_path / "out" / "simulate.json").read_bytes())
    assert document["result"]["extra"]["variant"] == "mrss"


def test_sweep(base_file, tmp_path):
    args = ["sweep", str(base_file), "--key", "c", "--values", "0.01:0.03:3"]
    result = runner.invoke(app, [*args, "--no-ui"])
    assert result.exit_code == 0, result.output
    document = orjson.loads((tmp_path / "out" / "sweep.json").read_bytes())
    values = [point["c"] for point in document["result"]["points"]]
    assert values == pytest.approx([0.01, 0.02, 0.03])


@pytest.mark.parametrize(
    "subcommand,artifact",
    [
        ["mrss", "mrss.csv"],
        ["nplayer", "extensions.json"],
    ],
)
def test_extensions(base_file, tmp_path, subcommand: str, artifact: str):
    args = ["extensions", subcommand, str(base_file), "--p0", "0.55", "--no-ui"]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    assert (tmp_path / "out" / artifact).exists()


def test_malformed_run_file(resource_path):
    result = runner.invoke(app, ["cutoffs", str(resource_path("malformed.toml"))])
    assert result.exit_code == 1
    assert '"ConfigError"' in result.output
    assert '"line": 3' in result.output


def test_settings():
    result = runner.invoke(app, ["settings"])
    assert result.exit_code == 0
    assert "[solver]" in result.output


def test_settings_resolves_run_file(base_file):
    result = runner.invoke(app, ["settings", str(base_file)])
    assert result.exit_code == 0
    assert "dbar_H = 0.7" in result.output
