from collective.waldgame import _types as t
from collective.waldgame.model_core import validate_params
from pathlib import Path

import pytest


RESOURCES = Path(__file__).parent / "_resources"

BASE = {
    "u_H": 1.0,
    "u_L": -1.0,
    "dbar": 0.7,
    "dund": 0.5,
    "a": 0.6,
    "b": 0.8,
    "c": 0.025,
}
SET_Q = {**BASE, "dbar": 0.2, "dund": 0.1, "c": 0.01}
INTENSE = {
    "u_H": 0.5,
    "u_L": -1.0,
    "dbar_H": 1.0,
    "dbar_L": 0.7,
    "dund_H": 0.5,
    "dund_L": 0.5,
    "a": 0.6,
    "b": 0.8,
    "c": 0.01,
}


@pytest.fixture(scope="session")
def base_values() -> dict:
    return dict(BASE)


@pytest.fixture(scope="session")
def intense_values() -> dict:
    return dict(INTENSE)


@pytest.fixture(scope="session")
def base() -> t.ModelParams:
    return validate_params(BASE)


@pytest.fixture(scope="session")
def set_q() -> t.ModelParams:
    return validate_params(SET_Q)


@pytest.fixture(scope="session")
def intense_set() -> t.ModelParams:
    return validate_params(INTENSE)


@pytest.fixture(scope="session")
def controls() -> t.SolverControls:
    return t.SolverControls()


@pytest.fixture(scope="session")
def verifier() -> t.VerifierControls:
    return t.VerifierControls()


@pytest.fixture
def simulation() -> t.SimulationControls:
    return t.SimulationControls(reps=20_000, seed=7, report_step=0.5, chunk_size=4096)


@pytest.fixture(scope="session")
def resource_path():
    def func(filename: str) -> Path:
        return RESOURCES / filename

    return func


@pytest.fixture
def run_file(tmp_path):
    """Write a flat run file into a temporary directory."""

    def func(values: dict, name: str = "run.toml") -> Path:
        lines = ["# run file written by the test suite"]
        for key, value in values.items():
            rendered = f'"{value}"' if isinstance(value, str | Path) else repr(value)
            lines.append(f"{key} = {rendered}")
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n")
        return path

    return func
