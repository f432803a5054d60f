"""
Run files.

A run file is a flat TOML file of ``key = value`` lines with ``#`` comments.
Keys are case-insensitive names of model parameters, solver, verifier and
simulation controls, the prior and the output directory. Missing controls
fall back to the package settings.
"""

from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.exceptions import ConfigError
from collective.waldgame.model_core import validate_params
from collective.waldgame.settings import wg_config
from collective.waldgame.utils import default_controls
from collective.waldgame.utils import default_simulation
from collective.waldgame.utils import default_verifier
from dataclasses import asdict
from dataclasses import replace
from dynaconf import Dynaconf
from dynaconf import ValidationError
from dynaconf import Validator
from dynaconf.loaders import toml_loader
from pathlib import Path
from typing import Any

import re


MODEL_KEYS = (
    "u_H",
    "u_L",
    "dbar_H",
    "dbar_L",
    "dund_H",
    "dund_L",
    "dbar",
    "dund",
    "a",
    "b",
    "c",
    "u_S",
    "N",
)
SOLVER_KEYS = tuple(t.SolverControls.__dataclass_fields__)
VERIFIER_KEYS = tuple(t.VerifierControls.__dataclass_fields__)
SIMULATION_KEYS = tuple(t.SimulationControls.__dataclass_fields__)
OTHER_KEYS = ("prior", "out_dir")

CANONICAL = {
    name.lower(): name
    for name in (
        *MODEL_KEYS,
        *SOLVER_KEYS,
        *VERIFIER_KEYS,
        *SIMULATION_KEYS,
        *OTHER_KEYS,
    )
}
ALIASES = {"p0": "prior"}

_INTEGERS = ("max_iter", "reps", "chunk_size")
_INT_FIELDS = (*_INTEGERS, "seed")

_BLANK = re.compile(r"^\s*(#.*)?$")
_LINE = re.compile(
    r'^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*("[^"]*"|[^#\s][^#]*?)\s*(#.*)?$'
)


def _scan(text: str) -> None:
    """Reject anything that is not a flat assignment, with its line number."""
    seen: dict[str, int] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if _BLANK.match(line):
            continue
        match = _LINE.match(line)
        if match is None:
            raise ConfigError(f"Malformed line {number}: {line.strip()!r}", line=number)
        key = match.group(1).lower()
        key = ALIASES.get(key, key)
        if key not in CANONICAL:
            raise ConfigError(
                f"Unknown key {match.group(1)!r} on line {number}",
                key=match.group(1),
                line=number,
            )
        if key in seen:
            raise ConfigError(
                f"Key {match.group(1)!r} on line {number} repeats line {seen[key]}",
                key=match.group(1),
                line=number,
            )
        seen[key] = number


def _validators() -> list[tuple[str, Validator]]:
    validators = [
        (name, Validator(name.upper(), cast=float, gt=0))
        for name in (*SOLVER_KEYS, *VERIFIER_KEYS, "report_step")
        if name not in _INTEGERS
    ]
    validators.extend(
        (name, Validator(name.upper(), cast=int, gt=0)) for name in _INTEGERS
    )
    validators.append(("seed", Validator("SEED", cast=int, gte=0)))
    validators.append(("prior", Validator("PRIOR", cast=float, gt=0, lt=1)))
    validators.append(("start_margin", Validator("START_MARGIN", cast=float, lt=1)))
    return validators


def _read(path: Path) -> Dynaconf:
    settings = Dynaconf(
        envvar_prefix="WALDGAME_RUN",
        settings_files=[str(path.resolve())],
        environments=False,
        load_dotenv=False,
    )
    for name, validator in _validators():
        if not settings.exists(name.upper()):
            continue
        try:
            validator.validate(settings)
        except ValidationError as exc:
            raise ConfigError(f"Invalid value for {name}: {exc}", key=name) from None
    return settings


def _section(defaults, values: dict[str, Any]):
    updates = {}
    for name in defaults.__dataclass_fields__:
        if name in values:
            cast = int if name in _INT_FIELDS else float
            updates[name] = cast(values[name])
    return replace(defaults, **updates)


def config_from_mapping(values: dict[str, Any]) -> t.RunConfig:
    """Resolve canonical key/value pairs into a RunConfig."""
    unknown = sorted(key for key in values if key not in CANONICAL.values())
    if unknown:
        raise ConfigError(f"Unknown keys: {', '.join(unknown)}", key=unknown[0])
    model = {key: values[key] for key in MODEL_KEYS if key in values}
    params = validate_params(model)
    return t.RunConfig(
        params=params,
        prior=float(values.get("prior", wg_config.output.prior)),
        controls=_section(default_controls(), values),
        verifier=_section(default_verifier(), values),
        simulation=_section(default_simulation(), values),
        out_dir=Path(values.get("out_dir", wg_config.output.out_dir)),
    )


def load_config(path: Path) -> t.RunConfig:
    """Read, validate and resolve a run file.

    Raises:
        ConfigError: for missing files, malformed lines (with their line
            number), unknown keys and non-positive controls (with the key)
        InvalidParameters: when the model parameters violate a constraint
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Run file {path} does not exist", path=str(path))
    if path.suffix.lower() not in (".toml", ".tml"):
        raise ConfigError(f"Run file {path} must be a .toml file", path=str(path))
    _scan(path.read_text(encoding="utf-8"))
    try:
        settings = _read(path)
        raw = settings.as_dict()
    except ValueError as exc:
        raise ConfigError(f"Cannot parse {path}: {exc}", path=str(path)) from None
    values: dict[str, Any] = {}
    for key, value in raw.items():
        name = ALIASES.get(key.lower(), key.lower())
        if name not in CANONICAL:
            raise ConfigError(f"Unknown key {key!r}", key=key)
        values[CANONICAL[name]] = value
    logger.debug(f"Loaded run file {path}: {sorted(values)}")
    return config_from_mapping(values)


def config_to_dict(config: t.RunConfig) -> dict[str, Any]:
    """Flat canonical mapping of a resolved config."""
    data: dict[str, Any] = dict(config.params.to_dict())
    data["prior"] = config.prior
    data.update(asdict(config.controls))
    data.update(asdict(config.verifier))
    data.update(asdict(config.simulation))
    data["out_dir"] = str(config.out_dir)
    return data


def dump_config(config: t.RunConfig, path: Path) -> Path:
    """Write a resolved config as a flat run file.

    Floats are written in their shortest round-trip form, so loading the file
    back gives an equal config.
    """
    path = Path(path)
    toml_loader.write(str(path), config_to_dict(config), merge=False)
    logger.debug(f" - Wrote {path}")
    return path
