"""
Command dispatch.

Every command computes a JSON-ready summary from a resolved run file and may
write CSV tables next to it. ``dispatch`` wraps the summary with the schema
version and the full config and writes ``<command>.json`` into the output
directory.
"""

from collections.abc import Callable
from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.config import config_from_mapping
from collective.waldgame.config import config_to_dict
from collective.waldgame.cutoffs import cutoff_table
from collective.waldgame.equilibrium import build_equilibrium
from collective.waldgame.equilibrium import classify
from collective.waldgame.exceptions import ConfigError
from collective.waldgame.exceptions import RegimeMismatch
from collective.waldgame.exceptions import UnknownCommand
from collective.waldgame.exceptions import WaldGameError
from collective.waldgame.extensions import competition_solution
from collective.waldgame.extensions import mrss_spec
from collective.waldgame.extensions import n_player_report
from collective.waldgame.settings import wg_config
from collective.waldgame.simulator import simulate_mrss
from collective.waldgame.simulator import simulate_profile
from collective.waldgame.single_dm import dm_cutoffs
from collective.waldgame.single_dm import dm_policy
from collective.waldgame.single_dm import dm_value
from collective.waldgame.single_dm import smooth_pasting_residuals
from collective.waldgame.two_period import two_period_curves
from collective.waldgame.two_period import two_period_payoffs
from collective.waldgame.utils import files as file_utils
from collective.waldgame.verifier import best_response_sweep
from collective.waldgame.verifier import check_equilibrium
from collective.waldgame.verifier import hjb_residual
from dataclasses import asdict
from pathlib import Path
from typing import Any

import numpy as np


Handler = Callable[
    [t.RunConfig, dict[str, Any], Path | None, Callable[[int], None] | None],
    tuple[dict[str, Any], list[Path]],
]

COMMANDS: dict[str, Handler] = {}


def command(name: str) -> Callable[[Handler], Handler]:
    """Register a handler under a command name."""

    def register(func: Handler) -> Handler:
        COMMANDS[name] = func
        return func

    return register


def _profile(config: t.RunConfig, options: dict[str, Any]) -> t.EquilibriumProfile:
    regime = options.get("regime")
    if regime is None:
        classification = classify(config.prior, config.params, config.controls)
        if not classification.regimes:
            raise RegimeMismatch(
                f"No regime applies at p0 = {config.prior!r}",
                **classification.diagnostics,
            )
        regime = classification.regimes[0]
    return build_equilibrium(
        t.Regime(regime),
        config.prior,
        config.params,
        T_hat=options.get("T_hat"),
        controls=config.controls,
    )


def _path_csv(profile: t.EquilibriumProfile, out: Path) -> list[Path]:
    path = profile.strategy.path
    if path is None:
        return []
    target = out / "strategy_path.csv"
    return [file_utils.csv_dump(path.rows(), ["t", "rho", "F_H", "F_L"], target)]


@command("single-dm")
def run_single_dm(config, options, out, progress):
    params = config.params
    solution = dm_cutoffs(params, config.controls)
    residuals = smooth_pasting_residuals(solution, params)
    summary = {
        **asdict(solution),
        "residuals": asdict(residuals),
        "prior": config.prior,
        "value": float(dm_value(config.prior, solution, params)),
        "policy": dm_policy(config.prior, solution).value,
    }
    artifacts = []
    if out is not None:
        grid = np.linspace(0.0, 1.0, 201)
        rows = [
            {"p": float(p), "V": float(v)}
            for p, v in zip(grid, dm_value(grid, solution, params), strict=True)
        ]
        artifacts.append(file_utils.csv_dump(rows, ["p", "V"], out / "single_dm.csv"))
    return summary, artifacts


@command("cutoffs")
def run_cutoffs(config, options, out, progress):
    return cutoff_table(config.params, config.prior, config.controls), []


@command("classify")
def run_classify(config, options, out, progress):
    classification = classify(config.prior, config.params, config.controls)
    return classification.to_dict(), []


@command("solve")
def run_solve(config, options, out, progress):
    profile = _profile(config, options)
    artifacts = _path_csv(profile, out) if out is not None else []
    return profile.to_dict(), artifacts


@command("verify")
def run_verify(config, options, out, progress):
    profile = _profile(config, options)
    certificate = check_equilibrium(profile, config.params, config.verifier)
    summary = {"profile": profile.to_dict(), "certificate": certificate.to_dict()}
    if options.get("hjb"):
        report = hjb_residual(profile, config.params, config.verifier)
        summary["hjb"] = {
            "learning_max": report.learning_max,
            "stopping_max": report.stopping_max,
        }
    artifacts = []
    if out is not None:
        sweep = best_response_sweep(
            profile.strategy, profile.prior, config.params, config.verifier
        )
        rows = [
            {"T": float(time), "V": float(value)}
            for time, value in zip(sweep.t, sweep.value_curve, strict=True)
        ]
        artifacts.append(file_utils.csv_dump(rows, ["T", "V"], out / "value_curve.csv"))
        artifacts.extend(_path_csv(profile, out))
    return summary, artifacts


@command("simulate")
def run_simulate(config, options, out, progress):
    horizon = options.get("horizon")
    if options.get("variant") == "mrss":
        report = simulate_mrss(
            config.prior, config.params, config.simulation, horizon, progress
        )
        report.extra["variant"] = "mrss"
    else:
        profile = _profile(config, options)
        report = simulate_profile(
            profile, config.params, config.simulation, horizon, progress
        )
    artifacts = []
    if out is not None:
        artifacts.append(
            file_utils.csv_dump(
                report.rows(), ["t", "F_H_emp", "F_L_emp"], out / "simulation_cdf.csv"
            )
        )
    return report.to_dict(), artifacts


@command("two-period")
def run_two_period(config, options, out, progress):
    summary: dict[str, Any] = {}
    artifacts = []
    for opponent in t.Opponent:
        payoffs = two_period_payoffs(config.prior, opponent, config.params)
        summary[opponent.value] = {
            "pay_R0": payoffs.pay_R0,
            "pay_S0": payoffs.pay_S0,
            "pay_learn": payoffs.pay_learn,
            "crossings": payoffs.crossings,
        }
        if out is not None:
            rows = two_period_curves(opponent, config.params)
            target = out / f"two_period_{opponent.value}.csv"
            header = ["p0", "pay_R0", "pay_S0", "pay_learn"]
            artifacts.append(file_utils.csv_dump(rows, header, target))
    return summary, artifacts


@command("extensions")
def run_extensions(config, options, out, progress):
    variant = options.get("variant", "competition")
    params, prior = config.params, config.prior
    artifacts = []
    match variant:
        case "competition":
            solution = competition_solution(prior, params, controls=config.controls)
            summary = {"T_ps": solution.T_ps, "p_nr": solution.p_nr, "prior": prior}
            rows, header = solution.rows(), ["t", "W_L", "psi", "U_R"]
        case "mrss":
            spec = mrss_spec(prior, params)
            summary = {"boundary": spec.boundary, "flags": spec.flags, "prior": prior}
            rows, header = spec.rows(), ["t", "hazard", "belief"]
        case "nplayer":
            Ns = options.get("Ns") or (2, 3, 4, 5)
            report = n_player_report(prior, params, Ns, config.controls)
            summary = {"prior": prior, "players": report}
            rows, header = [], []
        case _:
            raise UnknownCommand(f"Unknown extension {variant!r}", command=variant)
    summary["variant"] = variant
    if out is not None and rows:
        target = out / f"{variant}.csv"
        artifacts.append(file_utils.csv_dump(rows, header, target))
    return summary, artifacts


def _swept(config: t.RunConfig, key: str, value: float) -> t.RunConfig:
    mapping = config_to_dict(config)
    if key in ("dbar", "dund"):
        mapping[f"{key}_H"] = mapping[f"{key}_L"] = value
    elif key in mapping:
        mapping[key] = value
    else:
        raise ConfigError(f"Cannot sweep unknown key {key!r}", key=key)
    return config_from_mapping(mapping)


@command("sweep")
def run_sweep(config, options, out, progress):
    key = options["key"]
    inner = options.get("inner", "cutoffs")
    if inner == "sweep" or inner not in COMMANDS:
        raise UnknownCommand(f"Cannot sweep command {inner!r}", command=inner)
    points = []
    for value in options["values"]:
        point: dict[str, Any] = {key: value}
        try:
            swept = _swept(config, key, value)
            summary, _ = COMMANDS[inner](swept, options, None, None)
            point["result"] = summary
        except WaldGameError as exc:
            point["error"] = exc.to_dict()
        points.append(point)
        if progress is not None:
            progress(1)
    return {"key": key, "command": inner, "points": points}, []


def document(command_name: str, config: t.RunConfig, result: dict) -> dict:
    """JSON document embedding the schema version and the resolved config."""
    return {
        "schema_version": str(wg_config.output.schema_version),
        "command": command_name,
        "config": config_to_dict(config),
        "result": result,
    }


def error_document(command_name: str, exc: WaldGameError) -> dict:
    return {
        "schema_version": str(wg_config.output.schema_version),
        "command": command_name,
        **exc.to_dict(),
    }


def dispatch(
    command_name: str,
    config: t.RunConfig,
    options: dict[str, Any] | None = None,
    progress: Callable[[int], None] | None = None,
) -> t.CommandResult:
    """Run a command and write its JSON summary and CSV tables.

    Raises:
        UnknownCommand: for names that are not registered
        WaldGameError: any failure of the underlying computation
    """
    if command_name not in COMMANDS:
        raise UnknownCommand(
            f"Unknown command {command_name!r}",
            command=command_name,
            known=sorted(COMMANDS),
        )
    out = file_utils.ensure_dir(config.out_dir)
    logger.info(f"Running {command_name} with p0 = {config.prior}")
    summary, artifacts = COMMANDS[command_name](config, options or {}, out, progress)
    target = out / f"{command_name}.json"
    artifacts.insert(
        0, file_utils.json_dump(document(command_name, config, summary), target)
    )
    for artifact in artifacts:
        logger.info(f" - Wrote {artifact}")
    return t.CommandResult(command=command_name, summary=summary, artifacts=artifacts)
