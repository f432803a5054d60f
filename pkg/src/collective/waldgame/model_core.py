"""
Parameters, belief dynamics and the stopping payoff primitive.

Beliefs are handled through the likelihood ratio, which evolves in closed form
absent signals: L_t = L_0 exp((b - a) t). Probabilities are computed in a form
that keeps p = 1 and p = 0 exact.
"""

from collections.abc import Mapping
from collective.waldgame import _types as t
from collective.waldgame.exceptions import InvalidParameters
from typing import Any

import numpy as np


_FIELDS = ("u_H", "u_L", "dbar_H", "dbar_L", "dund_H", "dund_L", "a", "b", "c")


def _expand(raw: Mapping[str, Any]) -> dict[str, Any]:
    """Fill per-state penalties from the shared ``dbar`` / ``dund`` shorthands."""
    data = dict(raw)
    for prefix in ("dbar", "dund"):
        if prefix in data:
            shared = data.pop(prefix)
            data.setdefault(f"{prefix}_H", shared)
            data.setdefault(f"{prefix}_L", shared)
    return data


def _assumption_regime(
    u_H: float, u_L: float, dbar_H: float, u_S: float
) -> t.AssumptionRegime:
    second_H = u_H - dbar_H
    gentle = u_L < u_S < second_H
    intense = u_L < second_H < u_S < u_H
    if gentle == intense:
        raise InvalidParameters(
            "Neither payoff regime holds: need u_L < u_S < u_H - dbar_H "
            "or u_L < u_H - dbar_H < u_S < u_H",
            constraint="assumption regime",
        )
    return t.AssumptionRegime.GENTLE if gentle else t.AssumptionRegime.INTENSE


def validate_params(raw: Mapping[str, Any] | t.ModelParams) -> t.ModelParams:
    """Validate a parameter record and tag it with its assumption regime.

    Args:
        raw: Mapping with the model keys, or an existing ModelParams

    Returns:
        Validated, regime-tagged ModelParams

    Raises:
        InvalidParameters: naming the violated constraint
    """
    if isinstance(raw, t.ModelParams):
        raw = raw.to_dict()
    data = _expand(raw)
    missing = [name for name in _FIELDS if name not in data]
    if missing:
        raise InvalidParameters(
            f"Missing parameters: {', '.join(missing)}", constraint="missing"
        )
    values = {name: float(data[name]) for name in _FIELDS}
    u_S = float(data.get("u_S", 0.0))
    N = int(data.get("N", 2))
    a, b, c = values["a"], values["b"], values["c"]
    if not b > a > 0:
        raise InvalidParameters(
            f"Signal rates must satisfy b > a > 0 (a={a!r}, b={b!r})",
            constraint="b > a > 0",
        )
    if not c > 0:
        raise InvalidParameters(f"Cost must be positive (c={c!r})", constraint="c > 0")
    if N < 2:
        raise InvalidParameters(
            f"Need at least two players (N={N!r})", constraint="N >= 2"
        )
    for state in ("H", "L"):
        dbar = values[f"dbar_{state}"]
        dund = values[f"dund_{state}"]
        if not dbar > dund > 0:
            raise InvalidParameters(
                f"Penalty ordering violated: need dbar_{state} > dund_{state} > 0 "
                f"(dbar_{state}={dbar!r}, dund_{state}={dund!r})",
                constraint=f"dbar_{state} > dund_{state} > 0",
            )
    regime = _assumption_regime(values["u_H"], values["u_L"], values["dbar_H"], u_S)
    return t.ModelParams(**values, u_S=u_S, N=N, regime=regime)


def likelihood_at(p0: t.FloatOrArray, time: t.FloatOrArray, params: t.ModelParams):
    """Likelihood ratio after ``time`` without signals, infinite at p0 = 1."""
    p0 = np.asarray(p0, dtype=float)
    with np.errstate(divide="ignore"):
        L0 = np.where(p0 < 1.0, p0 / np.where(p0 < 1.0, 1.0 - p0, 1.0), np.inf)
    result = L0 * np.exp((params.b - params.a) * np.asarray(time, dtype=float))
    return float(result) if np.ndim(result) == 0 else result


def belief_at(p0: t.FloatOrArray, time: t.FloatOrArray, params: t.ModelParams):
    """Belief in state H after ``time`` without a revealing signal.

    Args:
        p0: Prior probability of state H
        time: Elapsed time, nonnegative
        params: Model parameters

    Returns:
        p_t, nondecreasing in time, with 0 and 1 fixed
    """
    p0 = np.asarray(p0, dtype=float)
    drift = np.exp(-(params.b - params.a) * np.asarray(time, dtype=float))
    with np.errstate(invalid="ignore", divide="ignore"):
        result = p0 / (p0 + (1.0 - p0) * drift)
    result = np.where(p0 == 0.0, 0.0, result)
    return float(result) if np.ndim(result) == 0 else result


def no_signal_prob(
    p0: t.FloatOrArray, time: t.FloatOrArray, params: t.ModelParams
) -> t.SurvivalProb | t.FloatArray:
    """Probability of no revealing signal up to ``time``."""
    time = np.asarray(time, dtype=float)
    result = p0 * np.exp(-params.a * time) + (1.0 - np.asarray(p0)) * np.exp(
        -params.b * time
    )
    return float(result) if np.ndim(result) == 0 else result


def r_payoff(
    p: t.FloatOrArray,
    F_H: t.FloatOrArray,
    F_L: t.FloatOrArray,
    params: t.ModelParams,
    atom_H: t.FloatOrArray = 0.0,
    atom_L: t.FloatOrArray = 0.0,
):
    """Expected payoff of taking R now.

    ``F_H`` and ``F_L`` are the probabilities that an opponent already took R
    in each state; ``atom_H`` and ``atom_L`` are opponent masses taking R at
    this very instant, which are charged the simultaneous penalty.
    """
    p = np.asarray(p, dtype=float)
    value_H = (
        params.u_H
        - np.asarray(F_H) * params.dbar_H
        - np.asarray(atom_H) * params.dund_H
    )
    value_L = (
        params.u_L
        - np.asarray(F_L) * params.dbar_L
        - np.asarray(atom_L) * params.dund_L
    )
    result = p * value_H + (1.0 - p) * value_L
    return float(result) if np.ndim(result) == 0 else result
