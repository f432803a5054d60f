"""
Intense competition, observable actions and N-player variants.

When a second R taker in state H does worse than the safe payoff, players
learn up to a common deadline T_ps and take S if nothing was revealed by then.
When stopping actions are observable, players mimic an observed S and
randomize R with a hazard that keeps the rival indifferent.
"""

from collections.abc import Iterable
from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.cutoffs import learning_value
from collective.waldgame.cutoffs import n_player_cutoff
from collective.waldgame.cutoffs import p_nr
from collective.waldgame.cutoffs import psi
from collective.waldgame.cutoffs import static_cutoffs
from collective.waldgame.cutoffs import t_ps
from collective.waldgame.exceptions import HypothesisViolation
from collective.waldgame.exceptions import OutOfRange
from collective.waldgame.exceptions import WaldGameError
from collective.waldgame.model_core import belief_at
from collective.waldgame.model_core import likelihood_at
from collective.waldgame.ode_solver import initial_slope
from collective.waldgame.ode_solver import solve_master_ode
from collective.waldgame.utils import default_controls
from typing import Any

import numpy as np


def competition_value(time: t.FloatOrArray, p0: float, params: t.ModelParams):
    """Value of learning until T_ps and then taking S, for a rival doing the same.

    Raises:
        RegimeMismatch: outside the intense regime
    """
    deadline = t_ps(params)
    time = np.asarray(time, dtype=float)
    learning = learning_value(
        np.minimum(time, deadline), p0, deadline, params, target=params.u_S
    )
    result = np.where(time > deadline, params.u_S, learning)
    return float(result) if np.ndim(result) == 0 else result


def competition_r_payoff(time: t.FloatOrArray, p0: float, params: t.ModelParams):
    """Payoff of R at ``time`` when the rival learns until T_ps."""
    time = np.asarray(time, dtype=float)
    p = belief_at(p0, time, params)
    taken = 1.0 - np.exp(-params.a * time)
    result = p * (params.u_H - taken * params.dbar_H) + (1.0 - p) * params.u_L
    return float(result) if np.ndim(result) == 0 else result


def competition_solution(
    p0: float,
    params: t.ModelParams,
    points: int = 201,
    controls: t.SolverControls | None = None,
) -> t.CompetitionSolution:
    """Deadline, prior bound and value curves of the pure learning equilibrium."""
    deadline = t_ps(params)
    grid = np.linspace(0.0, deadline, points)
    return t.CompetitionSolution(
        T_ps=deadline,
        p_nr=p_nr(params, controls),
        prior=p0,
        t=grid,
        W_L=competition_value(grid, p0, params),
        psi=psi(grid, p0, params),
        U_R=competition_r_payoff(grid, p0, params),
    )


def competition_equilibrium(
    p0: float, params: t.ModelParams, controls: t.SolverControls | None = None
) -> t.EquilibriumProfile:
    """Symmetric profile: learn until T_ps, then take S.

    Raises:
        OutOfRange: when p0 lies outside (p_nr, p_tilde)
    """
    controls = controls or default_controls()
    deadline = t_ps(params)
    lower = p_nr(params, controls)
    upper = static_cutoffs(params).p_tilde
    if not lower < p0 < upper:
        raise OutOfRange(
            f"Prior {p0!r} outside the pure learning range",
            value=p0,
            lower=lower,
            upper=upper,
        )
    return t.EquilibriumProfile(
        regime=t.Regime.PURE_LEARNING,
        prior=p0,
        strategy=t.MixedStrategy(deadline=deadline, terminal_action=t.Action.S),
        constants={"T_ps": deadline, "p_nr": lower, "p_tilde": upper},
    )


def observable_belief(p0: t.FloatOrArray, time: t.FloatOrArray, params: t.ModelParams):
    """Belief after no signal and no rival action: the drift doubles."""
    return belief_at(p0, 2.0 * np.asarray(time, dtype=float), params)


def _require_equal_penalties(params: t.ModelParams):
    if params.dbar_H != params.dbar_L:
        raise HypothesisViolation(
            "The mimicking strategy needs equal second-taker penalties",
            dbar_H=params.dbar_H,
            dbar_L=params.dbar_L,
        )


def mrss_hazard(time: t.FloatOrArray, p0: float, params: t.ModelParams):
    """Unclipped R hazard keeping the rival indifferent under observable actions.

    Raises:
        HypothesisViolation: when dbar_H differs from dbar_L
    """
    _require_equal_penalties(params)
    a, b, c = params.a, params.b, params.c
    time = np.asarray(time, dtype=float)
    L = likelihood_at(p0, 2.0 * time, params)
    p = L / (1.0 + L)
    spread = params.dbar_H - params.dbar_L
    numerator = b * params.g - c - L * (a * (p * spread + params.dbar_L) + c)
    result = numerator / (L * params.dbar_H + params.dbar_L)
    return float(result) if np.ndim(result) == 0 else result


def mrss_boundary(p0: float, params: t.ModelParams) -> float:
    """Time at which the hazard reaches zero, zero when it starts non-positive."""
    _require_equal_penalties(params)
    a, b, c = params.a, params.b, params.c
    L_zero = (b * params.g - c) / (a * params.dbar_H + c)
    L0 = p0 / (1.0 - p0)
    if L_zero <= L0:
        return 0.0
    return float(np.log(L_zero / L0) / (2.0 * (b - a)))


def mrss_spec(
    p0: float, params: t.ModelParams, grid: t.FloatArray | None = None
) -> t.MrssSpec:
    """Hazard clipped at zero past its boundary, with feasibility flags."""
    boundary = mrss_boundary(p0, params)
    if grid is None:
        grid = np.linspace(0.0, max(2.0 * boundary, 1.0), 401)
    raw = mrss_hazard(grid, p0, params)
    feasible = raw > 0.0
    cutoffs = static_cutoffs(params)
    flags = {
        "equal_penalties": True,
        "prior_in_range": bool(cutoffs.p_L < p0 < cutoffs.p_tilde),
        "clipped": bool(not feasible.all()),
    }
    if flags["clipped"]:
        logger.warning(f"MRSS hazard clipped past t = {boundary}")
    return t.MrssSpec(
        prior=p0,
        t=np.asarray(grid, dtype=float),
        hazard=np.clip(raw, 0.0, None),
        belief=observable_belief(p0, grid, params),
        feasible=feasible,
        boundary=boundary,
        flags=flags,
    )


def n_player_report(
    p0: float,
    params: t.ModelParams,
    Ns: Iterable[int] = (2, 3, 4, 5),
    controls: t.SolverControls | None = None,
) -> list[dict[str, Any]]:
    """Cutoff, initial rate and completion time of random stopping per N."""
    controls = controls or default_controls()
    rows = []
    for N in Ns:
        row: dict[str, Any] = {
            "N": N,
            "p_tilde_N": n_player_cutoff(N, params),
            "initial_slope": initial_slope(p0, params, N=N),
            "T_bar": None,
            "reason": None,
        }
        try:
            row["T_bar"] = solve_master_ode(p0, params, N=N, controls=controls).T_bar
        except WaldGameError as exc:
            row["reason"] = str(exc)
        rows.append(row)
    return rows
