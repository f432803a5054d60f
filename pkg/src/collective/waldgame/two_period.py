"""
Exact enumeration of the two-period example.

At time 0 a player takes R, takes S, or pays c for one signal; a revealing
signal arrives with probability a in state H and b in state L. At time 1 every
remaining player acts. The rates a and b of the model parameters are read as
these per-period probabilities.

Tie rule: two R actions at the same time clash and both get u - dund. A
learning opponent takes R on a breakthrough, S on a breakdown and, without a
signal, the immediate action that is better at its posterior when it would be
the first taker.
"""

from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.exceptions import InvalidParameters
from functools import cache
from scipy import optimize

import numpy as np


_STATES = ("H", "L")


def _check_probabilities(params: t.ModelParams):
    for name in ("a", "b"):
        value = getattr(params, name)
        if not 0.0 < value < 1.0:
            raise InvalidParameters(
                f"Two-period signal probability {name}={value!r} outside (0, 1)",
                constraint=f"0 < {name} < 1",
            )


def two_period_posterior(p0: float, params: t.ModelParams) -> float:
    """Belief at time 1 after a signal was bought and none arrived."""
    _check_probabilities(params)
    odds = (1.0 - params.a) / (1.0 - params.b) * p0 / (1.0 - p0)
    return odds / (1.0 + odds)


def _arrival(state: str, params: t.ModelParams) -> float:
    return params.a if state == "H" else params.b


def _prize(state: str, params: t.ModelParams) -> tuple[float, float, float]:
    if state == "H":
        return params.u_H, params.dbar_H, params.dund_H
    return params.u_L, params.dbar_L, params.dund_L


def _opponent_moves(
    state: str, p0: float, opponent: t.Opponent, params: t.ModelParams
) -> list[tuple[float, str | None, t.Action | None]]:
    """Opponent signal outcomes in ``state`` with their time-1 action.

    The action is None when the opponent already acted at time 0.
    """
    if opponent is not t.Opponent.LEARN:
        return [(1.0, None, None)]
    arrival = _arrival(state, params)
    posterior = two_period_posterior(p0, params)
    blind = posterior * params.u_H + (1.0 - posterior) * params.u_L
    blind_action = t.Action.R if blind >= params.u_S else t.Action.S
    revealed = t.Action.R if state == "H" else t.Action.S
    return [(arrival, state, revealed), (1.0 - arrival, None, blind_action)]


def _r_at_one(
    state: str, opponent: t.Opponent, opponent_action: t.Action | None, params
) -> float:
    """Payoff of R at time 1 given what the opponent does."""
    prize, second, clash = _prize(state, params)
    if opponent is t.Opponent.R0:
        return prize - second
    if opponent_action is t.Action.R:
        return prize - clash
    return prize


def _own_outcomes(state: str, params: t.ModelParams) -> list[tuple[float, str | None]]:
    arrival = _arrival(state, params)
    return [(arrival, state), (1.0 - arrival, None)]


def _enumerate(
    p0: float, opponent: t.Opponent, params: t.ModelParams
) -> tuple[float, tuple[t.Branch, ...]]:
    """Learning payoff and its leaves, with the time-1 choice per own signal."""
    priors = {"H": p0, "L": 1.0 - p0}

    # expected R payoff and probability per own information set
    weight: dict[str | None, float] = {}
    r_value: dict[str | None, float] = {}
    for state in _STATES:
        for own_probability, own in _own_outcomes(state, params):
            for opp_probability, _, opp_action in _opponent_moves(
                state, p0, opponent, params
            ):
                mass = priors[state] * own_probability * opp_probability
                weight[own] = weight.get(own, 0.0) + mass
                r_value[own] = r_value.get(own, 0.0) + mass * _r_at_one(
                    state, opponent, opp_action, params
                )
    takes_R = {
        own: mass > 0.0 and r_value[own] / mass >= params.u_S
        for own, mass in weight.items()
    }

    branches = []
    total = 0.0
    for state in _STATES:
        for own_probability, own in _own_outcomes(state, params):
            for opp_probability, opp_signal, opp_action in _opponent_moves(
                state, p0, opponent, params
            ):
                probability = priors[state] * own_probability * opp_probability
                if takes_R[own]:
                    payoff = _r_at_one(state, opponent, opp_action, params)
                else:
                    payoff = params.u_S
                payoff -= params.c
                total += probability * payoff
                branches.append(
                    t.Branch(
                        probability=probability,
                        state=state,
                        own_signal=own,
                        opponent_signal=opp_signal,
                        payoff=payoff,
                    )
                )
    return total, tuple(branches)


def _immediate_r(p0: float, opponent: t.Opponent, params: t.ModelParams) -> float:
    if opponent is t.Opponent.R0:
        return p0 * (params.u_H - params.dund_H) + (1.0 - p0) * (
            params.u_L - params.dund_L
        )
    return p0 * params.u_H + (1.0 - p0) * params.u_L


def _payoffs(p0: float, opponent: t.Opponent, params: t.ModelParams):
    _check_probabilities(params)
    pay_learn, branches = _enumerate(p0, opponent, params)
    return t.TwoPeriodPayoffs(
        prior=p0,
        opponent=opponent,
        pay_R0=_immediate_r(p0, opponent, params),
        pay_S0=params.u_S,
        pay_learn=pay_learn,
        branches=branches,
    )


def two_period_payoffs(
    p0: float, opponent: t.Opponent | str, params: t.ModelParams
) -> t.TwoPeriodPayoffs:
    """Payoffs of R now, S now and learning against one opponent behaviour.

    Raises:
        InvalidParameters: when a or b is not a probability
    """
    opponent = t.Opponent(opponent)
    payoffs = _payoffs(p0, opponent, params)
    payoffs.crossings = two_period_regions(opponent, params)
    return payoffs


def _learning_gain(p0: float, opponent: t.Opponent, params: t.ModelParams) -> float:
    payoffs = _payoffs(p0, opponent, params)
    return payoffs.pay_learn - max(payoffs.pay_R0, payoffs.pay_S0)


def two_period_regions(
    opponent: t.Opponent | str,
    params: t.ModelParams,
    grid: t.FloatArray | None = None,
) -> tuple[float, float] | None:
    """Interval of priors where learning beats both immediate actions.

    Endpoints are refined by bisection between neighbouring grid nodes; None
    when learning never strictly wins on the grid.
    """
    opponent = t.Opponent(opponent)
    if grid is None:
        return _default_regions(opponent, params)
    return _scan_regions(opponent, params, grid)


@cache
def _default_regions(
    opponent: t.Opponent, params: t.ModelParams
) -> tuple[float, float] | None:
    return _scan_regions(opponent, params, np.linspace(1e-6, 1.0 - 1e-6, 2001))


def _scan_regions(
    opponent: t.Opponent, params: t.ModelParams, grid: t.FloatArray
) -> tuple[float, float] | None:
    gains = np.array([_learning_gain(p, opponent, params) for p in grid])
    winning = np.flatnonzero(gains > 0.0)
    if winning.size == 0:
        logger.debug(f"No learning region against {opponent.value}")
        return None

    def gain(p: float) -> float:
        return _learning_gain(p, opponent, params)

    first, last = winning[0], winning[-1]
    lower = float(grid[first])
    if first > 0:
        lower = optimize.bisect(gain, grid[first - 1], grid[first], xtol=1e-13)
    upper = float(grid[last])
    if last < grid.size - 1:
        upper = optimize.bisect(gain, grid[last], grid[last + 1], xtol=1e-13)
    return float(lower), float(upper)


def two_period_curves(
    opponent: t.Opponent | str,
    params: t.ModelParams,
    grid: t.FloatArray | None = None,
) -> list[dict[str, float]]:
    """Payoff curves over a prior grid, one CSV row per prior."""
    opponent = t.Opponent(opponent)
    if grid is None:
        grid = np.linspace(0.0, 1.0, 201)[1:-1]
    rows = []
    for p0 in grid:
        payoffs = _payoffs(float(p0), opponent, params)
        rows.append({
            "p0": float(p0),
            "pay_R0": payoffs.pay_R0,
            "pay_S0": payoffs.pay_S0,
            "pay_learn": payoffs.pay_learn,
        })
    return rows
