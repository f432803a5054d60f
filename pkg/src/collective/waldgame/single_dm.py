"""
Single decision maker benchmark.

A lone player learns until the belief leaves (p_und, p_bar), then takes S at
the lower boundary and R at the upper one. On the learning region the value
function solves a linear ODE whose homogeneous part is K L^{b/(b-a)} (1 - p);
value matching and smooth pasting at p_bar pin down p_bar and K, value
matching at p_und pins down p_und.
"""

from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.exceptions import NoLearningRegion
from collective.waldgame.exceptions import NotFound
from collective.waldgame.utils import default_controls
from functools import cache
from scipy import optimize

import numpy as np


def cost_threshold(params: t.ModelParams) -> float:
    """Largest flow cost for which learning is ever worthwhile."""
    g, h = params.g, params.h
    return params.b * g * h / (g + h)


@cache
def dm_cutoffs(
    params: t.ModelParams, controls: t.SolverControls | None = None
) -> t.DmSolution:
    """Free boundaries and constant of the single decision maker.

    Raises:
        NoLearningRegion: when c >= c_bar, immediate action is optimal everywhere
    """
    controls = controls or default_controls()
    a, b, c = params.a, params.b, params.c
    c_bar = cost_threshold(params)
    if c >= c_bar:
        raise NoLearningRegion(c_bar)
    exponent = b / (b - a)
    L_bar = (params.g - c / b) / (c / b)
    K = (c / b) * (b / a - 1.0) * L_bar ** (1.0 - exponent)
    slope = params.h - c / a

    def value_matching(L: float) -> float:
        return slope * L + K * L**exponent - c / b

    lower = 1e-12
    try:
        L_und = optimize.bisect(
            value_matching,
            lower,
            L_bar,
            xtol=controls.root_tol,
            maxiter=max(controls.max_iter, 200),
        )
    except ValueError:
        raise NotFound(
            "Lower boundary not bracketed",
            lower=lower,
            upper=L_bar,
            f_lower=value_matching(lower),
            f_upper=value_matching(L_bar),
        ) from None
    solution = t.DmSolution(
        p_bar=L_bar / (1.0 + L_bar),
        p_und=L_und / (1.0 + L_und),
        K=K,
        c_bar=c_bar,
        L_bar=L_bar,
        L_und=L_und,
        exponent=exponent,
    )
    logger.debug(f"Single DM cutoffs {solution}")
    return solution


def _learning_value(p, sol: t.DmSolution, params: t.ModelParams):
    a, b, c = params.a, params.b, params.c
    with np.errstate(divide="ignore", invalid="ignore"):
        L = p / (1.0 - p)
        homogeneous = sol.K * L**sol.exponent * (1.0 - p)
    return p * (params.u_H - c / a) + (1.0 - p) * (params.u_S - c / b) + homogeneous


def _learning_slope(p, sol: t.DmSolution, params: t.ModelParams):
    a, b, c = params.a, params.b, params.c
    beta = sol.exponent
    with np.errstate(divide="ignore", invalid="ignore"):
        L = p / (1.0 - p)
        homogeneous = sol.K * L ** (beta - 1.0) * (beta - (1.0 - beta) * L)
    return (params.u_H - c / a) - (params.u_S - c / b) + homogeneous


def dm_value(p: t.FloatOrArray, sol: t.DmSolution, params: t.ModelParams):
    """Value function: u_S below p_und, V^L between the boundaries, U_R above."""
    p = np.asarray(p, dtype=float)
    immediate_r = p * params.u_H + (1.0 - p) * params.u_L
    inside = (p > sol.p_und) & (p < sol.p_bar)
    learning = _learning_value(np.where(inside, p, 0.5), sol, params)
    result = np.where(
        p <= sol.p_und, params.u_S, np.where(inside, learning, immediate_r)
    )
    return float(result) if np.ndim(result) == 0 else result


def dm_value_derivative(p: t.FloatOrArray, sol: t.DmSolution, params: t.ModelParams):
    """Analytic slope of the value function, right derivative at the kink."""
    p = np.asarray(p, dtype=float)
    inside = (p >= sol.p_und) & (p < sol.p_bar)
    learning = _learning_slope(np.where(inside, p, 0.5), sol, params)
    result = np.where(
        p < sol.p_und, 0.0, np.where(inside, learning, params.u_H - params.u_L)
    )
    return float(result) if np.ndim(result) == 0 else result


def dm_policy(p: float, sol: t.DmSolution) -> t.DmAction:
    if p <= sol.p_und:
        return t.DmAction.TAKE_S
    if p >= sol.p_bar:
        return t.DmAction.TAKE_R
    return t.DmAction.LEARN


def hjb_operator(p, value, slope, params: t.ModelParams):
    """Continuation part of the decision maker HJB.

    H(p, V, V') = p a (u_H - V) + (1 - p) b (u_S - V) + V' (b - a) p (1 - p) - c
    """
    p = np.asarray(p, dtype=float)
    drift = (params.b - params.a) * p * (1.0 - p)
    return (
        p * params.a * (params.u_H - value)
        + (1.0 - p) * params.b * (params.u_S - value)
        + slope * drift
        - params.c
    )


def smooth_pasting_residuals(
    sol: t.DmSolution, params: t.ModelParams, samples: int = 100
) -> t.PastingResiduals:
    """Boundary residuals and viscosity-style checks of the solution."""
    p_und, p_bar = sol.p_und, sol.p_bar
    v_upper = float(_learning_value(p_bar, sol, params))
    u_upper = p_bar * params.u_H + (1.0 - p_bar) * params.u_L
    s_upper = float(_learning_slope(p_bar, sol, params))
    v_lower = float(_learning_value(p_und, sol, params))

    step = 1e-6
    inner = np.linspace(p_und, p_bar, samples + 2)[1:-1]
    fd = (
        _learning_value(inner + step, sol, params)
        - _learning_value(inner - step, sol, params)
    ) / (2.0 * step)
    analytic = _learning_slope(inner, sol, params)
    learning_ode = hjb_operator(
        inner, _learning_value(inner, sol, params), analytic, params
    )

    upper = np.linspace(p_bar, 1.0, samples)
    upper_values = upper * params.u_H + (1.0 - upper) * params.u_L
    upper_h = hjb_operator(upper, upper_values, params.u_H - params.u_L, params)

    lower = np.linspace(0.0, p_und, samples, endpoint=False)
    lower_h = hjb_operator(lower, params.u_S, 0.0, params)

    kink_slope = float(_learning_slope(p_und, sol, params))
    test_slopes = np.linspace(0.0, kink_slope, samples)
    kink_h = hjb_operator(p_und, params.u_S, test_slopes, params)

    grid = np.linspace(p_und, p_bar, 2001)
    second = np.diff(_learning_value(grid, sol, params), 2)

    return t.PastingResiduals(
        value_upper=abs(v_upper - u_upper),
        slope_upper=abs(s_upper - (params.u_H - params.u_L)),
        value_lower=abs(v_lower - params.u_S),
        slope_fd=float(np.max(np.abs(fd - analytic))),
        learning_ode=float(np.max(np.abs(learning_ode))),
        upper_region=float(np.max(upper_h)),
        lower_region=float(np.max(lower_h)),
        kink=float(np.max(kink_h)),
        convexity=float(np.min(second)),
    )
