"""
Prior cutoffs and auxiliary times of the equilibrium regimes.

Static cutoffs are closed forms in the likelihood ratio. Times defined as the
first crossing of two curves are located by a forward scan followed by a
bisection. Fixed points in the prior (p*, p^NR) and in the time-zero S mass
(beta) are bracketed and bisected; a failed bracket is reported, never guessed.
"""

from collections.abc import Callable
from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.exceptions import Infeasible
from collective.waldgame.exceptions import NoPositiveWindow
from collective.waldgame.exceptions import NotFound
from collective.waldgame.exceptions import OutOfRange
from collective.waldgame.exceptions import RegimeMismatch
from collective.waldgame.exceptions import UndefinedCutoff
from collective.waldgame.exceptions import WaldGameError
from collective.waldgame.model_core import belief_at
from collective.waldgame.model_core import likelihood_at
from collective.waldgame.single_dm import cost_threshold
from collective.waldgame.single_dm import dm_cutoffs
from collective.waldgame.utils import default_controls
from scipy import optimize
from typing import Any

import numpy as np


_EDGE = 1e-12
_PRIOR_FLOOR = 1e-6


def _probability(L: float) -> float:
    return t.Belief.from_likelihood(L).p


def _odds(p0: float) -> float:
    return t.Belief.from_probability(p0).L


def _bisect(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    controls: t.SolverControls,
) -> float:
    return optimize.bisect(
        func,
        lower,
        upper,
        xtol=controls.bisect_tol,
        maxiter=controls.max_iter,
    )


def n_player_cutoff(N: int, params: t.ModelParams) -> float:
    """Largest prior at which random stopping can start at time zero with N players.

    Raises:
        UndefinedCutoff: when c >= b g, learning never pays against R takers
    """
    a, b, c = params.a, params.b, params.c
    gain = b * params.g - c
    if gain <= 0:
        raise UndefinedCutoff(
            "p_tilde", f"c = {c!r} is not below b g = {b * params.g!r}"
        )
    L = gain / ((N - 1) * a * params.dbar_H + c)
    return _probability(L)


def p_m(params: t.ModelParams) -> float:
    """Prior at which a simultaneous time-zero R breaks even with S.

    Raises:
        UndefinedCutoff: when h <= dund_H, a clash in state H never beats S
    """
    denominator = params.h - params.dund_H
    if denominator <= 0:
        raise UndefinedCutoff(
            "p_M", f"h = {params.h!r} is not above dund_H = {params.dund_H!r}"
        )
    return _probability((params.g + params.dund_L) / denominator)


def static_cutoffs(params: t.ModelParams) -> t.StaticCutoffs:
    """The prior-independent cutoffs p^L, p^M and p_tilde.

    p^M is None where it is undefined, see ``p_m``.
    """
    try:
        p_M = p_m(params)
    except UndefinedCutoff as exc:
        logger.debug(str(exc))
        p_M = None
    return t.StaticCutoffs(
        p_L=_probability(params.g / params.h),
        p_M=p_M,
        p_tilde=n_player_cutoff(2, params),
    )


def immediate_mix_prob(p0: float, params: t.ModelParams) -> float:
    """Opponent time-zero R probability that makes R and S indifferent at time zero.

    Raises:
        OutOfRange: when p0 lies outside [p^L, p^M]
    """
    cutoffs = static_cutoffs(params)
    upper = 1.0 if cutoffs.p_M is None else cutoffs.p_M
    if not cutoffs.p_L - _EDGE <= p0 <= upper + _EDGE:
        raise OutOfRange(
            f"Prior {p0!r} outside [p^L, p^M]",
            value=p0,
            lower=cutoffs.p_L,
            upper=upper,
        )
    L0 = _odds(p0)
    q = (L0 * params.h - params.g) / (L0 * params.dund_H + params.dund_L)
    return float(np.clip(q, 0.0, 1.0))


def _first_crossing(
    func: Callable[[Any], Any],
    controls: t.SolverControls,
    name: str,
) -> float:
    """First time on the scan grid where ``func`` turns nonnegative, bisected."""
    grid = np.arange(0.0, controls.horizon + controls.scan_step, controls.scan_step)
    values = func(grid)
    hits = np.flatnonzero(values >= 0.0)
    if hits.size == 0:
        raise Infeasible(
            f"{name}: no crossing before the horizon",
            horizon=controls.horizon,
            last_value=float(values[-1]),
        )
    index = int(hits[0])
    if index == 0:
        return 0.0
    return _bisect(
        lambda x: float(func(np.asarray(x))),
        float(grid[index - 1]),
        float(grid[index]),
        controls,
    )


def t_r(
    p0: float,
    params: t.ModelParams,
    beta: float = 0.0,
    controls: t.SolverControls | None = None,
) -> float:
    """Latest start of random stopping, or of mixed learning when ``beta`` > 0.

    Raises:
        NoPositiveWindow: when p0 > p_tilde at beta = 0
        UndefinedCutoff: when c >= b g
        Infeasible: when no crossing occurs before the horizon
    """
    controls = controls or default_controls()
    a, b, c = params.a, params.b, params.c
    gain = b * params.g - c
    if gain <= 0:
        raise UndefinedCutoff("T_r", f"c = {c!r} is not below b g")
    L0 = _odds(p0)
    weight = (1.0 - beta) * a * params.dbar_H

    def excess(time):
        return L0 * np.exp((b - a) * time) * (c + weight * np.exp(-a * time)) - gain

    at_zero = float(excess(0.0))
    tiny = _EDGE * max(1.0, gain)
    if beta == 0.0 and at_zero > tiny:
        raise NoPositiveWindow(
            f"Prior {p0!r} is above p_tilde, no random stopping start exists",
            prior=p0,
            p_tilde=n_player_cutoff(2, params),
        )
    if at_zero >= -tiny:
        return 0.0
    return _first_crossing(excess, controls, "T_r")


def t_l(
    p0: float, params: t.ModelParams, controls: t.SolverControls | None = None
) -> float:
    """Earliest start of random stopping; zero at or above p^L.

    Raises:
        Infeasible: when the second-taker prize reaches the safe payoff first
    """
    controls = controls or default_controls()
    if p0 >= static_cutoffs(params).p_L:
        return 0.0
    a = params.a
    L0 = _odds(p0)

    def denominator(time):
        return params.h - (1.0 - np.exp(-a * time)) * params.dbar_H

    def excess(time):
        return L0 * np.exp((params.b - a) * time) * denominator(time) - params.g

    grid = np.arange(0.0, controls.horizon + controls.scan_step, controls.scan_step)
    poles = np.flatnonzero(denominator(grid) <= 0.0)
    hits = np.flatnonzero(excess(grid) >= 0.0)
    if poles.size and (hits.size == 0 or poles[0] <= hits[0]):
        raise Infeasible(
            "T_l: the R payoff after an opponent R falls below the safe payoff "
            "before the crossing",
            prior=p0,
            pole=float(grid[poles[0]]),
        )
    return _first_crossing(excess, controls, "T_l")


def continuation_constant(
    T: float,
    p0: float,
    params: t.ModelParams,
    beta: float = 0.0,
    target: float | None = None,
) -> float:
    """Constant K that makes the learning value hit ``target`` at time T.

    The default target is the payoff of R at T once the opponent randomizes
    from T on; with it, K equals ``j2(T)``.
    """
    a, b, c = params.a, params.b, params.c
    p_T = belief_at(p0, T, params)
    L_T = likelihood_at(p0, T, params)
    decay = np.exp(-a * T)
    share = (1.0 - beta) * params.dbar_H
    if target is None:
        target = p_T * (params.u_H - (1.0 - decay) * share) + (1.0 - p_T) * params.u_L
    bracket = (
        target / p_T
        - (params.u_H - share - c / a)
        - 0.5 * share * decay
        - (params.u_S - c / b) / L_T
    )
    return float(decay * bracket)


def j2(T: float, p0: float, params: t.ModelParams, beta: float = 0.0) -> float:
    """Closed form of the default continuation constant."""
    a, b, c = params.a, params.b, params.c
    decay = np.exp(-a * T)
    L_T = likelihood_at(p0, T, params)
    share = (1.0 - beta) * params.dbar_H
    return float(
        decay * (0.5 * share * decay + c / a - (params.g - c / b) / L_T)
    )


def psi(time: t.FloatOrArray, p0: float, params: t.ModelParams):
    """Monotonicity check of the competition learning value."""
    a, b, c = params.a, params.b, params.c
    time = np.asarray(time, dtype=float)
    decay = np.exp(-a * time)
    L_t = likelihood_at(p0, time, params)
    result = decay * (0.5 * params.dbar_H * decay + c / a - (params.g - c / b) / L_t)
    return float(result) if np.ndim(result) == 0 else result


def learning_value(
    time: t.FloatOrArray,
    p0: float,
    T: float,
    params: t.ModelParams,
    beta: float = 0.0,
    target: float | None = None,
):
    """Value at ``time`` of learning until T and then collecting ``target``.

    The opponent is assumed to learn alongside; ``beta`` is the mass that took S
    at time zero.
    """
    a, b, c = params.a, params.b, params.c
    K = continuation_constant(T, p0, params, beta=beta, target=target)
    time = np.asarray(time, dtype=float)
    p_t = belief_at(p0, time, params)
    share = (1.0 - beta) * params.dbar_H
    result = (
        p_t * (params.u_H - share - c / a + 0.5 * share * np.exp(-a * time))
        + (1.0 - p_t) * (params.u_S - c / b)
        + p_t * np.exp(a * time) * K
    )
    return float(result) if np.ndim(result) == 0 else result


def _p_star_odds(
    T_hat: float,
    p0: float,
    params: t.ModelParams,
    beta: float = 0.0,
    target: float | None = None,
) -> float | None:
    a, b, c = params.a, params.b, params.c
    K = continuation_constant(T_hat, p0, params, beta=beta, target=target)
    denominator = params.u_H - 0.5 * (1.0 - beta) * params.dbar_H - c / a
    denominator += K - params.u_S
    if denominator <= 0:
        return None
    return (c / b) / denominator


def p_star_of_T(
    T_hat: float, p0: float, params: t.ModelParams, beta: float = 0.0
) -> float:
    """Prior at which learning until T_hat breaks even with taking S now.

    Raises:
        UndefinedCutoff: when the denominator is not positive
    """
    L = _p_star_odds(T_hat, p0, params, beta=beta)
    if L is None:
        raise UndefinedCutoff("p_star", f"nonpositive denominator at T_hat = {T_hat!r}")
    return _probability(L)


def underline_p_star(
    p0: float, params: t.ModelParams, controls: t.SolverControls | None = None
) -> float:
    """p*(T_r(p0)), decreasing in the prior."""
    return p_star_of_T(t_r(p0, params, controls=controls), p0, params)


def fixed_point_pstar(
    params: t.ModelParams, controls: t.SolverControls | None = None
) -> float:
    """Prior p* with p* = underline_p_star(p*).

    Raises:
        NotFound: when the bracket below min(p^L, p_tilde) holds no sign change
    """
    controls = controls or default_controls()
    cutoffs = static_cutoffs(params)
    upper = min(cutoffs.p_L, cutoffs.p_tilde) - 1e-9
    lower = _PRIOR_FLOOR

    def gap(p0: float) -> float:
        return p0 - underline_p_star(p0, params, controls)

    logger.debug(f"Fixed point p* on ({lower}, {upper})")
    try:
        return _bisect(gap, lower, upper, controls)
    except ValueError:
        raise NotFound(
            "p*: no sign change of p0 - underline_p_star(p0)",
            lower=lower,
            upper=upper,
            f_lower=gap(lower),
            f_upper=gap(upper),
        ) from None


def _beta_map(
    beta: float, p0: float, params: t.ModelParams, controls: t.SolverControls
) -> tuple[float, float]:
    """Likelihood ratio implied by beta and the window end it used."""
    T_beta = t_r(p0, params, beta=beta, controls=controls)
    L = _p_star_odds(T_beta, p0, params, beta=beta)
    return (np.inf if L is None else L), T_beta


def beta_residual(
    beta: float,
    p0: float,
    params: t.ModelParams,
    controls: t.SolverControls | None = None,
) -> float:
    """L_0 minus the likelihood ratio the defining relation implies at beta."""
    controls = controls or default_controls()
    L, _ = _beta_map(beta, p0, params, controls)
    return _odds(p0) - L


def beta_mixed_learning(
    p0: float, params: t.ModelParams, controls: t.SolverControls | None = None
) -> float:
    """Time-zero S mass of the mixed learning strategy.

    Raises:
        Infeasible: when the endpoints beta = 0 and beta = 1 do not bracket a root
    """
    controls = controls or default_controls()

    def gap(beta: float) -> float:
        L, _ = _beta_map(beta, p0, params, controls)
        return p0 - (1.0 if np.isinf(L) else _probability(L))

    try:
        beta = _bisect(gap, 0.0, 1.0, controls)
    except (ValueError, NoPositiveWindow):
        raise Infeasible(
            f"No mixing weight solves the mixed learning condition at p0 = {p0!r}",
            prior=p0,
            at_zero=_safe(gap, 0.0),
            at_one=_safe(gap, 1.0),
        ) from None
    logger.debug(f"Mixed learning beta {beta} at p0 = {p0}")
    return beta


def _safe(func: Callable[[float], float], x: float) -> float | None:
    try:
        return float(func(x))
    except WaldGameError:
        return None


def randomization_window(
    p0: float, params: t.ModelParams, controls: t.SolverControls | None = None
) -> t.RandomizationWindow:
    """Admissible start times [T_l, T_r] of random stopping.

    Raises:
        Infeasible: when T_l exceeds T_r
    """
    controls = controls or default_controls()
    window = t.RandomizationWindow(
        T_l=t_l(p0, params, controls), T_r=t_r(p0, params, controls=controls)
    )
    if window.T_l > window.T_r:
        raise Infeasible(
            f"Empty randomization window at p0 = {p0!r}",
            T_l=window.T_l,
            T_r=window.T_r,
        )
    return window


def t_ps(params: t.ModelParams) -> float:
    """Deadline after which a learner takes S in the intense regime.

    Raises:
        RegimeMismatch: outside the intense regime
    """
    if params.regime is not t.AssumptionRegime.INTENSE:
        raise RegimeMismatch(
            "T_ps is only defined when the second R taker in state H "
            "is worse off than the safe payoff",
            regime=str(params.regime),
        )
    dbar = params.dbar_H
    return float(np.log(dbar / (dbar - params.h)) / params.a)


def _p_nr_map(p0: float, T: float, params: t.ModelParams) -> float:
    L = _p_star_odds(T, p0, params, target=params.u_S)
    return 1.0 if L is None else _probability(L)


def p_nr(params: t.ModelParams, controls: t.SolverControls | None = None) -> float:
    """Lower end of the prior range of the pure learning equilibrium.

    Raises:
        RegimeMismatch: outside the intense regime
        NotFound: when the bracket holds no fixed point
    """
    controls = controls or default_controls()
    T = t_ps(params)
    lower, upper = _PRIOR_FLOOR, 1.0 - _PRIOR_FLOOR

    def gap(p0: float) -> float:
        return p0 - _p_nr_map(p0, T, params)

    try:
        return _bisect(gap, lower, upper, controls)
    except ValueError:
        raise NotFound(
            "p^NR: no sign change in the prior bracket",
            lower=lower,
            upper=upper,
            f_lower=gap(lower),
            f_upper=gap(upper),
        ) from None


def p_nr_residual(p0: float, params: t.ModelParams) -> float:
    return p0 - _p_nr_map(p0, t_ps(params), params)


def cutoff_table(
    params: t.ModelParams,
    prior: float | None = None,
    controls: t.SolverControls | None = None,
) -> dict[str, Any]:
    """Every cutoff defined for ``params``; undefined ones map to None.

    The reasons for undefined entries are collected under ``reasons``.
    """
    controls = controls or default_controls()
    table: dict[str, Any] = {}
    reasons: dict[str, str] = {}

    def record(name: str, compute: Callable[[], Any]):
        try:
            table[name] = compute()
        except WaldGameError as exc:
            table[name] = None
            reasons[name] = str(exc)

    def static(field: str) -> Callable[[], float]:
        return lambda: getattr(static_cutoffs(params), field)

    record("c_bar", lambda: cost_threshold(params))
    record("p_bar", lambda: dm_cutoffs(params, controls).p_bar)
    record("p_und", lambda: dm_cutoffs(params, controls).p_und)
    record("p_L", static("p_L"))
    record("p_M", lambda: p_m(params))
    record("p_tilde", static("p_tilde"))
    record("p_star", lambda: fixed_point_pstar(params, controls))
    record("T_ps", lambda: t_ps(params))
    record("p_nr", lambda: p_nr(params, controls))
    if prior is not None:
        record("q", lambda: immediate_mix_prob(prior, params))
        record("T_l", lambda: t_l(prior, params, controls))
        record("T_r", lambda: t_r(prior, params, controls=controls))
    table["reasons"] = reasons
    return table
