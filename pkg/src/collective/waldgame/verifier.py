"""
Best-response sweeps and equilibrium certificates.

Against a fixed opponent strategy, the payoff of every deterministic plan
"learn until T, then take an action" is computed by trapezoid quadrature of
the flow payoff plus the terminal payoff at T. The best reply to a fixed
opponent is an optimal stopping problem, so sweeping T over a grid is enough
to certify a candidate profile up to the grid resolution.
"""

from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.model_core import belief_at
from collective.waldgame.utils import default_verifier

import numpy as np


_FLAT = 1e-12
_STOP_MATCH = 1e-9
_MIN_SURVIVAL = 1e-6
_GUARD = 2


def _grid(
    strategy: t.MixedStrategy, verifier: t.VerifierControls, extra_times=()
) -> t.FloatArray:
    step = verifier.sweep_step
    parts = [
        np.arange(0.0, verifier.sweep_horizon + 0.5 * step, step),
        np.asarray(extra_times, dtype=float),
    ]
    if strategy.path is not None:
        parts.append(strategy.path.t_grid)
    if strategy.deadline is not None:
        parts.append(np.asarray([strategy.deadline]))
    grid = np.unique(np.concatenate(parts))
    return grid[grid >= 0.0]


def induced_distribution(
    strategy: t.MixedStrategy,
    params: t.ModelParams,
    verifier: t.VerifierControls | None = None,
    extra_times=(),
) -> t.InducedStopDistribution:
    """Probabilities that an opponent playing ``strategy`` has stopped by t.

    Learners still in the game take R on a breakthrough and S on a breakdown,
    so the learning mass leaks into F_H and G_L even without planned stops.
    """
    verifier = verifier or default_verifier()
    grid = _grid(strategy, verifier, extra_times)
    a, b = params.a, params.b
    r0, s0, m0 = strategy.atom_R0, strategy.atom_S0, strategy.learning_mass
    decay_H = np.exp(-a * grid)
    decay_L = np.exp(-b * grid)
    zeros = np.zeros_like(grid)

    path = strategy.path
    if path is not None:
        rho = np.interp(grid, path.t_grid, path.rho, left=0.0, right=path.rho[-1])
        rho = np.minimum(rho, m0)
        F_L_path = np.interp(grid, path.t_grid, path.F_L, left=0.0, right=path.F_L[-1])
    else:
        rho, F_L_path = zeros, zeros

    F_H = r0 + m0 - decay_H * (m0 - rho)
    F_L = r0 + F_L_path
    G_H = s0 + zeros
    G_L = s0 + m0 - decay_L * (m0 - rho) - F_L_path
    F_H_left = F_H.copy()
    F_L_left = F_L.copy()

    deadline = strategy.deadline
    if deadline is not None:
        after = grid >= deadline
        kept_H = m0 * np.exp(-a * deadline)
        kept_L = m0 * np.exp(-b * deadline)
        index = int(np.searchsorted(grid, deadline))
        if strategy.terminal_action is t.Action.R:
            F_H[after] = r0 + m0
            F_L[after] = r0 + kept_L
            G_L[after] = s0 + m0 - kept_L
        else:
            F_H[after] = r0 + m0 - kept_H
            G_H[after] = s0 + kept_H
            G_L[after] = s0 + m0
        F_H_left[after] = F_H[after]
        F_L_left[after] = F_L[after]
        F_H_left[index] = r0 + m0 - kept_H
        F_L_left[index] = r0
    F_H_left[0] = 0.0
    F_L_left[0] = 0.0
    return t.InducedStopDistribution(
        t=grid,
        F_H=F_H,
        F_L=F_L,
        G_H=G_H,
        G_L=G_L,
        F_H_left=F_H_left,
        F_L_left=F_L_left,
        atom_R0=r0,
        atom_S0=s0,
    )


def value_curves(
    dist: t.InducedStopDistribution, p0: float, params: t.ModelParams
) -> t.ValueCurves:
    """Time-zero value of stopping at every grid time with R, with S, or best.

    Opponent mass stopping with R at the very instant of the stop is charged
    the simultaneous penalty; earlier R takers the second-taker penalty.
    """
    a, b, c = params.a, params.b, params.c
    times = dist.t
    decay_H = p0 * np.exp(-a * times)
    decay_L = (1.0 - p0) * np.exp(-b * times)
    survival = decay_H + decay_L

    def flow(F_H):
        prize_H = params.u_H - F_H * params.dbar_H
        return decay_H * a * prize_H + decay_L * b * params.u_S - c * survival

    right, left = flow(dist.F_H), flow(dist.F_H_left)
    segments = 0.5 * (right[:-1] + left[1:]) * np.diff(times)
    integral = np.concatenate([[0.0], np.cumsum(segments)])

    clash_H = dist.F_H - dist.F_H_left
    clash_L = dist.F_L - dist.F_L_left
    terminal_R = decay_H * (
        params.u_H - dist.F_H_left * params.dbar_H - clash_H * params.dund_H
    ) + decay_L * (params.u_L - dist.F_L_left * params.dbar_L - clash_L * params.dund_L)
    R = integral + terminal_R
    S = integral + survival * params.u_S
    return t.ValueCurves(
        t=times,
        integral=integral,
        survival=survival,
        R=R,
        S=S,
        best=np.maximum(R, S),
    )


def stop_value(
    T: float,
    final_action: t.Action | str,
    dist: t.InducedStopDistribution,
    p0: float,
    params: t.ModelParams,
    start: float = 0.0,
) -> float:
    """Value of learning until T and then taking ``final_action``.

    ``final_action`` is R, S or ``"best"``. With ``start`` > 0 the value is the
    continuation from ``start`` given no revealing signal so far.
    """
    curves = value_curves(dist, p0, params)
    column = {"R": curves.R, "S": curves.S, "best": curves.best}[str(final_action)]
    value = float(np.interp(T, curves.t, column))
    if start > 0.0:
        spent = float(np.interp(start, curves.t, curves.integral))
        survival = float(np.interp(start, curves.t, curves.survival))
        value = (value - spent) / survival
    return value


def _path_values(path: t.StrategyPath, curves: t.ValueCurves) -> t.FloatArray:
    return np.interp(path.t_grid, curves.t, curves.R)


def strategy_value(strategy: t.MixedStrategy, curves: t.ValueCurves) -> float:
    """Expected value of a mixed strategy against the opponent behind ``curves``."""
    value = strategy.atom_R0 * curves.R[0] + strategy.atom_S0 * curves.S[0]
    mass = strategy.learning_mass
    if mass <= 0.0:
        return float(value)
    if strategy.path is not None:
        path = strategy.path
        R_path = _path_values(path, curves)
        value += np.sum(0.5 * (R_path[1:] + R_path[:-1]) * np.diff(path.rho))
        remaining = mass - path.rho[-1]
        if remaining > _FLAT:
            value += remaining * curves.best[-1]
    elif strategy.deadline is not None:
        column = curves.R if strategy.terminal_action is t.Action.R else curves.S
        value += mass * np.interp(strategy.deadline, curves.t, column)
    else:
        value += mass * curves.S[-1]
    return float(value)


def support_values(strategy: t.MixedStrategy, curves: t.ValueCurves) -> t.FloatArray:
    """Values of the deterministic plans a mixed strategy puts weight on."""
    values = []
    if strategy.atom_R0 > 0.0:
        values.append(np.asarray([curves.R[0]]))
    if strategy.atom_S0 > 0.0:
        values.append(np.asarray([curves.S[0]]))
    if strategy.learning_mass > 0.0:
        if strategy.path is not None:
            values.append(_path_values(strategy.path, curves))
        elif strategy.deadline is not None:
            column = curves.R if strategy.terminal_action is t.Action.R else curves.S
            values.append(np.asarray([np.interp(strategy.deadline, curves.t, column)]))
        else:
            values.append(np.asarray([curves.S[-1]]))
    return np.concatenate(values)


def best_response_sweep(
    opponent: t.MixedStrategy,
    p0: float,
    params: t.ModelParams,
    verifier: t.VerifierControls | None = None,
    own: t.MixedStrategy | None = None,
) -> t.BestResponseReport:
    """Sweep deterministic stop times against ``opponent``.

    The candidate is ``own``, the opponent's own strategy when omitted.
    """
    verifier = verifier or default_verifier()
    own = own or opponent
    dist = induced_distribution(opponent, params, verifier)
    curves = value_curves(dist, p0, params)
    max_value = float(np.max(curves.best))
    tolerance = _FLAT * max(1.0, abs(max_value))
    argmax = curves.t[curves.best >= max_value - tolerance]
    candidate = strategy_value(own, curves)
    gain = max_value - candidate
    logger.debug(f"Sweep p0={p0}: max {max_value} candidate {candidate}")
    return t.BestResponseReport(
        t=curves.t,
        value_curve=curves.best,
        max_value=max_value,
        argmax_set=tuple(float(x) for x in argmax),
        candidate_value=candidate,
        deviation_gain=gain,
        certified=gain <= verifier.eps,
        eps=verifier.eps,
    )


def check_equilibrium(
    profile: t.EquilibriumProfile,
    params: t.ModelParams,
    verifier: t.VerifierControls | None = None,
) -> t.Certificate:
    """Certify that no deterministic deviation beats the profile by more than eps.

    ``indifferent`` only asks that every plan in the support earns the same.
    """
    verifier = verifier or default_verifier()
    strategy = profile.strategy
    dist = induced_distribution(strategy, params, verifier)
    curves = value_curves(dist, profile.prior, params)
    max_value = float(np.max(curves.best))
    candidate = strategy_value(strategy, curves)
    support = support_values(strategy, curves)
    support_gap = float(np.max(support) - np.min(support))
    gain = max_value - candidate
    eps = verifier.eps
    tolerance = _FLAT * max(1.0, abs(max_value))
    argmax = curves.t[curves.best >= max_value - tolerance]
    certified = gain <= eps and max_value - float(np.min(support)) <= eps
    certificate = t.Certificate(
        regime=profile.regime,
        prior=profile.prior,
        eps=eps,
        certified=bool(certified),
        indifferent=support_gap <= eps,
        deviation_gain=gain,
        support_gap=support_gap,
        max_value=max_value,
        candidate_value=candidate,
        argmax=tuple(float(x) for x in argmax),
    )
    logger.info(
        f"Certificate {profile.regime.value} p0={profile.prior}: "
        f"certified={certificate.certified} gain={gain:.3e}"
    )
    return certificate


def value_envelope(curves: t.ValueCurves) -> t.FloatArray:
    """Best-reply value at each grid time, conditional on no signal so far."""
    future_best = np.maximum.accumulate(curves.best[::-1])[::-1]
    return (future_best - curves.integral) / curves.survival


def with_interior_atom(
    tau: float, action: t.Action = t.Action.R, atom_R0: float = 0.0
) -> t.MixedStrategy:
    """Opponent that learns until ``tau`` and then stops with ``action``."""
    return t.MixedStrategy(atom_R0=atom_R0, deadline=tau, terminal_action=action)


def _near(times: t.FloatArray, marks, guard: int) -> np.ndarray:
    excluded = np.zeros(times.size, dtype=bool)
    for mark in marks:
        index = int(np.searchsorted(times, mark))
        excluded[max(0, index - guard) : index + guard + 1] = True
    return excluded


def hjb_residual(
    profile: t.EquilibriumProfile,
    params: t.ModelParams,
    verifier: t.VerifierControls | None = None,
) -> t.HjbReport:
    """Pointwise |max{learning gain, stopping gain}| of the best-reply value.

    Nodes next to atoms, path ends and switches between learning and stopping
    are excluded, as are late nodes where the survival probability is tiny.
    """
    verifier = verifier or default_verifier()
    p0 = profile.prior
    strategy = profile.strategy
    dist = induced_distribution(strategy, params, verifier)
    curves = value_curves(dist, p0, params)
    times = curves.t
    V = value_envelope(curves)
    slope = np.gradient(V, times)
    p = belief_at(p0, times, params)
    prize_H = params.u_H - dist.F_H * params.dbar_H
    prize_L = params.u_L - dist.F_L * params.dbar_L
    stop = np.maximum(p * prize_H + (1.0 - p) * prize_L, params.u_S)
    learn = (
        p * params.a * (prize_H - V)
        + (1.0 - p) * params.b * (params.u_S - V)
        + slope
        - params.c
    )
    residual = np.abs(np.maximum(learn, stop - V))
    stopping = np.abs(stop - V) <= _STOP_MATCH

    marks = [0.0]
    if strategy.path is not None:
        marks += [strategy.path.T_hat, strategy.path.T_bar]
    if strategy.deadline is not None:
        marks.append(strategy.deadline)
    switches = times[np.flatnonzero(np.diff(stopping.astype(int))) + 1]
    excluded = _near(times, [*marks, *switches], _GUARD)
    excluded |= curves.survival < _MIN_SURVIVAL
    excluded[-3:] = True
    residual = np.where(excluded, np.nan, residual)

    learning_nodes = ~excluded & ~stopping
    stopping_nodes = ~excluded & stopping
    learning_max = 0.0
    if learning_nodes.any():
        learning_max = float(np.max(residual[learning_nodes]))
    stopping_gap = np.abs(stop - V)[stopping_nodes]
    stopping_max = float(np.max(stopping_gap)) if stopping_gap.size else 0.0
    return t.HjbReport(
        t=times,
        residual=residual,
        stopping=stopping,
        learning_max=learning_max,
        stopping_max=stopping_max,
    )
