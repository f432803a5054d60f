"""
Indifference ODE generating the random stopping paths.

While randomizing, a learner must be indifferent between stopping with R and
learning for dt longer: the flow cost plus the expected preemption losses has
to equal the expected gain from a breakdown. Solving that condition for rho'
gives the right-hand side integrated here. The state is (rho, F_L); F_H is a
closed form of rho.

Integration is a fixed-step classical RK4, except that a step is shortened
whenever rho would move by more than ``max_rho_step`` in it: paths that start
late in the window have very steep rates near their end.
"""

from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.exceptions import HypothesisViolation
from collective.waldgame.exceptions import Infeasible
from collective.waldgame.exceptions import MonotonicityBreak
from collective.waldgame.exceptions import NoRandomization
from collective.waldgame.model_core import belief_at
from collective.waldgame.utils import default_controls
from scipy import integrate
from scipy import optimize

import numpy as np


def stop_probability_H(time, rho, beta: float, params: t.ModelParams):
    """F_H from rho: pre-start breakthroughs of the learners plus their stops."""
    decay = np.exp(-params.a * np.asarray(time, dtype=float))
    return (1.0 - beta) * (1.0 - decay) + decay * rho


def rho_rate(
    time,
    rho,
    F_L,
    p0: float,
    params: t.ModelParams,
    beta: float = 0.0,
    N: int = 2,
):
    """Right-hand side of the master indifference ODE for N players.

    Each rival that has not yet taken R can preempt, so the marginal loss of a
    stop in state H is scaled by (N - 1)(1 - F_H)^(N - 2); likewise in state L.
    """
    a, b, c = params.a, params.b, params.c
    L = t.Belief.from_probability(p0).L * np.exp((b - a) * time)
    decay_H = np.exp(-a * time)
    decay_L = np.exp(-b * time)
    F_H = (1.0 - beta) * (1.0 - decay_H) + decay_H * rho
    rivals_H = (N - 1) * (1.0 - F_H) ** (N - 2)
    rivals_L = (N - 1) * (1.0 - F_L) ** (N - 2)
    someone_L = 1.0 - (1.0 - F_L) ** (N - 1)
    numerator = (
        b * params.g
        + b * params.dbar_L * someone_L
        - c * (1.0 + L)
        - L * rivals_H * params.dbar_H * a * decay_H * (1.0 - beta - rho)
    )
    denominator = (
        L * rivals_H * params.dbar_H * decay_H + rivals_L * params.dbar_L * decay_L
    )
    return numerator / denominator


def rho_rate_two_player(time, rho, F_L, p0: float, params: t.ModelParams):
    """Two-player right-hand side in its expanded form."""
    a, b, c = params.a, params.b, params.c
    L = t.Belief.from_probability(p0).L * np.exp((b - a) * time)
    decay_H = np.exp(-a * time)
    numerator = (
        b * params.g
        - c
        - L * c
        + b * params.dbar_L * F_L
        - L * params.dbar_H * a * decay_H * (1.0 - rho)
    )
    denominator = L * params.dbar_H * decay_H + params.dbar_L * np.exp(-b * time)
    return numerator / denominator


def initial_slope(
    p0: float,
    params: t.ModelParams,
    beta: float = 0.0,
    N: int = 2,
    T_hat: float = 0.0,
) -> float:
    """rho' at the start of randomization, where rho = F_L = 0."""
    return float(rho_rate(T_hat, 0.0, 0.0, p0, params, beta=beta, N=N))


def _rk4_step(rate: "_Rate", time: float, rho: float, F_L: float, step: float):
    deriv = rate.deriv
    k1 = deriv(time, rho, F_L)
    half = time + 0.5 * step
    k2 = deriv(half, rho + 0.5 * step * k1[0], F_L + 0.5 * step * k1[1])
    k3 = deriv(half, rho + 0.5 * step * k2[0], F_L + 0.5 * step * k2[1])
    k4 = deriv(time + step, rho + step * k3[0], F_L + step * k3[1])
    rho_next = rho + step / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    F_L_next = F_L + step / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    return float(rho_next), float(F_L_next)


class _Rate:
    """Scalar right-hand side bound to one solve."""

    def __init__(self, p0: float, params: t.ModelParams, beta: float, N: int):
        self.p0 = p0
        self.params = params
        self.beta = beta
        self.N = N

    def __call__(self, time: float, rho: float, F_L: float) -> float:
        return float(
            rho_rate(time, rho, F_L, self.p0, self.params, beta=self.beta, N=self.N)
        )

    def deriv(self, time: float, rho: float, F_L: float) -> tuple[float, float]:
        value = self(time, rho, F_L)
        return value, float(np.exp(-self.params.b * time)) * value


def solve_master_ode(
    p0: float,
    params: t.ModelParams,
    beta: float = 0.0,
    T_hat: float = 0.0,
    N: int | None = None,
    controls: t.SolverControls | None = None,
) -> t.StrategyPath:
    """Integrate the indifference ODE from T_hat until rho reaches 1 - beta.

    Args:
        p0: Prior
        params: Model parameters
        beta: Time-zero S mass; the remaining 1 - beta randomizes
        T_hat: Start of randomization
        N: Number of players, defaults to ``params.N``
        controls: Solver controls

    Returns:
        Dense path with rho(T_bar) = 1 - beta exactly

    Raises:
        HypothesisViolation: beta > 0 with more than two players
        NoRandomization: the rate at T_hat is not positive, or beta = 1
        MonotonicityBreak: the rate turns non-positive before completion
        Infeasible: the horizon is reached first
    """
    controls = controls or default_controls()
    N = params.N if N is None else N
    if beta > 0.0 and N > 2:
        raise HypothesisViolation(
            "Mixed learning is only constructed for two players", N=N, beta=beta
        )
    target = 1.0 - beta
    slope = initial_slope(p0, params, beta=beta, N=N, T_hat=T_hat)
    if target <= 0.0 or slope <= 0.0:
        raise NoRandomization(slope=slope, start=T_hat)

    rate = _Rate(p0, params, beta, N)
    times, rhos, F_Ls = [T_hat], [0.0], [0.0]
    time, rho, F_L = T_hat, 0.0, 0.0
    current = slope
    logger.debug(f"Solving indifference ODE p0={p0} beta={beta} T_hat={T_hat} N={N}")
    while True:
        step = min(controls.ode_step, controls.max_rho_step / current)
        rho_next, F_L_next = _rk4_step(rate, time, rho, F_L, step)
        if rho_next >= target:
            last = optimize.bisect(
                lambda s: _rk4_step(rate, time, rho, F_L, s)[0] - target,
                0.0,
                step,
                xtol=controls.bisect_tol,
                maxiter=controls.max_iter,
            )
            _, F_L_end = _rk4_step(rate, time, rho, F_L, last)
            if last > 0.0:
                times.append(time + last)
                rhos.append(target)
                F_Ls.append(F_L_end)
            else:
                rhos[-1] = target
            break
        time, rho, F_L = time + step, rho_next, F_L_next
        times.append(time)
        rhos.append(rho)
        F_Ls.append(F_L)
        if time > controls.horizon:
            raise Infeasible(
                "Indifference ODE did not complete before the horizon",
                horizon=controls.horizon,
                rho=rho,
            )
        current = rate(time, rho, F_L)
        if current <= 0.0:
            raise MonotonicityBreak(time=time, rho=rho, rate=current)

    t_grid = np.asarray(times)
    rho_grid = np.asarray(rhos)
    path = t.StrategyPath(
        p0=p0,
        t_grid=t_grid,
        rho=rho_grid,
        F_H=stop_probability_H(t_grid, rho_grid, beta, params),
        F_L=np.asarray(F_Ls),
        T_hat=T_hat,
        T_bar=float(t_grid[-1]),
        beta=beta,
        N=N,
    )
    logger.debug(f"Path completed at T_bar={path.T_bar} with {t_grid.size} nodes")
    return path


def build_path(
    p0: float,
    t_grid: t.FloatArray,
    rho: t.FloatArray,
    params: t.ModelParams,
    beta: float = 0.0,
    N: int = 2,
) -> t.StrategyPath:
    """Path record for an arbitrary rho, with F_L integrated by trapezoids."""
    t_grid = np.asarray(t_grid, dtype=float)
    rho = np.asarray(rho, dtype=float)
    rho_slope = np.gradient(rho, t_grid, edge_order=2)
    F_L = integrate.cumulative_trapezoid(
        np.exp(-params.b * t_grid) * rho_slope, t_grid, initial=0.0
    )
    return t.StrategyPath(
        p0=p0,
        t_grid=t_grid,
        rho=rho,
        F_H=stop_probability_H(t_grid, rho, beta, params),
        F_L=F_L,
        T_hat=float(t_grid[0]),
        T_bar=float(t_grid[-1]),
        beta=beta,
        N=N,
    )


def indifference_residuals(path: t.StrategyPath, params: t.ModelParams) -> t.FloatArray:
    """Marginal cost minus marginal benefit of waiting at every path node.

    Derivatives are second-order finite differences; the last two nodes are
    dropped since the refined final step can be arbitrarily short.
    """
    b, c = params.b, params.c
    times = path.t_grid
    N = path.N
    p = belief_at(path.p0, times, params)
    dF_H = np.gradient(path.F_H, times, edge_order=2)
    dF_L = np.gradient(path.F_L, times, edge_order=2)
    rivals_H = (N - 1) * (1.0 - path.F_H) ** (N - 2)
    rivals_L = (N - 1) * (1.0 - path.F_L) ** (N - 2)
    someone_L = 1.0 - (1.0 - path.F_L) ** (N - 1)
    cost = (
        c
        + p * rivals_H * dF_H * params.dbar_H
        + (1.0 - p) * rivals_L * dF_L * params.dbar_L
    )
    benefit = (1.0 - p) * b * (params.g + someone_L * params.dbar_L)
    residual = cost - benefit
    return residual[:-2] if residual.size > 3 else residual


def indifference_residual(path: t.StrategyPath, params: t.ModelParams) -> float:
    """Largest absolute indifference residual along a path."""
    return float(np.max(np.abs(indifference_residuals(path, params))))


def z_coefficients(time, p0: float, params: t.ModelParams):
    """Coefficients (M, g1, g2, g3) of the second-order form of the ODE.

    With A = e^{-bt} rho and z the integral of A, the two-player equation reads
    z'' + g1 z' + g2 z = g3.
    """
    a, b, c = params.a, params.b, params.c
    time = np.asarray(time, dtype=float)
    L0 = t.Belief.from_probability(p0).L
    grow = L0 * params.dbar_H * np.exp(2.0 * (b - a) * time)
    M = grow + params.dbar_L
    g1 = b - (b * params.dbar_L + a * grow) / M
    g2 = -(b**2) * params.dbar_L / M
    g3 = (
        b * params.g
        - c
        - c * L0 * np.exp((b - a) * time)
        - a * L0 * params.dbar_H * np.exp((b - 2.0 * a) * time)
    ) / M
    return M, g1, g2, g3


def z_transform_check(path: t.StrategyPath, params: t.ModelParams) -> float:
    """Largest residual of z'' + g1 z' + g2 z - g3 along a two-player path.

    Raises:
        HypothesisViolation: for paths with N > 2, beta > 0 or a delayed start
    """
    if path.N != 2 or path.beta != 0.0 or path.T_hat != 0.0:
        raise HypothesisViolation(
            "The second-order form holds for two players starting at time zero",
            N=path.N,
            beta=path.beta,
            T_hat=path.T_hat,
        )
    times = path.t_grid
    A = np.exp(-params.b * times) * path.rho
    z = integrate.cumulative_trapezoid(A, times, initial=0.0)
    z_second = np.gradient(A, times, edge_order=2)
    _, g1, g2, g3 = z_coefficients(times, path.p0, params)
    residual = z_second + g1 * A + g2 * z - g3
    return float(np.max(np.abs(residual[:-2])))
