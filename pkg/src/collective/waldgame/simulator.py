"""
Monte Carlo engine for the continuous-time game.

Replications are drawn in vectorised chunks. Every chunk owns a
``SeedSequence`` child of the root seed and spawns one stream for the state,
one per player and one for tie breaking, so the report only depends on the
seed and the chunk size.
"""

from collections.abc import Callable
from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.exceptions import NoLearningRegion
from collective.waldgame.extensions import mrss_boundary
from collective.waldgame.extensions import mrss_hazard
from collective.waldgame.single_dm import dm_cutoffs
from collective.waldgame.utils import default_simulation
from collective.waldgame.utils import default_verifier
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from scipy import integrate

import numpy as np


Progress = Callable[[int], None]


@dataclass
class _Draws:
    """Stop times and actions of one player over a chunk."""

    times: t.FloatArray
    takes_R: np.ndarray
    from_atom: np.ndarray


def _draw_players(
    strategy: t.MixedStrategy,
    state_H: np.ndarray,
    params: t.ModelParams,
    rng: np.random.Generator,
) -> _Draws:
    n = state_H.size
    position = rng.random(n)
    signal = rng.exponential(1.0, n) / np.where(state_H, params.a, params.b)
    r0, s0 = strategy.atom_R0, strategy.atom_S0
    atom_R = position < r0
    atom_S = (position >= r0) & (position < r0 + s0)
    learner = ~(atom_R | atom_S)

    planned = np.full(n, np.inf)
    planned_R = np.ones(n, dtype=bool)
    at_deadline = False
    if strategy.path is not None:
        path = strategy.path
        # inside the learning mass, position - r0 - s0 is uniform on [0, m0)
        level = position - r0 - s0
        reach = learner & (level < path.rho[-1])
        planned[reach] = np.interp(level[reach], path.rho, path.t_grid)
    elif strategy.deadline is not None:
        planned[learner] = strategy.deadline
        planned_R[:] = strategy.terminal_action is t.Action.R
        at_deadline = True

    signal_first = learner & (signal < planned)
    times = np.where(learner, np.minimum(signal, planned), 0.0)
    takes_R = np.where(
        atom_R,
        True,
        np.where(atom_S, False, np.where(signal_first, state_H, planned_R)),
    )
    from_atom = atom_R | atom_S
    if at_deadline:
        from_atom = from_atom | (learner & ~signal_first)
    return _Draws(times=times, takes_R=takes_R.astype(bool), from_atom=from_atom)


def sample_path(
    strategy: t.MixedStrategy,
    omega: str,
    rng: np.random.Generator,
    params: t.ModelParams,
    size: int | None = None,
):
    """Stop time and action of a player following ``strategy`` in state ``omega``.

    Returns a single ``(time, Action)`` pair, or two arrays when ``size`` is
    given.
    """
    n = 1 if size is None else size
    state_H = np.full(n, omega == "H")
    draws = _draw_players(strategy, state_H, params, rng)
    if size is None:
        action = t.Action.R if draws.takes_R[0] else t.Action.S
        return float(draws.times[0]), action
    return draws.times, draws.takes_R


def _combine(
    first: tuple[int, float, float], second: tuple[int, float, float]
) -> tuple[int, float, float]:
    """Merge (count, mean, M2) moments of two samples."""
    n_a, mean_a, m2_a = first
    n_b, mean_b, m2_b = second
    if n_a == 0:
        return second
    n = n_a + n_b
    delta = mean_b - mean_a
    mean = mean_a + delta * n_b / n
    m2 = m2_a + m2_b + delta**2 * n_a * n_b / n
    return n, mean, m2


def _moments(values: np.ndarray) -> tuple[int, float, float]:
    mean = float(np.mean(values))
    return values.size, mean, float(np.sum((values - mean) ** 2))


@dataclass
class _Accumulator:
    """Order-independent reduction of chunk statistics."""

    grid: t.FloatArray
    payoff: list[tuple[int, float, float]] = field(
        default_factory=lambda: [(0, 0.0, 0.0), (0, 0.0, 0.0)]
    )
    stop_time: float = 0.0
    cost: float = 0.0
    exact_ties: int = 0
    float_ties: int = 0
    takers: dict[str, int] = field(default_factory=lambda: {"H": 0, "L": 0})
    winners: dict[str, int] = field(default_factory=lambda: {"H": 0, "L": 0})
    draws: dict[str, int] = field(default_factory=lambda: {"H": 0, "L": 0})
    R_counts: dict[str, np.ndarray] = field(default_factory=dict)
    S_counts_L: np.ndarray | None = None

    def _count(self, times: np.ndarray) -> np.ndarray:
        return np.searchsorted(np.sort(times), self.grid, side="right")

    def update(
        self,
        state_H: np.ndarray,
        players: tuple[_Draws, _Draws],
        payoffs: tuple[np.ndarray, np.ndarray],
        firsts: tuple[np.ndarray, np.ndarray],
        params: t.ModelParams,
    ):
        for index, pay in enumerate(payoffs):
            self.payoff[index] = _combine(self.payoff[index], _moments(pay))
        for draws in players:
            self.stop_time += float(np.sum(draws.times))
            self.cost += float(np.sum(params.c * draws.times))
        for name, mask in (("H", state_H), ("L", ~state_H)):
            self.draws[name] += 2 * int(mask.sum())
            counts = self.R_counts.get(name, np.zeros(self.grid.size, dtype=np.int64))
            for draws, first in zip(players, firsts, strict=True):
                taken = mask & draws.takes_R
                self.takers[name] += int(taken.sum())
                self.winners[name] += int((mask & first).sum())
                counts = counts + self._count(draws.times[taken])
            self.R_counts[name] = counts
        if self.S_counts_L is None:
            self.S_counts_L = np.zeros(self.grid.size, dtype=np.int64)
        for draws in players:
            safe = ~state_H & ~draws.takes_R
            self.S_counts_L = self.S_counts_L + self._count(draws.times[safe])

    def report(self, reps: int, seed: int, extra: dict) -> t.SimulationReport:
        means, errors = [], []
        for n, mean, m2 in self.payoff:
            means.append(mean)
            variance = m2 / (n - 1) if n > 1 else 0.0
            errors.append(float(np.sqrt(variance / n)) if n else 0.0)
        win_rate, win_rate_se = {}, {}
        for name in ("H", "L"):
            takers = self.takers[name]
            rate = self.winners[name] / takers if takers else float("nan")
            win_rate[name] = rate
            win_rate_se[name] = (
                float(np.sqrt(rate * (1.0 - rate) / takers)) if takers else float("nan")
            )

        def share(counts: np.ndarray | None, name: str) -> t.FloatArray:
            total = self.draws[name]
            if counts is None or not total:
                return np.zeros(self.grid.size)
            return counts / total

        return t.SimulationReport(
            reps=reps,
            seed=seed,
            mean_payoff=(means[0], means[1]),
            std_error=(errors[0], errors[1]),
            mean_stop_time=self.stop_time / (2 * reps),
            mean_cost=self.cost / (2 * reps),
            tie_frequency=self.exact_ties / reps,
            float_ties=self.float_ties,
            win_rate=win_rate,
            win_rate_se=win_rate_se,
            grid=self.grid,
            F_H_emp=share(self.R_counts.get("H"), "H"),
            F_L_emp=share(self.R_counts.get("L"), "L"),
            G_L_emp=share(self.S_counts_L, "L"),
            state_counts=dict(self.draws),
            extra=extra,
        )


def _report_grid(controls: t.SimulationControls, horizon: float | None) -> t.FloatArray:
    horizon = default_verifier().sweep_horizon if horizon is None else horizon
    step = controls.report_step
    return np.arange(0.0, horizon + 0.5 * step, step)


def _chunks(controls: t.SimulationControls):
    """Chunk sizes with their seed sequences."""
    reps, size = controls.reps, controls.chunk_size
    count = -(-reps // size)
    sequences = np.random.SeedSequence(controls.seed).spawn(count)
    for index, sequence in enumerate(sequences):
        n = min(size, reps - index * size)
        yield n, [np.random.default_rng(child) for child in sequence.spawn(4)]


def _prizes(state_H: np.ndarray, params: t.ModelParams):
    prize = np.where(state_H, params.u_H, params.u_L)
    second = np.where(state_H, params.dbar_H, params.dbar_L)
    clash = np.where(state_H, params.dund_H, params.dund_L)
    return prize, second, clash


def _settle(
    state_H: np.ndarray,
    players: tuple[_Draws, _Draws],
    coin: np.ndarray,
    params: t.ModelParams,
):
    """Payoffs, first-taker masks and tie counts of one chunk."""
    one, two = players
    prize, second, clash = _prizes(state_H, params)
    both = one.takes_R & two.takes_R
    equal = both & (one.times == two.times)
    exact = equal & one.from_atom & two.from_atom
    coincide = equal & ~exact
    first_one = one.takes_R & (
        ~two.takes_R | (one.times < two.times) | (coincide & coin)
    )
    first_two = two.takes_R & (
        ~one.takes_R | (two.times < one.times) | (coincide & ~coin)
    )
    payoffs = []
    for draws, first in ((one, first_one), (two, first_two)):
        taken = np.where(
            exact, prize - clash, np.where(first, prize, prize - second)
        )
        pay = np.where(draws.takes_R, taken, params.u_S) - params.c * draws.times
        payoffs.append(pay)
    return (
        (payoffs[0], payoffs[1]),
        (first_one, first_two),
        int(exact.sum()),
        int(coincide.sum()),
    )


def simulate(
    first: t.MixedStrategy,
    second: t.MixedStrategy,
    p0: float,
    params: t.ModelParams,
    controls: t.SimulationControls | None = None,
    horizon: float | None = None,
    progress: Progress | None = None,
) -> t.SimulationReport:
    """Play a strategy pair ``controls.reps`` times.

    Args:
        first: Strategy of player one
        second: Strategy of player two
        p0: Prior probability of state H
        params: Model parameters
        controls: Replications, seed and reporting grid
        horizon: Last time of the reporting grid, the sweep horizon by default
        progress: Called with the size of every finished chunk

    Returns:
        Aggregated report; identical seeds give identical reports
    """
    controls = controls or default_simulation()
    accumulator = _Accumulator(grid=_report_grid(controls, horizon))
    logger.debug(f"Simulating {controls.reps} replications, seed {controls.seed}")
    for n, (state_rng, rng_one, rng_two, tie_rng) in _chunks(controls):
        state_H = state_rng.random(n) < p0
        players = (
            _draw_players(first, state_H, params, rng_one),
            _draw_players(second, state_H, params, rng_two),
        )
        coin = tie_rng.random(n) < 0.5
        payoffs, firsts, exact, coincide = _settle(state_H, players, coin, params)
        accumulator.exact_ties += exact
        accumulator.float_ties += coincide
        accumulator.update(state_H, players, payoffs, firsts, params)
        if progress is not None:
            progress(n)
    if accumulator.float_ties:
        logger.info(f"{accumulator.float_ties} coincident R stops broken by coin")
    return accumulator.report(controls.reps, controls.seed, extra={})


def simulate_profile(
    profile: t.EquilibriumProfile,
    params: t.ModelParams,
    controls: t.SimulationControls | None = None,
    horizon: float | None = None,
    progress: Progress | None = None,
) -> t.SimulationReport:
    """Both players follow the profile strategy."""
    strategy = profile.strategy
    report = simulate(
        strategy, strategy, profile.prior, params, controls, horizon, progress
    )
    report.extra["regime"] = profile.regime.value
    return report


def _mrss_stops(
    p0: float, params: t.ModelParams, rng: np.random.Generator, n: int
) -> t.FloatArray:
    """Strategic R times drawn from the clipped hazard; inf when never reached."""
    boundary = mrss_boundary(p0, params)
    if boundary <= 0.0:
        return np.full(n, np.inf)
    grid = np.linspace(0.0, boundary, 4001)
    hazard = np.clip(mrss_hazard(grid, p0, params), 0.0, None)
    cumulative = integrate.cumulative_trapezoid(hazard, grid, initial=0.0)
    level = rng.exponential(1.0, n)
    stops = np.full(n, np.inf)
    hit = level < cumulative[-1]
    stops[hit] = np.interp(level[hit], cumulative, grid)
    return stops


def _follower_plan(params: t.ModelParams) -> tuple[t.ModelParams, t.DmSolution | None]:
    """Single decision maker left after the rival took R first."""
    follower = replace(
        params,
        u_H=params.u_H - params.dbar_H,
        u_L=params.u_L - params.dbar_L,
        regime=None,
    )
    try:
        return follower, dm_cutoffs(follower)
    except NoLearningRegion:
        return follower, None


def simulate_mrss(
    p0: float,
    params: t.ModelParams,
    controls: t.SimulationControls | None = None,
    horizon: float | None = None,
    progress: Progress | None = None,
) -> t.SimulationReport:
    """Play the mimicking random stopping strategy with observable actions.

    The first event decides the game: an observed S is mimicked at once, an
    observed R leaves the other player a single decision maker with the
    second-taker payoffs and the posterior implied by the observation.

    Raises:
        HypothesisViolation: when dbar_H differs from dbar_L
    """
    controls = controls or default_simulation()
    accumulator = _Accumulator(grid=_report_grid(controls, horizon))
    follower, plan = _follower_plan(params)
    upside = follower.u_H - params.u_S
    mimic_S = follow_R = follower_R = 0
    L0 = p0 / (1.0 - p0)
    for n, (state_rng, rng_one, rng_two, tie_rng) in _chunks(controls):
        state_H = state_rng.random(n) < p0
        rate = np.where(state_H, params.a, params.b)
        signals = [rng.exponential(1.0, n) / rate for rng in (rng_one, rng_two)]
        stops = [_mrss_stops(p0, params, rng, n) for rng in (rng_one, rng_two)]
        events = [np.minimum(s, h) for s, h in zip(signals, stops, strict=True)]
        coin = tie_rng.random(n) < 0.5
        tied = events[0] == events[1]
        accumulator.float_ties += int((tied & np.isfinite(events[0])).sum())
        one_leads = (events[0] < events[1]) | (tied & coin)
        start = np.minimum(events[0], events[1])
        lead_signal = np.where(one_leads, signals[0], signals[1])
        lead_R = np.where(lead_signal <= start, state_H, True)

        # follower after an observed R
        odds = L0 * np.exp(2.0 * (params.b - params.a) * start)
        hazard = np.clip(mrss_hazard(start, p0, params), 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            odds = np.where(hazard > 0.0, odds * (params.a + hazard) / hazard, np.inf)
        belief = np.where(np.isinf(odds), 1.0, odds / (1.0 + odds))
        follow_signal = np.where(one_leads, signals[1], signals[0])
        prize, second, _ = _prizes(state_H, params)
        if upside <= 0.0:
            wait = np.full(n, np.nan)
        elif plan is None:
            expected = belief * follower.u_H + (1.0 - belief) * follower.u_L
            wait = np.where(expected >= params.u_S, 0.0, np.nan)
        else:
            with np.errstate(divide="ignore"):
                wait = np.where(
                    belief >= plan.p_bar,
                    0.0,
                    np.where(
                        belief <= plan.p_und,
                        np.nan,
                        np.log(plan.L_bar / odds) / (params.b - params.a),
                    ),
                )
        gives_up = np.isnan(wait)
        learns_first = ~gives_up & (follow_signal < start + np.nan_to_num(wait))
        follow_time = np.where(
            gives_up, start, np.where(learns_first, follow_signal, start + wait)
        )
        follow_takes_R = ~gives_up & (~learns_first | state_H)
        follow_time = np.where(lead_R, follow_time, start)
        follow_takes_R = np.where(lead_R, follow_takes_R, False)

        lead_pay = np.where(lead_R, prize, params.u_S) - params.c * start
        follow_pay = (
            np.where(follow_takes_R, prize - second, params.u_S)
            - params.c * follow_time
        )
        lead = _Draws(times=start, takes_R=lead_R, from_atom=np.zeros(n, bool))
        other = _Draws(
            times=follow_time, takes_R=follow_takes_R, from_atom=np.zeros(n, bool)
        )
        players = (
            _Draws(
                times=np.where(one_leads, lead.times, other.times),
                takes_R=np.where(one_leads, lead.takes_R, other.takes_R),
                from_atom=lead.from_atom,
            ),
            _Draws(
                times=np.where(one_leads, other.times, lead.times),
                takes_R=np.where(one_leads, other.takes_R, lead.takes_R),
                from_atom=lead.from_atom,
            ),
        )
        payoffs = (
            np.where(one_leads, lead_pay, follow_pay),
            np.where(one_leads, follow_pay, lead_pay),
        )
        firsts = (one_leads & lead_R, ~one_leads & lead_R)
        accumulator.update(state_H, players, payoffs, firsts, params)
        mimic_S += int((~lead_R).sum())
        follow_R += int(lead_R.sum())
        follower_R += int((lead_R & follow_takes_R).sum())
        if progress is not None:
            progress(n)
    extra = {
        "mimic_S": mimic_S,
        "follow_R": follow_R,
        "follower_R": follower_R,
        "boundary": mrss_boundary(p0, params),
    }
    return accumulator.report(controls.reps, controls.seed, extra=extra)
