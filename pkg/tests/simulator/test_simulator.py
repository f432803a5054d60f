from collective.waldgame import _types as t
from collective.waldgame import simulator
from collective.waldgame.equilibrium import build_equilibrium
from collective.waldgame.exceptions import HypothesisViolation
from collective.waldgame.extensions import competition_equilibrium
from collective.waldgame.extensions import mrss_boundary
from collective.waldgame.verifier import induced_distribution
from collective.waldgame.verifier import strategy_value
from collective.waldgame.verifier import value_curves
from dataclasses import replace

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.mark.parametrize(
    "strategy,action",
    [
        [t.MixedStrategy.immediate_s(), t.Action.S],
        [t.MixedStrategy.immediate_r(), t.Action.R],
    ],
)
def test_sample_path_immediate(base, rng, strategy, action):
    assert simulator.sample_path(strategy, "H", rng, base) == (0.0, action)


def test_sample_path_of_a_pure_learner(base, rng):
    times, takes_R = simulator.sample_path(
        t.MixedStrategy(), "H", rng, base, size=20_000
    )
    assert takes_R.all()
    assert times.mean() == pytest.approx(1.0 / base.a, rel=0.03)


def test_sample_path_deadline(base, rng):
    strategy = t.MixedStrategy(deadline=0.5, terminal_action=t.Action.S)
    times, takes_R = simulator.sample_path(strategy, "L", rng, base, size=5_000)
    assert times.max() == 0.5
    assert not takes_R.any()


def test_immediate_r_always_clashes(base, simulation):
    strategy = t.MixedStrategy.immediate_r()
    report = simulator.simulate(strategy, strategy, 0.9, base, simulation)
    assert report.tie_frequency == 1.0
    assert report.float_ties == 0
    assert report.mean_stop_time == 0.0
    for mean, error in zip(report.mean_payoff, report.std_error, strict=True):
        assert mean == pytest.approx(0.3, abs=5 * error)
    assert report.win_rate["H"] == 0.0


def test_immediate_s_pays_the_safe_payoff(base, simulation):
    strategy = t.MixedStrategy.immediate_s()
    report = simulator.simulate(strategy, strategy, 0.3, base, simulation)
    assert report.mean_payoff == (0.0, 0.0)
    assert report.std_error == (0.0, 0.0)
    assert report.tie_frequency == 0.0
    assert np.all(report.G_L_emp == 1.0)
    assert np.all(report.F_H_emp == 0.0)


def test_first_taker_wins_against_a_quitter(base, simulation):
    report = simulator.simulate(
        t.MixedStrategy.immediate_r(),
        t.MixedStrategy.immediate_s(),
        0.5,
        base,
        simulation,
    )
    assert report.tie_frequency == 0.0
    assert report.win_rate == {"H": 1.0, "L": 1.0}
    assert report.mean_payoff[0] == pytest.approx(0.0, abs=5 * report.std_error[0])
    assert report.mean_payoff[1] == 0.0


def test_same_seed_same_report(base, controls, simulation):
    profile = build_equilibrium(
        t.Regime.RANDOM_STOPPING, 0.5, base, T_hat=0.0, controls=controls
    )
    first = simulator.simulate_profile(profile, base, simulation).to_dict()
    second = simulator.simulate_profile(profile, base, simulation).to_dict()
    assert first == second
    other = simulator.simulate_profile(profile, base, replace(simulation, seed=8))
    assert other.to_dict() != first


def test_progress_reports_every_replication(base, simulation):
    seen = []
    strategy = t.MixedStrategy()
    simulator.simulate(strategy, strategy, 0.5, base, simulation, progress=seen.append)
    assert sum(seen) == simulation.reps
    assert len(seen) == -(-simulation.reps // simulation.chunk_size)


def test_random_stopping_matches_induced_distribution(base, controls, verifier):
    profile = build_equilibrium(
        t.Regime.RANDOM_STOPPING, 0.5, base, T_hat=0.0, controls=controls
    )
    runs = t.SimulationControls()
    assert runs.reps == 100_000
    report = simulator.simulate_profile(profile, base, runs, horizon=3.0)
    assert report.extra["regime"] == "random-stopping"
    dist = induced_distribution(profile.strategy, base, verifier)
    for state, empirical, analytic in (
        ("H", report.F_H_emp, dist.F_H),
        ("L", report.F_L_emp, dist.F_L),
    ):
        n = report.state_counts[state]
        expected = np.interp(report.grid, dist.t, analytic)
        se = np.maximum(np.sqrt(expected * (1.0 - expected) / n), 1.0 / n)
        assert np.all(np.abs(empirical - expected) <= 3 * se)

    value = strategy_value(profile.strategy, value_curves(dist, 0.5, base))
    for mean, error in zip(report.mean_payoff, report.std_error, strict=True):
        assert abs(mean - value) <= 3 * error
    assert report.win_rate["L"] > report.win_rate["H"] + 3 * report.win_rate_se["L"]


def test_competition_mean_payoff(intense_set, controls, simulation):
    profile = competition_equilibrium(0.3, intense_set, controls)
    report = simulator.simulate_profile(profile, intense_set, simulation)
    for mean, error in zip(report.mean_payoff, report.std_error, strict=True):
        assert abs(mean - 0.0297224) <= 3 * error
    assert report.float_ties == 0


def test_mrss_counters(base, simulation):
    report = simulator.simulate_mrss(0.55, base, simulation)
    extra = report.extra
    assert extra["mimic_S"] + extra["follow_R"] == simulation.reps
    assert extra["follower_R"] <= extra["follow_R"]
    assert extra["boundary"] == mrss_boundary(0.55, base)
    assert report.state_counts["H"] + report.state_counts["L"] == 2 * simulation.reps


def test_mrss_needs_equal_penalties(intense_set, simulation):
    with pytest.raises(HypothesisViolation):
        simulator.simulate_mrss(0.3, intense_set, simulation)


@pytest.mark.slow
def test_random_stopping_large_run_is_symmetric(base, controls):
    profile = build_equilibrium(
        t.Regime.RANDOM_STOPPING, 0.5, base, T_hat=0.0, controls=controls
    )
    runs = t.SimulationControls(reps=400_000, seed=11, report_step=0.25)
    report = simulator.simulate_profile(profile, base, runs, horizon=3.0)
    assert report.std_error[0] < 2e-3
    assert report.F_H_emp[-1] == 1.0
    spread = np.hypot(*report.std_error)
    assert abs(report.mean_payoff[0] - report.mean_payoff[1]) < 5 * spread
    win_spread = np.hypot(report.win_rate_se["H"], report.win_rate_se["L"])
    assert report.win_rate["L"] > report.win_rate["H"] + 3 * win_spread
