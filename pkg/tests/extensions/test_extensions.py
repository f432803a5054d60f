from collective.waldgame import _types as t
from collective.waldgame import extensions
from collective.waldgame.exceptions import HypothesisViolation
from collective.waldgame.exceptions import OutOfRange
from collective.waldgame.exceptions import RegimeMismatch

import math
import numpy as np
import pytest


def test_competition_value_at_deadline(intense_set):
    deadline = math.log(2.0) / 0.6
    assert extensions.competition_value(deadline, 0.3, intense_set) == pytest.approx(
        0.0, abs=1e-12
    )
    assert extensions.competition_value(deadline + 1.0, 0.3, intense_set) == 0.0


def test_competition_learning_beats_stopping_at_start(intense_set):
    value = extensions.competition_value(0.0, 0.3, intense_set)
    assert value == pytest.approx(0.0297224, abs=1e-6)
    assert value > extensions.competition_r_payoff(0.0, 0.3, intense_set)


def test_competition_r_payoff_at_start(intense_set):
    assert extensions.competition_r_payoff(0.0, 0.3, intense_set) == pytest.approx(
        0.3 * 0.5 - 0.7
    )


def test_competition_solution(intense_set, controls):
    solution = extensions.competition_solution(0.3, intense_set, controls=controls)
    assert solution.T_ps == pytest.approx(1.155245, abs=1e-6)
    assert solution.p_nr == pytest.approx(0.06070052, abs=1e-6)
    assert solution.t[-1] == solution.T_ps
    assert solution.W_L[-1] == pytest.approx(0.0, abs=1e-12)
    rows = solution.rows()
    assert len(rows) == 201
    assert set(rows[0]) == {"t", "W_L", "psi", "U_R"}


def test_competition_equilibrium(intense_set, controls):
    profile = extensions.competition_equilibrium(0.3, intense_set, controls)
    assert profile.regime is t.Regime.PURE_LEARNING
    assert profile.strategy.deadline == pytest.approx(1.155245, abs=1e-6)
    assert profile.strategy.terminal_action is t.Action.S
    assert profile.constants["p_tilde"] == pytest.approx(0.564286, abs=1e-6)


@pytest.mark.parametrize("p0", [0.05, 0.6])
def test_competition_equilibrium_out_of_range(intense_set, controls, p0: float):
    with pytest.raises(OutOfRange):
        extensions.competition_equilibrium(p0, intense_set, controls)


def test_competition_needs_intense_regime(base):
    with pytest.raises(RegimeMismatch):
        extensions.competition_value(0.0, 0.3, base)


def test_observable_belief(base):
    expected = math.e / (1.0 + math.e)
    assert extensions.observable_belief(0.5, 2.5, base) == pytest.approx(expected)


def test_mrss_hazard_at_start(base):
    assert extensions.mrss_hazard(0.0, 0.5, base) == pytest.approx(0.33 / 1.4)


def test_mrss_boundary(base):
    boundary = extensions.mrss_boundary(0.5, base)
    assert boundary == pytest.approx(math.log(0.775 / 0.445) / 0.4)
    assert boundary == pytest.approx(1.3871, abs=1e-4)
    assert extensions.mrss_hazard(boundary, 0.5, base) == pytest.approx(0.0, abs=1e-12)


def test_mrss_boundary_zero_above_p_tilde(base):
    assert extensions.mrss_boundary(0.7, base) == 0.0


def test_mrss_needs_equal_penalties(intense_set):
    with pytest.raises(HypothesisViolation):
        extensions.mrss_hazard(0.0, 0.3, intense_set)


def test_mrss_spec_default_grid_is_clipped(base):
    spec = extensions.mrss_spec(0.55, base)
    assert spec.flags == {
        "equal_penalties": True,
        "prior_in_range": True,
        "clipped": True,
    }
    assert np.all(spec.hazard >= 0.0)
    assert np.all(spec.hazard[~spec.feasible] == 0.0)
    assert spec.t[-1] == pytest.approx(2.0 * spec.boundary)


def test_mrss_spec_on_a_short_grid(base):
    spec = extensions.mrss_spec(0.55, base, grid=np.linspace(0.0, 0.8, 9))
    assert not spec.flags["clipped"]
    assert spec.feasible.all()
    assert np.all(np.diff(spec.belief) > 0.0)
    assert len(spec.rows()) == 9


def test_mrss_spec_prior_outside_range(base):
    assert not extensions.mrss_spec(0.5, base).flags["prior_in_range"]


def test_n_player_report(base, controls):
    rows = extensions.n_player_report(0.5, base, (2, 3), controls)
    two, three = rows
    assert two["N"] == 2
    assert two["T_bar"] == pytest.approx(1.3347, abs=1e-3)
    assert two["reason"] is None
    assert three["p_tilde_N"] == pytest.approx(0.47255, abs=1e-5)
    assert three["initial_slope"] < 0.0
    assert three["T_bar"] is None
    assert "not positive" in three["reason"]
