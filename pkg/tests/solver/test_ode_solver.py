from collective.waldgame import ode_solver
from collective.waldgame.cutoffs import n_player_cutoff
from collective.waldgame.cutoffs import static_cutoffs
from collective.waldgame.exceptions import HypothesisViolation
from collective.waldgame.exceptions import NoRandomization

import numpy as np
import pytest


@pytest.fixture(scope="module")
def base_path(base, controls):
    return ode_solver.solve_master_ode(0.5, base, controls=controls)


@pytest.fixture(scope="module")
def set_q_path(set_q, controls):
    return ode_solver.solve_master_ode(0.6, set_q, controls=controls)


def test_initial_slope(base):
    assert ode_solver.initial_slope(0.5, base) == pytest.approx(0.33 / 1.4)


def test_two_player_forms_agree(base):
    for time in (0.0, 0.4, 1.1):
        for rho, F_L in ((0.0, 0.0), (0.3, 0.1), (0.8, 0.25)):
            general = ode_solver.rho_rate(time, rho, F_L, 0.5, base)
            expanded = ode_solver.rho_rate_two_player(time, rho, F_L, 0.5, base)
            assert general == pytest.approx(expanded, rel=1e-12)


def test_n_player_slope_flips_at_cutoff(base):
    cutoff = n_player_cutoff(3, base)
    assert ode_solver.initial_slope(cutoff - 1e-6, base, N=3) > 0.0
    assert ode_solver.initial_slope(cutoff + 1e-6, base, N=3) < 0.0


@pytest.mark.parametrize(
    "key,expected",
    [
        ["M", 1.4],
        ["g1", 0.1],
        ["g2", -0.32],
        ["g3", 0.235714],
    ],
)
def test_z_coefficients(base, key: str, expected: float):
    values = dict(
        zip(("M", "g1", "g2", "g3"), ode_solver.z_coefficients(0.0, 0.5, base))
    )
    assert float(values[key]) == pytest.approx(expected, abs=1e-6)


def test_path_completes(base_path):
    assert base_path.T_hat == 0.0
    assert base_path.T_bar == pytest.approx(1.3347, abs=1e-3)
    assert base_path.rho[0] == 0.0
    assert base_path.rho[-1] == 1.0
    assert base_path.F_H[-1] == pytest.approx(1.0)


def test_path_is_monotone(base_path):
    assert np.all(np.diff(base_path.t_grid) > 0.0)
    assert np.all(np.diff(base_path.rho) >= 0.0)
    assert np.all(np.diff(base_path.F_H) >= 0.0)
    assert np.all(np.diff(base_path.F_L) >= 0.0)
    assert base_path.F_L[-1] < base_path.F_H[-1]


def test_set_q_path(set_q_path):
    assert set_q_path.T_bar == pytest.approx(0.5685, abs=1e-3)


@pytest.mark.parametrize(
    "params_name,p0",
    [
        ["base", 0.5],
        ["base", 0.55],
        ["base", 0.6],
        ["set_q", 0.55],
        ["set_q", 0.6],
        ["set_q", 0.7],
    ],
)
def test_indifference_holds_along_path(
    request, controls, params_name: str, p0: float
):
    params = request.getfixturevalue(params_name)
    assert controls.ode_step == 1e-4
    path = ode_solver.solve_master_ode(p0, params, controls=controls)
    assert ode_solver.indifference_residual(path, params) < 1e-8


def test_z_transform_check(base_path, base):
    assert ode_solver.z_transform_check(base_path, base) < 1e-4


def test_z_transform_rejects_late_start(base, controls):
    path = ode_solver.solve_master_ode(0.5, base, T_hat=1.0, controls=controls)
    assert path.T_hat == 1.0
    with pytest.raises(HypothesisViolation):
        ode_solver.z_transform_check(path, base)


def test_build_path_recovers_f_l(base_path, base):
    rebuilt = ode_solver.build_path(0.5, base_path.t_grid, base_path.rho, base)
    assert rebuilt.T_bar == base_path.T_bar
    np.testing.assert_allclose(rebuilt.F_H, base_path.F_H)
    np.testing.assert_allclose(rebuilt.F_L[:-3], base_path.F_L[:-3], atol=1e-4)


def test_no_randomization_above_p_tilde(base, controls):
    p0 = static_cutoffs(base).p_tilde + 0.01
    with pytest.raises(NoRandomization) as exc:
        ode_solver.solve_master_ode(p0, base, controls=controls)
    assert exc.value.fields["slope"] < 0.0


def test_mixed_learning_needs_two_players(base):
    with pytest.raises(HypothesisViolation):
        ode_solver.solve_master_ode(0.04, base, beta=0.4, N=3)
