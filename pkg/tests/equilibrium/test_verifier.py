from collective.waldgame import _types as t
from collective.waldgame import verifier as v
from collective.waldgame.cutoffs import randomization_window
from collective.waldgame.equilibrium import build_equilibrium
from collective.waldgame.extensions import competition_equilibrium
from collective.waldgame.single_dm import dm_cutoffs
from collective.waldgame.single_dm import dm_value

import numpy as np
import pytest


def test_induced_distribution_immediate_r(base, verifier):
    dist = v.induced_distribution(t.MixedStrategy.immediate_r(), base, verifier)
    assert dist.t[0] == 0.0
    assert np.all(dist.F_H == 1.0)
    assert np.all(dist.F_L == 1.0)
    assert dist.F_H_left[0] == 0.0
    assert dist.atom_R0 == 1.0


def test_induced_distribution_immediate_s(base, verifier):
    dist = v.induced_distribution(t.MixedStrategy.immediate_s(), base, verifier)
    assert np.all(dist.F_H == 0.0)
    assert np.all(dist.G_H == 1.0)
    assert np.all(dist.G_L == 1.0)


def test_induced_distribution_of_a_pure_learner(base, verifier):
    dist = v.induced_distribution(t.MixedStrategy(), base, verifier)
    np.testing.assert_allclose(dist.F_H, 1.0 - np.exp(-base.a * dist.t))
    np.testing.assert_allclose(dist.G_L, 1.0 - np.exp(-base.b * dist.t))
    assert np.all(dist.F_L == 0.0)


@pytest.mark.parametrize(
    "action,F_H_after,F_L_after",
    [
        [t.Action.R, 1.0, np.exp(-0.8)],
        [t.Action.S, 1.0 - np.exp(-0.6), 0.0],
    ],
)
def test_induced_distribution_deadline(
    base, verifier, action: t.Action, F_H_after: float, F_L_after: float
):
    dist = v.induced_distribution(v.with_interior_atom(1.0, action), base, verifier)
    index = int(np.searchsorted(dist.t, 1.0))
    assert dist.t[index] == 1.0
    assert dist.F_H[index] == pytest.approx(F_H_after)
    assert dist.F_L[index] == pytest.approx(F_L_after)
    assert dist.F_H_left[index] == pytest.approx(1.0 - np.exp(-0.6))


def test_stop_value_at_time_zero(base, verifier):
    dist = v.induced_distribution(t.MixedStrategy.immediate_s(), base, verifier)
    assert v.stop_value(0.0, t.Action.R, dist, 0.3, base) == pytest.approx(-0.4)
    assert v.stop_value(0.0, t.Action.S, dist, 0.3, base) == pytest.approx(0.0)


def test_clash_penalty_against_immediate_r(base, verifier):
    dist = v.induced_distribution(t.MixedStrategy.immediate_r(), base, verifier)
    value = v.stop_value(0.0, "R", dist, 0.9, base)
    assert value == pytest.approx(0.9 * 0.5 + 0.1 * (-1.5))


@pytest.mark.parametrize("p0", [0.1, 0.3, 0.6, 0.9])
def test_sweep_against_a_quitter_is_the_single_dm_problem(
    base, controls, verifier, p0: float
):
    solution = dm_cutoffs(base, controls)
    report = v.best_response_sweep(t.MixedStrategy.immediate_s(), p0, base, verifier)
    assert report.max_value == pytest.approx(dm_value(p0, solution, base), abs=2e-4)


@pytest.mark.parametrize(
    "regime,p0",
    [
        [t.Regime.IMMEDIATE_S, 0.02],
        [t.Regime.IMMEDIATE_R, 0.9],
    ],
)
def test_immediate_profiles_are_certified(
    base, controls, verifier, regime: t.Regime, p0: float
):
    profile = build_equilibrium(regime, p0, base, controls=controls)
    certificate = v.check_equilibrium(profile, base, verifier)
    assert certificate.certified
    assert certificate.indifferent
    assert certificate.deviation_gain <= verifier.eps


@pytest.mark.parametrize("T_hat", [0.0, 0.25, 0.5])
def test_random_stopping_support_is_indifferent(set_q, controls, verifier, T_hat):
    profile = build_equilibrium(
        t.Regime.RANDOM_STOPPING, 0.6, set_q, T_hat=T_hat, controls=controls
    )
    certificate = v.check_equilibrium(profile, set_q, verifier)
    assert certificate.indifferent
    assert certificate.support_gap <= verifier.eps


def test_competition_profile_is_certified(intense_set, controls):
    profile = competition_equilibrium(0.3, intense_set, controls)
    loose = t.VerifierControls(eps=1e-3)
    certificate = v.check_equilibrium(profile, intense_set, loose)
    assert certificate.certified
    assert certificate.to_dict()["regime"] == "pure-learning"


def test_sweep_against_immediate_r_reports_argmax(base, verifier):
    report = v.best_response_sweep(t.MixedStrategy.immediate_r(), 0.9, base, verifier)
    assert report.argmax_set[0] == 0.0
    assert report.certified
    assert report.value_curve.shape == report.t.shape


def test_value_envelope_is_conditional_value(base, verifier):
    dist = v.induced_distribution(t.MixedStrategy.immediate_s(), base, verifier)
    curves = v.value_curves(dist, 0.3, base)
    envelope = v.value_envelope(curves)
    assert envelope[0] == pytest.approx(np.max(curves.best))
    assert np.all(envelope >= (curves.best - curves.integral) / curves.survival)


def test_hjb_residual_against_a_quitter(base, verifier):
    profile = t.EquilibriumProfile(
        regime=t.Regime.IMMEDIATE_S, prior=0.3, strategy=t.MixedStrategy.immediate_s()
    )
    report = v.hjb_residual(profile, base, verifier)
    assert report.learning_max < 1e-3
    assert report.stopping_max <= 1e-9
    assert report.residual.shape == report.t.shape


@pytest.mark.parametrize("share", [0.5, 0.75, 1.0])
def test_every_start_in_the_window_is_an_equilibrium(
    set_q, controls, verifier, share: float
):
    window = randomization_window(0.4, set_q, controls)
    T_hat = window.T_l + share * (window.T_r - window.T_l)
    profile = build_equilibrium(
        t.Regime.RANDOM_STOPPING, 0.4, set_q, T_hat=T_hat, controls=controls
    )
    certificate = v.check_equilibrium(profile, set_q, verifier)
    assert verifier.eps == 1e-4
    assert certificate.certified


def test_earliest_start_is_indifferent_but_not_certified(set_q, controls, verifier):
    window = randomization_window(0.4, set_q, controls)
    profile = build_equilibrium(
        t.Regime.RANDOM_STOPPING, 0.4, set_q, T_hat=window.T_l, controls=controls
    )
    certificate = v.check_equilibrium(profile, set_q, verifier)
    assert certificate.indifferent
    assert not certificate.certified
    assert min(certificate.argmax) > profile.constants["T_bar"]
