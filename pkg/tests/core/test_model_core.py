from collective.waldgame import _types as t
from collective.waldgame.exceptions import InvalidParameters
from collective.waldgame.model_core import belief_at
from collective.waldgame.model_core import likelihood_at
from collective.waldgame.model_core import no_signal_prob
from collective.waldgame.model_core import r_payoff
from collective.waldgame.model_core import validate_params

import math
import numpy as np
import pytest


def test_validate_params_expands_shared_penalties(base):
    assert base.dbar_H == base.dbar_L == 0.7
    assert base.dund_H == base.dund_L == 0.5
    assert base.u_S == 0.0
    assert base.N == 2


@pytest.mark.parametrize(
    "raw,expected",
    [
        ["base_values", t.AssumptionRegime.GENTLE],
        ["intense_values", t.AssumptionRegime.INTENSE],
    ],
)
def test_validate_params_regime(request, raw: str, expected):
    assert validate_params(request.getfixturevalue(raw)).regime is expected


@pytest.mark.parametrize(
    "override,constraint",
    [
        [{"a": 0.9}, "b > a > 0"],
        [{"a": 0.0}, "b > a > 0"],
        [{"c": -0.1}, "c > 0"],
        [{"dund": 0.8}, "dbar_H > dund_H > 0"],
        [{"dbar": 2.5, "dund": 0.5}, "assumption regime"],
        [{"N": 1}, "N >= 2"],
    ],
)
def test_validate_params_rejects(base_values, override: dict, constraint: str):
    with pytest.raises(InvalidParameters) as exc:
        validate_params({**base_values, **override})
    assert exc.value.fields["constraint"] == constraint


def test_validate_params_missing_key(base_values):
    raw = dict(base_values)
    raw.pop("c")
    with pytest.raises(InvalidParameters, match="Missing parameters: c"):
        validate_params(raw)


def test_validate_params_accepts_model_params(base):
    assert validate_params(base) == base


@pytest.mark.parametrize(
    "p0,time,expected",
    [
        [0.5, 0.0, 0.5],
        [0.5, 5.0, math.e / (1.0 + math.e)],
        [0.0, 3.0, 0.0],
        [1.0, 3.0, 1.0],
    ],
)
def test_belief_at(base, p0: float, time: float, expected: float):
    assert belief_at(p0, time, base) == pytest.approx(expected, abs=1e-15)


def test_belief_at_nondecreasing(base):
    beliefs = belief_at(0.3, np.linspace(0.0, 20.0, 101), base)
    assert np.all(np.diff(beliefs) >= 0.0)


def test_likelihood_at(base):
    assert likelihood_at(0.5, 5.0, base) == pytest.approx(math.e)
    assert math.isinf(likelihood_at(1.0, 1.0, base))


@pytest.mark.parametrize("time", [0.0, 0.5, 1.0, 4.0])
def test_no_signal_prob(base, time: float):
    expected = 0.4 * math.exp(-0.6 * time) + 0.6 * math.exp(-0.8 * time)
    assert no_signal_prob(0.4, time, base) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "p,F_H,F_L,atom_H,atom_L,expected",
    [
        [0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.75, 0.0, 0.0, 1.0, 1.0, 0.0],
        [0.5, 1.0, 1.0, 0.0, 0.0, -0.7],
        [1.0, 0.5, 0.0, 0.0, 0.0, 0.65],
    ],
)
def test_r_payoff(base, p, F_H, F_L, atom_H, atom_L, expected):
    value = r_payoff(p, F_H, F_L, base, atom_H=atom_H, atom_L=atom_L)
    assert value == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "p,L",
    [
        [0.5, 1.0],
        [0.0, 0.0],
        [1.0, math.inf],
    ],
)
def test_belief_from_probability(p: float, L: float):
    belief = t.Belief.from_probability(p)
    assert belief.L == L
    assert t.Belief.from_likelihood(belief.L).p == p


@pytest.mark.parametrize(
    "build,value",
    [
        [t.Belief.from_probability, 1.5],
        [t.Belief.from_likelihood, -0.1],
    ],
)
def test_belief_rejects_impossible_values(build, value: float):
    with pytest.raises(ValueError):
        build(value)

