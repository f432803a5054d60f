from collective.waldgame import _types as t
from collective.waldgame import two_period
from collective.waldgame.exceptions import InvalidParameters
from collective.waldgame.model_core import validate_params

import pytest


def test_posterior(base):
    assert two_period.two_period_posterior(0.5, base) == pytest.approx(2.0 / 3.0)


@pytest.mark.parametrize(
    "opponent,pay_R0,pay_learn",
    [
        [t.Opponent.S0, 0.0, 0.375],
        [t.Opponent.R0, -0.5, 0.065],
        [t.Opponent.LEARN, 0.0, 0.125],
    ],
)
def test_payoffs_at_even_prior(
    base, opponent: t.Opponent, pay_R0: float, pay_learn: float
):
    payoffs = two_period.two_period_payoffs(0.5, opponent, base)
    assert payoffs.pay_R0 == pytest.approx(pay_R0)
    assert payoffs.pay_S0 == 0.0
    assert payoffs.pay_learn == pytest.approx(pay_learn)


@pytest.mark.parametrize(
    "opponent,count",
    [
        [t.Opponent.S0, 4],
        [t.Opponent.R0, 4],
        [t.Opponent.LEARN, 8],
    ],
)
def test_branches_cover_every_outcome(base, opponent: t.Opponent, count: int):
    payoffs = two_period.two_period_payoffs(0.3, opponent, base)
    assert len(payoffs.branches) == count
    assert sum(b.probability for b in payoffs.branches) == pytest.approx(1.0)
    expected = sum(b.probability * b.payoff for b in payoffs.branches)
    assert payoffs.pay_learn == pytest.approx(expected)


@pytest.mark.parametrize(
    "opponent,lower,upper",
    [
        ["S0", 0.04167, 0.96874],
        ["R0", 0.13889, 0.83455],
        ["Learn", 0.05953, 0.58984],
    ],
)
def test_learning_regions(base, opponent: str, lower: float, upper: float):
    region = two_period.two_period_regions(opponent, base)
    assert region[0] == pytest.approx(lower, abs=1e-4)
    assert region[1] == pytest.approx(upper, abs=1e-4)


def test_learning_regions_are_nested(base):
    regions = {
        opponent: two_period.two_period_regions(opponent, base)
        for opponent in t.Opponent
    }
    widths = {key: upper - lower for key, (lower, upper) in regions.items()}
    s0 = regions[t.Opponent.S0]
    for opponent in (t.Opponent.R0, t.Opponent.LEARN):
        lower, upper = regions[opponent]
        assert s0[0] < lower < upper < s0[1]
    assert widths[t.Opponent.S0] > widths[t.Opponent.R0] > widths[t.Opponent.LEARN]


def test_payoffs_report_crossings(base):
    payoffs = two_period.two_period_payoffs(0.5, "Learn", base)
    assert payoffs.crossings == two_period.two_period_regions("Learn", base)


def test_payoffs_scan_the_prior_grid_once(base_values, monkeypatch):
    params = validate_params({**base_values, "c": 0.02})
    scans = []
    scan = two_period._scan_regions

    def counting_scan(opponent, model, grid):
        scans.append(opponent)
        return scan(opponent, model, grid)

    monkeypatch.setattr(two_period, "_scan_regions", counting_scan)
    crossings = {
        two_period.two_period_payoffs(p0, "R0", params).crossings
        for p0 in (0.2, 0.5, 0.8)
    }
    assert len(crossings) == 1
    assert scans == [t.Opponent.R0]


def test_no_learning_region_when_signals_are_dear(base_values):
    params = validate_params({**base_values, "c": 0.5})
    assert two_period.two_period_regions(t.Opponent.S0, params) is None


def test_rates_must_be_probabilities(base_values):
    params = validate_params({**base_values, "b": 1.2})
    with pytest.raises(InvalidParameters) as exc:
        two_period.two_period_payoffs(0.5, t.Opponent.S0, params)
    assert exc.value.fields["constraint"] == "0 < b < 1"


def test_curves(base):
    rows = two_period.two_period_curves(t.Opponent.R0, base)
    assert len(rows) == 199
    assert rows[0]["p0"] == pytest.approx(0.005)
    assert set(rows[0]) == {"p0", "pay_R0", "pay_S0", "pay_learn"}
