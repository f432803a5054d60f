"""
Regime classification and construction of symmetric equilibrium profiles.

Each regime condition is evaluated on its own; overlapping conditions are all
reported, and an empty classification comes with the nearest boundary.
"""

from collections.abc import Callable
from collective.waldgame import _types as t
from collective.waldgame import logger
from collective.waldgame.cutoffs import beta_mixed_learning
from collective.waldgame.cutoffs import fixed_point_pstar
from collective.waldgame.cutoffs import immediate_mix_prob
from collective.waldgame.cutoffs import learning_value
from collective.waldgame.cutoffs import p_nr
from collective.waldgame.cutoffs import randomization_window
from collective.waldgame.cutoffs import static_cutoffs
from collective.waldgame.cutoffs import t_r
from collective.waldgame.exceptions import NoPositiveWindow
from collective.waldgame.exceptions import OutOfRange
from collective.waldgame.exceptions import RegimeMismatch
from collective.waldgame.exceptions import WaldGameError
from collective.waldgame.ode_solver import solve_master_ode
from collective.waldgame.single_dm import dm_cutoffs
from collective.waldgame.utils import default_controls
from typing import Any


def _maybe(compute: Callable[[], Any]) -> Any:
    try:
        return compute()
    except WaldGameError as exc:
        logger.debug(f"Cutoff undefined: {exc}")
        return None


def regime_cutoffs(
    params: t.ModelParams, controls: t.SolverControls | None = None
) -> dict[str, float | None]:
    """Cutoffs behind the regime conditions, None where undefined."""
    controls = controls or default_controls()
    static = _maybe(lambda: static_cutoffs(params))
    cutoffs: dict[str, float | None] = {
        "p_und": _maybe(lambda: dm_cutoffs(params, controls).p_und),
        "p_star": _maybe(lambda: fixed_point_pstar(params, controls)),
        "p_tilde": static.p_tilde if static else None,
        "p_L": static.p_L if static else None,
        "p_M": static.p_M if static else None,
    }
    if params.regime is t.AssumptionRegime.INTENSE:
        cutoffs["p_nr"] = _maybe(lambda: p_nr(params, controls))
    return cutoffs


def _between(lower: float | None, value: float, upper: float | None) -> bool:
    return lower is not None and upper is not None and lower < value < upper


def classify(
    p0: float, params: t.ModelParams, controls: t.SolverControls | None = None
) -> t.Classification:
    """Every regime whose defining condition holds at the prior."""
    cutoffs = regime_cutoffs(params, controls)
    p_und, p_star = cutoffs["p_und"], cutoffs["p_star"]
    p_tilde, p_L, p_M = cutoffs["p_tilde"], cutoffs["p_L"], cutoffs["p_M"]
    regimes: list[t.Regime] = []
    if p_und is not None and p0 <= p_und:
        regimes.append(t.Regime.IMMEDIATE_S)
    if _between(p_und, p0, p_star):
        regimes.append(t.Regime.MIXED_LEARNING)
    if p_star is not None and p_tilde is not None and p_star <= p0 < p_tilde:
        regimes.append(t.Regime.RANDOM_STOPPING)
    # without p^M the time-zero mix covers every prior above p^L
    if _between(p_L, p0, 1.0 if p_M is None else p_M):
        regimes.append(t.Regime.IMMEDIATE_MIX)
    if p_M is not None and p0 >= p_M:
        regimes.append(t.Regime.IMMEDIATE_R)
    if "p_nr" in cutoffs and _between(cutoffs["p_nr"], p0, p_tilde):
        regimes.append(t.Regime.PURE_LEARNING)

    warnings = []
    if params.b >= 2 * params.a:
        warnings.append(
            f"b >= 2a (a={params.a!r}, b={params.b!r}): paths may not rise"
        )
    if params.regime is t.AssumptionRegime.INTENSE:
        warnings.append("Intense regime: the time-zero regimes assume a gentle model")
    for warning in warnings:
        logger.warning(warning)

    diagnostics = {}
    if not regimes:
        distances = {
            name: abs(p0 - value)
            for name, value in cutoffs.items()
            if value is not None
        }
        if distances:
            nearest = min(distances, key=distances.__getitem__)
            diagnostics = {"nearest": nearest, "distance": distances[nearest]}
    return t.Classification(
        prior=p0,
        regimes=tuple(regimes),
        cutoffs=cutoffs,
        warnings=warnings,
        diagnostics=diagnostics,
    )


def _reject(regime: t.Regime, classification: t.Classification):
    raise RegimeMismatch(
        f"Regime {regime.value} does not apply at p0 = {classification.prior!r}",
        regime=regime.value,
        applicable=[item.value for item in classification.regimes],
    )


def _random_stopping(
    p0: float,
    params: t.ModelParams,
    T_hat: float | None,
    controls: t.SolverControls,
) -> t.EquilibriumProfile:
    requested = T_hat
    try:
        window = randomization_window(p0, params, controls)
    except NoPositiveWindow:
        if T_hat is None:
            raise
        # a dead start reports NoRandomization before the missing window
        solve_master_ode(p0, params, T_hat=T_hat, controls=controls)
        raise
    if T_hat is None:
        T_hat = window.midpoint
    elif not window.T_l - controls.bisect_tol <= T_hat <= window.T_r:
        raise OutOfRange(
            f"Start {T_hat!r} outside the randomization window",
            value=T_hat,
            lower=window.T_l,
            upper=window.T_r,
        )
    # the stopping rate vanishes at T_r, so the last start is pulled inward
    T_hat = min(T_hat, (1.0 - controls.start_margin) * window.T_r)
    if requested is not None and T_hat != requested:
        logger.info(f"Start {requested} moved inside the window to {T_hat}")
    path = solve_master_ode(p0, params, T_hat=T_hat, controls=controls)
    return t.EquilibriumProfile(
        regime=t.Regime.RANDOM_STOPPING,
        prior=p0,
        strategy=t.MixedStrategy(path=path),
        constants={
            "T_hat": T_hat,
            "T_hat_requested": T_hat if requested is None else requested,
            "T_bar": path.T_bar,
            "T_l": window.T_l,
            "T_r": window.T_r,
        },
    )


def _mixed_learning(
    p0: float, params: t.ModelParams, controls: t.SolverControls
) -> t.EquilibriumProfile:
    beta = beta_mixed_learning(p0, params, controls)
    T_r_beta = t_r(p0, params, beta=beta, controls=controls)
    T_hat = (1.0 - controls.start_margin) * T_r_beta
    path = solve_master_ode(p0, params, beta=beta, T_hat=T_hat, controls=controls)
    return t.EquilibriumProfile(
        regime=t.Regime.MIXED_LEARNING,
        prior=p0,
        strategy=t.MixedStrategy(atom_S0=beta, path=path),
        constants={
            "beta": beta,
            "T_hat": T_hat,
            "T_bar": path.T_bar,
            "T_r_beta": T_r_beta,
        },
    )


def build_equilibrium(
    regime: t.Regime,
    p0: float,
    params: t.ModelParams,
    T_hat: float | None = None,
    controls: t.SolverControls | None = None,
) -> t.EquilibriumProfile:
    """Assemble the symmetric profile of a regime at a prior.

    Args:
        regime: Requested regime
        p0: Prior
        params: Model parameters
        T_hat: Start of randomization for random stopping, midpoint of the
            window when omitted; starts past (1 - start_margin) T_r are
            moved back to it
        controls: Solver controls

    Raises:
        RegimeMismatch: when the regime condition does not hold at p0
        OutOfRange: when T_hat lies outside the randomization window
    """
    controls = controls or default_controls()
    logger.debug(f"Building {regime.value} profile at p0 = {p0}")
    if regime is t.Regime.PURE_LEARNING:
        from collective.waldgame.extensions import competition_equilibrium

        return competition_equilibrium(p0, params, controls)
    if regime is t.Regime.RANDOM_STOPPING and T_hat is not None:
        profile = _random_stopping(p0, params, T_hat, controls)
        classification = classify(p0, params, controls)
        if regime not in classification.regimes:
            _reject(regime, classification)
        return profile

    classification = classify(p0, params, controls)
    if regime not in classification.regimes:
        _reject(regime, classification)
    match regime:
        case t.Regime.IMMEDIATE_S:
            return t.EquilibriumProfile(
                regime=regime, prior=p0, strategy=t.MixedStrategy.immediate_s()
            )
        case t.Regime.IMMEDIATE_R:
            return t.EquilibriumProfile(
                regime=regime, prior=p0, strategy=t.MixedStrategy.immediate_r()
            )
        case t.Regime.IMMEDIATE_MIX:
            q = immediate_mix_prob(p0, params)
            return t.EquilibriumProfile(
                regime=regime,
                prior=p0,
                strategy=t.MixedStrategy(atom_R0=q, atom_S0=1.0 - q),
                constants={"q": q},
            )
        case t.Regime.RANDOM_STOPPING:
            return _random_stopping(p0, params, None, controls)
        case t.Regime.MIXED_LEARNING:
            return _mixed_learning(p0, params, controls)
    raise RegimeMismatch(f"Unknown regime {regime!r}", regime=str(regime))


def w_value(
    time: t.FloatOrArray,
    T_hat: float,
    beta: float,
    p0: float,
    params: t.ModelParams,
):
    """Value of learning at ``time`` before randomization starts at T_hat."""
    return learning_value(time, p0, T_hat, params, beta=beta)
