"""
Type definitions for the collective.waldgame package.

This module contains the dataclasses, enums and typed dictionaries shared by
the numerical modules, the verifier, the simulator and the command line.
"""

from collective.waldgame import logger
from dataclasses import dataclass
from dataclasses import field
from enum import StrEnum
from pathlib import Path
from rich.console import Console
from typing import Any
from typing import TypedDict

import logging
import numpy as np
import numpy.typing as npt


FloatArray = npt.NDArray[np.float64]
FloatOrArray = float | FloatArray


class AssumptionRegime(StrEnum):
    """Which payoff assumption a validated model satisfies.

    GENTLE: the second R taker in state H still beats the safe payoff.
    INTENSE: the second R taker in state H is worse off than the safe payoff.
    """

    GENTLE = "gentle"
    INTENSE = "intense"


class Action(StrEnum):
    R = "R"
    S = "S"


class DmAction(StrEnum):
    TAKE_S = "TakeS"
    LEARN = "Learn"
    TAKE_R = "TakeR"


class Regime(StrEnum):
    IMMEDIATE_S = "immediate-s"
    IMMEDIATE_R = "immediate-r"
    IMMEDIATE_MIX = "immediate-mix"
    RANDOM_STOPPING = "random-stopping"
    MIXED_LEARNING = "mixed-learning"
    PURE_LEARNING = "pure-learning"


class Opponent(StrEnum):
    """Opponent behaviour in the two-period example."""

    S0 = "S0"
    R0 = "R0"
    LEARN = "Learn"


@dataclass(frozen=True)
class ModelParams:
    """Payoff, signal and cost primitives of the game.

    Attributes:
        u_H: First prize in state H
        u_L: First prize in state L
        dbar_H: Second-taker penalty in state H
        dbar_L: Second-taker penalty in state L
        dund_H: Simultaneous-taker penalty in state H
        dund_L: Simultaneous-taker penalty in state L
        a: Rate of the H-revealing signal
        b: Rate of the L-revealing signal
        c: Flow cost of information
        u_S: Safe payoff
        N: Number of players
        regime: Assumption regime recorded by validation
    """

    u_H: float
    u_L: float
    dbar_H: float
    dbar_L: float
    dund_H: float
    dund_L: float
    a: float
    b: float
    c: float
    u_S: float = 0.0
    N: int = 2
    regime: AssumptionRegime | None = None

    @property
    def g(self) -> float:
        """Gain of the safe action over a first R in state L."""
        return self.u_S - self.u_L

    @property
    def h(self) -> float:
        """Gain of a first R in state H over the safe action."""
        return self.u_H - self.u_S

    def to_dict(self) -> dict[str, Any]:
        return {
            "u_H": self.u_H,
            "u_L": self.u_L,
            "dbar_H": self.dbar_H,
            "dbar_L": self.dbar_L,
            "dund_H": self.dund_H,
            "dund_L": self.dund_L,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "u_S": self.u_S,
            "N": self.N,
        }


@dataclass(frozen=True)
class Belief:
    """Probability of state H together with its likelihood ratio.

    Attributes:
        p: Probability that the state is H
        L: Likelihood ratio p / (1 - p), infinite at p = 1
    """

    p: float
    L: float

    @classmethod
    def from_probability(cls, p: float) -> "Belief":
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Probability {p!r} outside [0, 1]")
        L = np.inf if p == 1.0 else p / (1.0 - p)
        return cls(p=p, L=float(L))

    @classmethod
    def from_likelihood(cls, L: float) -> "Belief":
        if L < 0:
            raise ValueError(f"Likelihood ratio {L!r} is negative")
        p = 1.0 if np.isinf(L) else L / (1.0 + L)
        return cls(p=p, L=L)


SurvivalProb = float


@dataclass(frozen=True)
class SolverControls:
    """Numerical controls of root finding and ODE integration.

    Attributes:
        ode_step: Nominal RK4 step in model time
        scan_step: Step of the forward scans locating first crossings
        bisect_tol: Absolute tolerance of bisections on priors, times and mixtures
        root_tol: Tolerance of the likelihood-ratio root of the lower cutoff
        horizon: Largest time a scan or an integration may reach
        max_iter: Bisection iteration cap
        max_rho_step: Largest change of rho allowed in one RK4 step
        start_margin: Relative distance kept from the upper end of the window
    """

    ode_step: float = 1e-4
    scan_step: float = 1e-3
    bisect_tol: float = 1e-10
    root_tol: float = 1e-12
    horizon: float = 200.0
    max_iter: int = 200
    max_rho_step: float = 1e-3
    start_margin: float = 1e-2


@dataclass(frozen=True)
class VerifierControls:
    """Controls of best-response sweeps.

    Attributes:
        eps: Certification tolerance in payoff units
        sweep_step: Step of the uniform part of the sweep grid
        sweep_horizon: Last deviation time considered
    """

    eps: float = 1e-4
    sweep_step: float = 1e-3
    sweep_horizon: float = 60.0


@dataclass(frozen=True)
class SimulationControls:
    """Controls of the Monte Carlo engine.

    Attributes:
        reps: Number of replications
        seed: Root seed of every random stream
        report_step: Step of the grid the empirical CDFs are reported on
        chunk_size: Replications drawn per vectorised chunk
    """

    reps: int = 100_000
    seed: int = 42
    report_step: float = 0.5
    chunk_size: int = 65536


@dataclass(frozen=True)
class DmSolution:
    """Free-boundary solution of the single decision maker.

    Attributes:
        p_bar: Upper boundary, R is taken at or above it
        p_und: Lower boundary, S is taken at or below it
        K: Free constant of the learning-region value function
        c_bar: Largest cost with a learning region
        L_bar: Likelihood ratio of p_bar
        L_und: Likelihood ratio of p_und
        exponent: Power b / (b - a) of the homogeneous solution
    """

    p_bar: float
    p_und: float
    K: float
    c_bar: float
    L_bar: float
    L_und: float
    exponent: float


@dataclass(frozen=True)
class PastingResiduals:
    """Residual diagnostics of the single decision maker solution.

    Attributes:
        value_upper: |V(p_bar) - U_R(p_bar)|
        slope_upper: |V'(p_bar) - U_R'(p_bar)|
        value_lower: |V(p_und) - u_S|
        slope_fd: Largest gap between analytic and centered-difference slopes
        learning_ode: Largest |H| inside the learning region
        upper_region: Largest H on the R region (must be <= 0)
        lower_region: Largest H on the S region (must be <= 0)
        kink: Largest H over the test slopes at p_und (must be <= 0)
        convexity: Smallest second difference of V on the learning region
    """

    value_upper: float
    slope_upper: float
    value_lower: float
    slope_fd: float
    learning_ode: float
    upper_region: float
    lower_region: float
    kink: float
    convexity: float

    @property
    def triple(self) -> tuple[float, float, float]:
        return (self.value_upper, self.slope_upper, self.value_lower)


@dataclass(frozen=True)
class StaticCutoffs:
    """Prior cutoffs that do not depend on the prior itself.

    Attributes:
        p_L: Prior where a first R breaks even with S
        p_M: Prior where a simultaneous R breaks even with S, None where a
            clash in state H never beats S
        p_tilde: Prior above which random stopping cannot start at zero
    """

    p_L: float
    p_M: float | None
    p_tilde: float


@dataclass(frozen=True)
class RandomizationWindow:
    """Admissible start times of random stopping.

    Attributes:
        T_l: Earliest start
        T_r: Latest start
    """

    T_l: float
    T_r: float

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.T_l + self.T_r)


class PathRow(TypedDict):
    t: float
    rho: float
    F_H: float
    F_L: float


@dataclass
class StrategyPath:
    """Dense solution of the equilibrium indifference ODE.

    Attributes:
        p0: Prior the path was solved for
        t_grid: Ascending times starting at T_hat
        rho: Conditional R-stopping CDF on the grid
        F_H: Probability of an opponent R by t in state H
        F_L: Probability of an opponent R by t in state L
        T_hat: Start of randomization
        T_bar: Time at which rho reaches 1 - beta
        beta: Time-zero S mass
        N: Number of players
    """

    p0: float
    t_grid: FloatArray
    rho: FloatArray
    F_H: FloatArray
    F_L: FloatArray
    T_hat: float
    T_bar: float
    beta: float = 0.0
    N: int = 2

    def header(self) -> dict[str, Any]:
        return {
            "T_hat": self.T_hat,
            "T_bar": self.T_bar,
            "beta": self.beta,
            "N": self.N,
            "p0": self.p0,
        }

    def rows(self) -> list[PathRow]:
        return [
            PathRow(t=float(t), rho=float(r), F_H=float(fh), F_L=float(fl))
            for t, r, fh, fl in zip(
                self.t_grid, self.rho, self.F_H, self.F_L, strict=True
            )
        ]


@dataclass
class MixedStrategy:
    """Symmetric mixed stopping strategy.

    Attributes:
        atom_R0: Mass taking R at time zero
        atom_S0: Mass taking S at time zero
        path: Continuous R-stopping part, absent for pure plans
        deadline: Time at which the remaining learners stop, if any
        terminal_action: Action taken at the deadline
    """

    atom_R0: float = 0.0
    atom_S0: float = 0.0
    path: StrategyPath | None = None
    deadline: float | None = None
    terminal_action: Action = Action.R

    def __post_init__(self):
        if min(self.atom_R0, self.atom_S0) < 0.0:
            raise ValueError("Atoms must be nonnegative")
        if self.atom_R0 + self.atom_S0 > 1.0 + 1e-12:
            raise ValueError("Time-zero atoms exceed one")
        if self.path is not None and self.deadline is not None:
            raise ValueError("A strategy has either a path or a deadline")

    @property
    def learning_mass(self) -> float:
        return max(0.0, 1.0 - self.atom_R0 - self.atom_S0)

    @classmethod
    def immediate_s(cls) -> "MixedStrategy":
        return cls(atom_S0=1.0)

    @classmethod
    def immediate_r(cls) -> "MixedStrategy":
        return cls(atom_R0=1.0)


@dataclass
class EquilibriumProfile:
    """Symmetric equilibrium candidate.

    Attributes:
        regime: Regime label
        prior: Prior the profile was built for
        strategy: Strategy used by every player
        constants: Supporting constants (q, beta, T_hat, T_bar, window)
    """

    regime: Regime
    prior: float
    strategy: MixedStrategy
    constants: dict[str, float | None] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        strategy = self.strategy
        return {
            "regime": self.regime.value,
            "prior": self.prior,
            "atom_R0": strategy.atom_R0,
            "atom_S0": strategy.atom_S0,
            "deadline": strategy.deadline,
            "terminal_action": strategy.terminal_action.value,
            "path": strategy.path.header() if strategy.path is not None else None,
            "constants": dict(self.constants),
        }


@dataclass
class Classification:
    """Regimes whose defining condition holds at a prior.

    Attributes:
        prior: Prior classified
        regimes: Every regime whose condition evaluated true
        cutoffs: Cutoffs used, None when undefined
        warnings: Unmet hypotheses that did not stop the evaluation
        diagnostics: Nearest boundary when no regime applies
    """

    prior: float
    regimes: tuple[Regime, ...]
    cutoffs: dict[str, float | None]
    warnings: list[str] = field(default_factory=list)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "prior": self.prior,
            "regimes": [regime.value for regime in self.regimes],
            "cutoffs": dict(self.cutoffs),
            "warnings": list(self.warnings),
            "diagnostics": dict(self.diagnostics),
        }


@dataclass
class InducedStopDistribution:
    """Opponent stopping distributions by state on a time grid.

    Values are right-continuous; the ``*_left`` arrays hold left limits and
    differ from the values only at atom times.

    Attributes:
        t: Strictly increasing grid starting at zero
        F_H: Opponent R by t in state H
        F_L: Opponent R by t in state L
        G_H: Opponent S by t in state H
        G_L: Opponent S by t in state L
        F_H_left: Left limits of F_H
        F_L_left: Left limits of F_L
        atom_R0: Opponent R mass at time zero
        atom_S0: Opponent S mass at time zero
    """

    t: FloatArray
    F_H: FloatArray
    F_L: FloatArray
    G_H: FloatArray
    G_L: FloatArray
    F_H_left: FloatArray
    F_L_left: FloatArray
    atom_R0: float
    atom_S0: float


@dataclass
class ValueCurves:
    """Payoff of every deterministic stop time against a fixed opponent.

    Attributes:
        t: Stop times
        integral: Accumulated flow payoff up to each stop time
        survival: Probability of no revealing signal up to each stop time
        R: Value of stopping with R
        S: Value of stopping with S
        best: Pointwise maximum of R and S
    """

    t: FloatArray
    integral: FloatArray
    survival: FloatArray
    R: FloatArray
    S: FloatArray
    best: FloatArray


@dataclass
class BestResponseReport:
    """Outcome of a best-response sweep.

    Attributes:
        t: Sweep grid
        value_curve: Value of stopping at each grid time with the best action
        max_value: Largest value on the grid
        argmax_set: Grid times attaining the maximum
        candidate_value: Value of the candidate strategy
        deviation_gain: max_value minus candidate_value
        certified: Whether the gain is within eps
        eps: Tolerance used
    """

    t: FloatArray
    value_curve: FloatArray
    max_value: float
    argmax_set: tuple[float, ...]
    candidate_value: float
    deviation_gain: float
    certified: bool
    eps: float


@dataclass
class Certificate:
    """Equilibrium certificate of a profile.

    Attributes:
        regime: Regime of the profile
        prior: Prior of the profile
        eps: Tolerance used
        certified: No deterministic deviation gains more than eps
        indifferent: Every support point yields the same value within eps
        deviation_gain: Best deviation value minus the profile value
        support_gap: Spread of values over the support
        max_value: Best deviation value
        candidate_value: Value of the profile strategy
        argmax: Times attaining the best deviation value
    """

    regime: Regime
    prior: float
    eps: float
    certified: bool
    indifferent: bool
    deviation_gain: float
    support_gap: float
    max_value: float
    candidate_value: float
    argmax: tuple[float, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "regime": self.regime.value,
            "prior": self.prior,
            "eps": self.eps,
            "certified": self.certified,
            "indifferent": self.indifferent,
            "deviation_gain": self.deviation_gain,
            "support_gap": self.support_gap,
            "max_value": self.max_value,
            "candidate_value": self.candidate_value,
            "argmax": list(self.argmax[:10]),
        }


@dataclass
class HjbReport:
    """Pointwise HJB residuals of a best-reply value function.

    Attributes:
        t: Evaluation times
        residual: |max{A + B - c, U - V}| per node, NaN where excluded
        stopping: Mask of nodes where the value equals the stopping payoff
        learning_max: Largest residual over included learning nodes
        stopping_max: Largest |U - V| over stopping nodes
    """

    t: FloatArray
    residual: FloatArray
    stopping: npt.NDArray[np.bool_]
    learning_max: float
    stopping_max: float


@dataclass
class SimulationReport:
    """Monte Carlo estimates of the game.

    Attributes:
        reps: Replications
        seed: Root seed
        mean_payoff: Mean payoff per player
        std_error: Standard error of each mean
        mean_stop_time: Mean stop time over both players
        mean_cost: Mean information cost over both players
        tie_frequency: Share of replications with a time-zero R clash
        float_ties: R coincidences at positive times, broken by a fair coin
        win_rate: Share of R takers who were first, by state
        win_rate_se: Standard error of each win rate
        grid: Reporting grid
        F_H_emp: Empirical share of R by t in state H
        F_L_emp: Empirical share of R by t in state L
        G_L_emp: Empirical share of S by t in state L
        state_counts: Player draws per state behind the empirical CDFs
        extra: Variant-specific counters
    """

    reps: int
    seed: int
    mean_payoff: tuple[float, float]
    std_error: tuple[float, float]
    mean_stop_time: float
    mean_cost: float
    tie_frequency: float
    float_ties: int
    win_rate: dict[str, float]
    win_rate_se: dict[str, float]
    grid: FloatArray
    F_H_emp: FloatArray
    F_L_emp: FloatArray
    G_L_emp: FloatArray
    state_counts: dict[str, int]
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "reps": self.reps,
            "seed": self.seed,
            "mean_payoff": list(self.mean_payoff),
            "std_error": list(self.std_error),
            "mean_stop_time": self.mean_stop_time,
            "mean_cost": self.mean_cost,
            "tie_frequency": self.tie_frequency,
            "float_ties": self.float_ties,
            "win_rate": dict(self.win_rate),
            "win_rate_se": dict(self.win_rate_se),
            "state_counts": dict(self.state_counts),
            "extra": dict(self.extra),
        }

    def rows(self) -> list[dict[str, float]]:
        return [
            {"t": float(t), "F_H_emp": float(fh), "F_L_emp": float(fl)}
            for t, fh, fl in zip(self.grid, self.F_H_emp, self.F_L_emp, strict=True)
        ]


@dataclass
class CompetitionSolution:
    """Pure learning equilibrium of the intense competition regime.

    Attributes:
        T_ps: Common deadline after which S is taken
        p_nr: Lower end of the prior interval
        prior: Prior the curves were computed for
        t: Grid on [0, T_ps]
        W_L: Value of learning until T_ps
        psi: Monotonicity check
        U_R: Value of taking R immediately
    """

    T_ps: float
    p_nr: float
    prior: float
    t: FloatArray
    W_L: FloatArray
    psi: FloatArray
    U_R: FloatArray

    def rows(self) -> list[dict[str, float]]:
        return [
            {"t": float(t), "W_L": float(w), "psi": float(s), "U_R": float(u)}
            for t, w, s, u in zip(self.t, self.W_L, self.psi, self.U_R, strict=True)
        ]


@dataclass
class MrssSpec:
    """Hazard and beliefs of the mimicking random stopping strategy.

    Attributes:
        prior: Prior the hazard was computed for
        t: Time grid
        hazard: Stopping rate, clipped to zero past the boundary
        belief: Belief after no signal and no observed action
        feasible: Mask where the unclipped hazard is positive
        boundary: Time at which the hazard reaches zero
        flags: Hypothesis and feasibility flags
    """

    prior: float
    t: FloatArray
    hazard: FloatArray
    belief: FloatArray
    feasible: npt.NDArray[np.bool_]
    boundary: float
    flags: dict[str, bool]

    def rows(self) -> list[dict[str, float]]:
        return [
            {"t": float(t), "hazard": float(h), "belief": float(p)}
            for t, h, p in zip(self.t, self.hazard, self.belief, strict=True)
        ]


@dataclass(frozen=True)
class Branch:
    """One leaf of the two-period enumeration.

    Attributes:
        probability: Joint probability of the leaf
        state: H or L
        own_signal: Signal observed by the learner, None when absent
        opponent_signal: Signal observed by a learning opponent
        payoff: Payoff to the learner on this leaf
    """

    probability: float
    state: str
    own_signal: str | None
    opponent_signal: str | None
    payoff: float


@dataclass
class TwoPeriodPayoffs:
    """Payoffs of the two-period example against one opponent behaviour.

    Attributes:
        prior: Prior evaluated
        opponent: Opponent behaviour
        pay_R0: Payoff of R at time zero
        pay_S0: Payoff of S at time zero
        pay_learn: Payoff of acquiring the signal
        crossings: Priors where pay_learn meets the best immediate action
        branches: Enumerated leaves behind pay_learn
    """

    prior: float
    opponent: Opponent
    pay_R0: float
    pay_S0: float
    pay_learn: float
    crossings: tuple[float, float] | None = None
    branches: tuple[Branch, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    """Resolved run file.

    Attributes:
        params: Validated model parameters
        prior: Prior used by prior-dependent commands
        controls: Solver controls
        verifier: Verifier controls
        simulation: Simulation controls
        out_dir: Directory receiving artifacts
    """

    params: ModelParams
    prior: float = 0.5
    controls: SolverControls = field(default_factory=SolverControls)
    verifier: VerifierControls = field(default_factory=VerifierControls)
    simulation: SimulationControls = field(default_factory=SimulationControls)
    out_dir: Path = Path(".")


@dataclass
class CommandResult:
    """Outcome of a dispatched command.

    Attributes:
        command: Command name
        summary: JSON-ready summary
        artifacts: Files written
    """

    command: str
    summary: dict[str, Any]
    artifacts: list[Path] = field(default_factory=list)


@dataclass
class ConsoleArea:
    """Terminal output of the command line.

    Attributes:
        main: Rich console receiving tables and summaries
        ui: Flag to enable/disable rich output
    """

    main: Console
    ui: bool = True

    def disable_ui(self):
        """Disable UI mode and redirect output to standard logging."""
        self.ui = False
        console = logging.StreamHandler()
        console.setLevel(logging.INFO)
        logger.addHandler(console)

    def print(self, message: Any) -> None:
        """Print to the console; without UI only plain strings reach the log."""
        if self.ui:
            self.main.print(message)
        elif isinstance(message, str):
            logger.info(message)

    def print_log(self, message: str) -> None:
        """Print a message to console and also log it."""
        if self.ui:
            self.print(message)
        logger.info(message)

    def debug(self, message: str) -> None:
        logger.debug(message)
