"""
Error hierarchy for collective.waldgame.

Every domain failure is a ``WaldGameError`` carrying the structured fields the
CLI reports as machine-readable JSON.
"""

from typing import Any


class WaldGameError(RuntimeError):
    """Base class for all domain errors.

    Attributes:
        fields: Structured diagnostics attached to the error
    """

    def __init__(self, message: str, **fields: Any):
        super().__init__(message)
        self.fields = fields

    def to_dict(self) -> dict[str, Any]:
        """Machine-readable representation of the error."""
        return {"error": type(self).__name__, "message": str(self), **self.fields}


class InvalidParameters(WaldGameError):
    """A model primitive violates one of the standing assumptions."""

    def __init__(self, message: str, constraint: str):
        super().__init__(message, constraint=constraint)


class RegimeMismatch(WaldGameError):
    """Operation requested outside the regime it is defined for."""


class OutOfRange(WaldGameError):
    """A prior or time lies outside the interval an operation accepts."""

    def __init__(self, message: str, value: float, lower: float, upper: float):
        super().__init__(message, value=value, lower=lower, upper=upper)


class NoLearningRegion(WaldGameError):
    """The cost is so high that the single decision maker never learns."""

    def __init__(self, c_bar: float):
        super().__init__(
            f"No learning region: cost must be below c_bar = {c_bar!r}", c_bar=c_bar
        )
        self.c_bar = c_bar


class UndefinedCutoff(WaldGameError):
    """A cutoff formula has no admissible value."""

    def __init__(self, name: str, reason: str):
        super().__init__(f"{name} undefined: {reason}", cutoff=name, reason=reason)


class NoPositiveWindow(WaldGameError):
    """The prior is above the randomization cutoff, no start time exists."""


class Infeasible(WaldGameError):
    """A construction has no solution for these inputs."""


class NotFound(WaldGameError):
    """A bracketed search found no sign change."""


class NoRandomization(WaldGameError):
    """The stopping rate at the start of randomization is not positive."""

    def __init__(self, slope: float, start: float):
        super().__init__(
            f"Initial stopping rate {slope!r} at t = {start!r} is not positive",
            slope=slope,
            start=start,
        )


class MonotonicityBreak(WaldGameError):
    """The stopping rate turned non-positive before the path completed."""

    def __init__(self, time: float, rho: float, rate: float):
        super().__init__(
            f"Stopping rate {rate!r} at t = {time!r} with rho = {rho!r}",
            time=time,
            rho=rho,
            rate=rate,
        )


class HypothesisViolation(WaldGameError):
    """A structural hypothesis of a construction does not hold."""


class ConfigError(WaldGameError):
    """A run file cannot be parsed or validated."""


class UnknownCommand(WaldGameError):
    """Dispatch was asked for a command that does not exist."""


__all__ = [
    "ConfigError",
    "HypothesisViolation",
    "Infeasible",
    "InvalidParameters",
    "MonotonicityBreak",
    "NoLearningRegion",
    "NoPositiveWindow",
    "NoRandomization",
    "NotFound",
    "OutOfRange",
    "RegimeMismatch",
    "UndefinedCutoff",
    "UnknownCommand",
    "WaldGameError",
]
