"""The record every check produces, with one shared pass rule."""

from __future__ import annotations

from dataclasses import dataclass


def slack_bound(rhs: float, tol: float) -> float:
    """A check passes iff slack >= -slack_bound(rhs, tol)."""
    return tol * max(1.0, abs(rhs))


@dataclass(frozen=True)
class CheckResult:
    """One inequality or identity check.

    For inequality checks, slack = rhs - lhs; for identity checks, slack is
    minus the absolute deviation; for spectrum checks, slack is the minimum
    eigenvalue.  In every case: passed iff slack >= -tol * max(1, |rhs|).
    """

    lhs: float
    rhs: float
    slack: float
    tol: float
    passed: bool
    trial_seed: int = 0

    def __post_init__(self):
        if not (self.tol >= 0):
            raise ValueError(f"tol must be nonnegative, got {self.tol!r}")
        expected = self.slack >= -slack_bound(self.rhs, self.tol)
        if bool(self.passed) != expected:
            raise ValueError("pass flag disagrees with the slack rule")
