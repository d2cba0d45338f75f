"""Trace-inequality checks and seeded randomized campaigns.

The central quantity is F(A) = log tr exp(A), computed on the spectrum as a
log-sum-exp so that nothing overflows.  The product-form trace inequality

    tr exp(A + B) <= tr exp(A) * tr exp(B)

is certified in the log domain: F(A + B) <= F(A) + F(B), slack = rhs - lhs.
Convexity of F is certified independently through midpoint residuals; the two
checks share no intermediate results.

A campaign runs `trials` independent checks.  Trial i derives its seed from
the master seed by the SplitMix64 finalizer (a fixed pure mixing function), so
any trial can be replayed in isolation and the report is identical whether or
not trials ran in parallel.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .checks import CheckResult, slack_bound
from .errors import CampaignTrialError, DimensionMismatch, Error
from .hermitian import (
    GENERATOR_ID,
    EnsembleSpec,
    HermitianMatrix,
    eigh,
    matrix_exp,
    random_hermitian,
    random_unitary,
    random_vector,
)
from .logsumexp import hessian_fd, lse, lse_hessian_analytic, psd_certify
from .spectral import builtin, check_davis_restriction, check_unitary_invariance, lift

CORE_CHECK_KINDS = (
    "GT_WEAK",
    "MIDPOINT_CONVEXITY",
    "HESSIAN_PSD",
    "UNITARY_INVARIANCE",
)

# GT_STRONG certifies tr exp(A+B) <= tr(exp A exp B), a tighter bound than the
# product form; supplementary, never run unless asked for.  The *_MATCH kinds
# back the compound CLI subcommands.
EXTRA_CHECK_KINDS = ("GT_STRONG", "HESSIAN_FD_MATCH", "DAVIS_RESTRICTION")

CHECK_KINDS = CORE_CHECK_KINDS + EXTRA_CHECK_KINDS

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def derive_seed(seed: int, index: int) -> int:
    """SplitMix64 output for stream position `index` of `seed`.

    Pure and documented so that trial seeds can be reproduced outside this
    package: mix64((seed + (index + 1) * gamma) mod 2^64) with the standard
    gamma 0x9E3779B97F4A7C15 and finalizer constants.
    """
    z = (seed + (index + 1) * _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def log_trace_exp(a: HermitianMatrix) -> float:
    """log tr exp(A) = lse(eigenvalues of A); finite for any finite spectrum."""
    return lse(eigh(a).eigenvalues)


def log_trace_exp_product(a: HermitianMatrix, b: HermitianMatrix) -> float:
    """log tr(exp A exp B), evaluated with both factors max-shifted.

    Shifting each matrix by its top eigenvalue keeps every entry of the two
    exponentials at most 1, so the trace of the product never overflows.
    """
    if a.n != b.n:
        raise DimensionMismatch(f"{a.n} x {a.n} vs {b.n} x {b.n}")
    ma = float(eigh(a).eigenvalues[-1])
    mb = float(eigh(b).eigenvalues[-1])
    ea = matrix_exp(a + (-ma) * identity(a.n))
    eb = matrix_exp(b + (-mb) * identity(b.n))
    t = float(np.trace(ea.entries @ eb.entries).real)
    return ma + mb + float(np.log(t))


def identity(n: int) -> HermitianMatrix:
    return HermitianMatrix(np.eye(n, dtype=np.complex128))


def gt_weak_check(
    a: HermitianMatrix, b: HermitianMatrix, tol: float = 1e-10
) -> CheckResult:
    """Certify log tr exp(A+B) <= log tr exp(A) + log tr exp(B)."""
    if a.n != b.n:
        raise DimensionMismatch(f"{a.n} x {a.n} vs {b.n} x {b.n}")
    lhs = log_trace_exp(a + b)
    rhs = log_trace_exp(a) + log_trace_exp(b)
    slack = rhs - lhs
    return CheckResult(lhs, rhs, slack, tol, slack >= -slack_bound(rhs, tol))


def gt_strong_check(
    a: HermitianMatrix, b: HermitianMatrix, tol: float = 1e-10
) -> CheckResult:
    """Certify log tr exp(A+B) <= log tr(exp A exp B).  Supplementary check."""
    lhs = log_trace_exp(a + b)
    rhs = log_trace_exp_product(a, b)
    slack = rhs - lhs
    return CheckResult(lhs, rhs, slack, tol, slack >= -slack_bound(rhs, tol))


def convexity_check(
    a: HermitianMatrix, b: HermitianMatrix, tol: float = 1e-10
) -> CheckResult:
    """Certify midpoint convexity of log_trace_exp on the segment [A, B]."""
    if a.n != b.n:
        raise DimensionMismatch(f"{a.n} x {a.n} vs {b.n} x {b.n}")
    lhs = log_trace_exp(0.5 * (a + b))
    rhs = 0.5 * (log_trace_exp(a) + log_trace_exp(b))
    slack = rhs - lhs
    return CheckResult(lhs, rhs, slack, tol, slack >= -slack_bound(rhs, tol))


@dataclass(frozen=True)
class CampaignConfig:
    """What to check, over which ensemble, how many times, at what tolerance.

    `fn` names the built-in used by UNITARY_INVARIANCE and DAVIS_RESTRICTION
    trials (default lse, the central object).  `parallel` only chooses the
    execution schedule; it never changes the report.
    """

    check_kind: str
    ensemble: EnsembleSpec
    trials: int
    tol: float
    parallel: bool = False
    fn: Optional[str] = None

    def __post_init__(self):
        if self.check_kind not in CHECK_KINDS:
            raise ValueError(
                f"unknown check kind {self.check_kind!r}; expected one of {CHECK_KINDS}"
            )
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not (np.isfinite(self.tol) and self.tol >= 0):
            raise ValueError(f"tol must be a nonnegative real, got {self.tol!r}")
        if self.fn is not None:
            builtin(self.fn)  # fail fast on unknown names


@dataclass(frozen=True)
class CampaignReport:
    """Aggregate of one campaign; everything but wall_time_s is deterministic."""

    config: CampaignConfig
    trials_run: int
    violations: int
    worst_slack: float
    worst_trial_seed: int
    generator_id: str
    wall_time_s: float

    def to_json_dict(self) -> dict:
        ens = self.config.ensemble
        return {
            "check_kind": self.config.check_kind,
            "ensemble": {
                "kind": ens.kind,
                "n": ens.n,
                "scale": ens.scale,
                "seed": ens.seed,
            },
            "trials": self.trials_run,
            "violations": self.violations,
            "worst_slack": self.worst_slack,
            "worst_trial_seed": self.worst_trial_seed,
            "tol": self.config.tol,
            "generator_id": self.generator_id,
            "wall_time_s": self.wall_time_s,
        }


def _pair(ens: EnsembleSpec, trial_seed: int):
    a = random_hermitian(replace(ens, seed=derive_seed(trial_seed, 0)))
    b = random_hermitian(replace(ens, seed=derive_seed(trial_seed, 1)))
    return a, b


def _run_trial(config: CampaignConfig, trial_seed: int) -> CheckResult:
    ens = config.ensemble
    kind = config.check_kind
    if kind == "GT_WEAK":
        return gt_weak_check(*_pair(ens, trial_seed), config.tol)
    if kind == "GT_STRONG":
        return gt_strong_check(*_pair(ens, trial_seed), config.tol)
    if kind == "MIDPOINT_CONVEXITY":
        return convexity_check(*_pair(ens, trial_seed), config.tol)
    if kind == "HESSIAN_PSD":
        x = random_vector(replace(ens, seed=derive_seed(trial_seed, 0)))
        cert = psd_certify(lse_hessian_analytic(x), config.tol)
        return CheckResult(
            lhs=cert.min_eigenvalue,
            rhs=0.0,
            slack=cert.min_eigenvalue,
            tol=config.tol,
            passed=cert.min_eigenvalue >= -slack_bound(0.0, config.tol),
        )
    if kind == "HESSIAN_FD_MATCH":
        x = random_vector(replace(ens, seed=derive_seed(trial_seed, 0)))
        dev = float(
            np.max(np.abs(lse_hessian_analytic(x).entries - hessian_fd(x).entries))
        )
        return CheckResult(
            lhs=dev,
            rhs=0.0,
            slack=-dev,
            tol=config.tol,
            passed=dev <= slack_bound(0.0, config.tol),
        )
    if kind == "UNITARY_INVARIANCE":
        a = random_hermitian(replace(ens, seed=derive_seed(trial_seed, 0)))
        u = random_unitary(ens.n, derive_seed(trial_seed, 1))
        func = lift(builtin(config.fn or "lse"))
        return check_unitary_invariance(func, a, u, config.tol)
    if kind == "DAVIS_RESTRICTION":
        x = random_vector(replace(ens, seed=derive_seed(trial_seed, 0)))
        return check_davis_restriction(builtin(config.fn or "lse"), x, config.tol)
    raise ValueError(f"unknown check kind {kind!r}")  # unreachable after config validation


def run_campaign(config: CampaignConfig) -> CampaignReport:
    """Run every trial and aggregate.

    Reports are identical for the same config regardless of `parallel`:
    trial seeds depend only on (master seed, index), and aggregation scans
    results in index order (ties on worst slack keep the lowest index).
    A trial that raises aborts the whole campaign with its seed attached.
    """
    t0 = time.perf_counter()

    def one(index: int) -> CheckResult:
        trial_seed = derive_seed(config.ensemble.seed, index)
        try:
            result = _run_trial(config, trial_seed)
        except Error as exc:
            raise CampaignTrialError(index, trial_seed, exc) from exc
        return replace(result, trial_seed=trial_seed)

    if config.parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(one, range(config.trials)))
    else:
        results = [one(i) for i in range(config.trials)]

    violations = sum(1 for r in results if not r.passed)
    worst = results[0]
    for r in results[1:]:
        if r.slack < worst.slack:
            worst = r
    return CampaignReport(
        config=config,
        trials_run=len(results),
        violations=violations,
        worst_slack=worst.slack,
        worst_trial_seed=worst.trial_seed,
        generator_id=GENERATOR_ID,
        wall_time_s=time.perf_counter() - t0,
    )
