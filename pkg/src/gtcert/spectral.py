"""Symmetric functions of eigenvalues and their convexity checks.

A symmetric scalar function f (invariant under permutation of its arguments)
lifts to a unitarily invariant function of a Hermitian matrix by evaluation on
the spectrum: F(A) = f(eigenvalues of A).  The lift preserves convexity in
both directions, so convexity of F can be probed through f on vectors and
through F on matrix segments, independently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .checks import CheckResult, slack_bound
from .errors import ArityMismatch, NonFiniteInput
from .hermitian import HermitianMatrix, UnitaryMatrix, conjugate, eigh
from .logsumexp import lse

_CONVEXITY_FLAGS = ("convex", "concave", "neither")


@dataclass(frozen=True)
class SymmetricScalarFunction:
    """Named scalar function of a real vector, permutation-invariant by contract.

    `arity` of None accepts any dimension.  `convexity` is a declaration, not
    a computation; checks use it to decide whether a negative convexity
    residual is a finding or expected behavior.
    """

    name: str
    evaluate: Callable[[np.ndarray], float]
    convexity: str
    arity: Optional[int] = None

    def __post_init__(self):
        if self.convexity not in _CONVEXITY_FLAGS:
            raise ValueError(f"convexity must be one of {_CONVEXITY_FLAGS}")
        if self.arity is not None and self.arity < 1:
            raise ValueError(f"arity must be None or >= 1, got {self.arity!r}")

    def __call__(self, x) -> float:
        arr = _vector_arg(self, x)
        return float(self.evaluate(arr))


@dataclass(frozen=True)
class SpectralFunction:
    """The lift of a symmetric scalar function to Hermitian matrices."""

    base: SymmetricScalarFunction

    @property
    def name(self) -> str:
        return self.base.name


def lift(f: SymmetricScalarFunction) -> SpectralFunction:
    return SpectralFunction(f)


def _vector_arg(f: SymmetricScalarFunction, x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError(f"expected a nonempty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("vector contains NaN or infinity")
    if f.arity is not None and f.arity != arr.shape[0]:
        raise ArityMismatch(f"{f.name} has arity {f.arity}, got dimension {arr.shape[0]}")
    return arr


def lift_eval(func: SpectralFunction, a: HermitianMatrix) -> float:
    """F(A): the base function applied to the ascending spectrum of A."""
    if func.base.arity is not None and func.base.arity != a.n:
        raise ArityMismatch(
            f"{func.base.name} has arity {func.base.arity}, matrix is {a.n} x {a.n}"
        )
    return float(func.base.evaluate(eigh(a).eigenvalues))


def check_symmetry(
    f: SymmetricScalarFunction,
    x,
    n_perms: int = 100,
    tol: float = 1e-12,
    seed: int = 0,
) -> CheckResult:
    """Probe permutation invariance of f at x.

    All n! permutations when n <= 5, otherwise n_perms draws seeded by `seed`
    (the sampling is pure).  Records the worst deviation: slack is minus the
    largest |f(permuted x) - f(x)|.
    """
    arr = _vector_arg(f, x)
    if n_perms < 1:
        raise ValueError(f"n_perms must be >= 1, got {n_perms}")
    n = arr.shape[0]
    if n <= 5:
        perms = itertools.permutations(range(n))
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        perms = (rng.permutation(n) for _ in range(n_perms))

    reference = float(f.evaluate(arr))
    worst_dev = 0.0
    worst_val = reference
    for perm in perms:
        val = float(f.evaluate(arr[list(perm)]))
        dev = abs(val - reference)
        if dev > worst_dev:
            worst_dev, worst_val = dev, val
    return CheckResult(
        lhs=worst_val,
        rhs=reference,
        slack=-worst_dev,
        tol=tol,
        passed=worst_dev <= slack_bound(reference, tol),
        trial_seed=seed,
    )


def check_unitary_invariance(
    func: SpectralFunction, a: HermitianMatrix, u: UnitaryMatrix, tol: float
) -> CheckResult:
    """Compare F(U* A U) against F(A); slack is minus the deviation."""
    reference = lift_eval(func, a)
    rotated = lift_eval(func, conjugate(a, u))
    dev = abs(rotated - reference)
    return CheckResult(
        lhs=rotated,
        rhs=reference,
        slack=-dev,
        tol=tol,
        passed=dev <= slack_bound(reference, tol),
    )


def midpoint_convexity_residual(
    func: SpectralFunction, a: HermitianMatrix, b: HermitianMatrix
) -> float:
    """(F(A) + F(B))/2 - F((A+B)/2); nonnegative when the base is convex.

    Negative values within -1e-10 * max(1, |F|) are floating-point noise, not
    counterexamples.
    """
    return segment_convexity_residual(func, a, b, 0.5)


def segment_convexity_residual(
    func: SpectralFunction, a: HermitianMatrix, b: HermitianMatrix, t: float
) -> float:
    """t F(A) + (1-t) F(B) - F(t A + (1-t) B) for t in [0, 1]."""
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    chord = t * lift_eval(func, a) + (1.0 - t) * lift_eval(func, b)
    return chord - lift_eval(func, t * a + (1.0 - t) * b)


def check_davis_restriction(f: SymmetricScalarFunction, x, tol: float) -> CheckResult:
    """Compare the lift evaluated at diag(x) with f(x) directly.

    For symmetric f these agree up to eigensolver noise regardless of the
    ordering of x, since the solver returns the sorted diagonal.
    """
    arr = _vector_arg(f, x)
    direct = float(f.evaluate(arr))
    lifted = lift_eval(lift(f), HermitianMatrix(np.diag(arr).astype(np.complex128)))
    dev = abs(lifted - direct)
    return CheckResult(
        lhs=lifted,
        rhs=direct,
        slack=-dev,
        tol=tol,
        passed=dev <= slack_bound(direct, tol),
    )


def _pnorm(p: float) -> SymmetricScalarFunction:
    if not (np.isfinite(p) and p >= 1):
        raise ValueError(f"pnorm requires a finite p >= 1, got {p!r}")

    def evaluate(x: np.ndarray) -> float:
        return float(np.sum(np.abs(x) ** p) ** (1.0 / p))

    return SymmetricScalarFunction(f"pnorm:{p:g}", evaluate, "convex")


_BUILTINS = {
    "lse": SymmetricScalarFunction("lse", lse, "convex"),
    "max": SymmetricScalarFunction("max", lambda x: float(np.max(x)), "convex"),
    "min": SymmetricScalarFunction("min", lambda x: float(np.min(x)), "concave"),
    "sum": SymmetricScalarFunction("sum", lambda x: float(np.sum(x)), "convex"),
}


def builtin(name: str) -> SymmetricScalarFunction:
    """Look up a built-in by name: lse, max, min, sum, or pnorm:<p> with p >= 1."""
    key = str(name).strip()
    if key in _BUILTINS:
        return _BUILTINS[key]
    if key.startswith("pnorm:"):
        try:
            p = float(key.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"malformed pnorm exponent in {name!r}") from None
        return _pnorm(p)
    raise ValueError(
        f"unknown function {name!r}; built-ins are lse, max, min, sum, pnorm:<p>"
    )


def builtin_names() -> tuple:
    """Names of the fixed built-ins (pnorm:<p> is parameterized, not listed)."""
    return tuple(_BUILTINS)
