"""Log-sum-exp, softmax, and the curvature structure of log-sum-exp.

The Hessian of f(x) = log sum_k exp(x_k) at a point with softmax weights p is

    H[i][j] = -p_i p_j   (i != j),      H[i][i] = p_i (1 - p_i),

which is diag(p) - p p^T, a weighted Laplacian of the complete graph with edge
weights p_i p_j: positive semidefinite, and of nullspace dimension exactly 1
(spanned by the all-ones vector) whenever every weight is positive.

`dkd_product` builds the superficially similar product D K D with D = diag(p)
and K the unweighted complete-graph Laplacian.  Its off-diagonal agrees with
the Hessian, but its diagonal is (n-1) p_i^2 instead of p_i (1 - p_i); the two
coincide only when the weights are uniform.  The CLI command `erratum-dkd`
demonstrates the discrepancy on request.

Everything is evaluated in max-shifted form, so no intermediate exponential
overflows for any finite input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, NonFiniteInput

SUM_TOL = 1e-14  # softmax weights must sum to 1 this tightly


def _as_vector(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError(f"expected a nonempty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("vector contains NaN or infinity")
    return arr


@dataclass(frozen=True)
class SoftmaxWeights:
    """Strictly positive weights summing to 1 within 1e-14."""

    p: np.ndarray

    def __post_init__(self):
        arr = _as_vector(self.p)
        if not np.all(arr > 0):
            raise ValueError(
                "softmax weights must be strictly positive; an input spread "
                "beyond about 745 log-units underflows double precision"
            )
        if abs(float(arr.sum()) - 1.0) > SUM_TOL:
            raise ValueError(f"weights sum to {arr.sum()!r}, not 1 within {SUM_TOL}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    @property
    def n(self) -> int:
        return self.p.shape[0]


@dataclass(frozen=True)
class RealSymmetricMatrix:
    """Real matrix with entries[i][j] == entries[j][i] exactly."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.array_equal(arr, arr.T):
            raise ValueError("entries are not exactly symmetric")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class PsdCertificate:
    """Outcome of a positive-semidefiniteness check at a given tolerance."""

    min_eigenvalue: float
    nullspace_dim: int
    tol: float
    passed: bool


def lse(x) -> float:
    """log sum_k exp(x_k), evaluated as m + log sum exp(x - m) with m = max x.

    Exact for n = 1; never overflows for finite input.  Satisfies
    max(x) <= lse(x) <= max(x) + log n.
    """
    arr = _as_vector(x)
    m = float(arr.max())
    return m + math.log(float(np.exp(arr - m).sum()))


def softmax(x) -> SoftmaxWeights:
    """Gradient of lse: p_i = exp(x_i - lse(x)), normalized to sum exactly near 1."""
    arr = _as_vector(x)
    w = np.exp(arr - arr.max())
    return SoftmaxWeights(w / w.sum())


def lse_hessian_analytic(x) -> RealSymmetricMatrix:
    """Hessian of lse at x, in max-shifted form.

    With w = exp(x - max x) and S = sum w: off-diagonal -w_i w_j / S^2 and
    diagonal w_i (S - w_i) / S^2.  For n = 1 this is the 1 x 1 zero matrix.
    """
    arr = _as_vector(x)
    w = np.exp(arr - arr.max())
    s = float(w.sum())
    h = -np.outer(w, w) / (s * s)
    np.fill_diagonal(h, w * (s - w) / (s * s))
    return RealSymmetricMatrix(h)


def hessian_fd(x, h: float = 1e-4) -> RealSymmetricMatrix:
    """Central finite-difference Hessian of lse, independent of the analytic form.

    Entry (i, j) is
        [f(x+h e_i+h e_j) - f(x+h e_i-h e_j) - f(x-h e_i+h e_j) + f(x-h e_i-h e_j)] / (4 h^2),
    symmetrized.  Serves as the numerical oracle for `lse_hessian_analytic`;
    agreement is ~1e-7 for moderate |x_i| at the default step.
    """
    arr = _as_vector(x)
    if not (np.isfinite(h) and h > 0):
        raise ValueError(f"step h must be finite and positive, got {h!r}")
    n = arr.shape[0]
    out = np.empty((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        for j in range(i, n):
            ej = np.zeros(n)
            ej[j] = h
            out[i, j] = (
                lse(arr + ei + ej)
                - lse(arr + ei - ej)
                - lse(arr - ei + ej)
                + lse(arr - ei - ej)
            ) / (4.0 * h * h)
            out[j, i] = out[i, j]
    return RealSymmetricMatrix((out + out.T) / 2.0)


def complete_graph_laplacian(n: int) -> RealSymmetricMatrix:
    """Laplacian of the complete graph on n vertices: n I - J.

    Diagonal n-1, off-diagonal -1; eigenvalue 0 once and n with multiplicity
    n-1.  Entries are exact small integers.
    """
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    k = -np.ones((n, n))
    np.fill_diagonal(k, float(n - 1))
    return RealSymmetricMatrix(k)


def dkd_product(x) -> RealSymmetricMatrix:
    """D K D with D = diag(softmax(x)) and K the complete-graph Laplacian.

    Off-diagonal -p_i p_j matches the lse Hessian; the diagonal (n-1) p_i^2
    does not (the Hessian has p_i (1 - p_i)) unless the weights are uniform.
    """
    p = softmax(x).p
    k = complete_graph_laplacian(p.shape[0]).entries
    return RealSymmetricMatrix(p[:, None] * k * p[None, :])


def weighted_laplacian(p: SoftmaxWeights) -> RealSymmetricMatrix:
    """Laplacian of the complete graph with edge weights p_i p_j: diag(p) - p p^T.

    Equals sum_{i<j} p_i p_j (e_i - e_j)(e_i - e_j)^T, and agrees with
    `lse_hessian_analytic` at any x whose softmax is p.
    """
    lap = -np.outer(p.p, p.p)
    np.fill_diagonal(lap, p.p * (1.0 - p.p))
    return RealSymmetricMatrix(lap)


def psd_certify(m: RealSymmetricMatrix, tol: float | None = None) -> PsdCertificate:
    """Certify positive semidefiniteness by the spectrum.

    Passes iff the minimum eigenvalue is >= -tol; nullspace_dim counts
    eigenvalues with |w| <= tol.  Default tol is 1e-10 * max(1, max |entry|).
    """
    if tol is None:
        tol = 1e-10 * max(1.0, float(np.max(np.abs(m.entries))))
    if not (np.isfinite(tol) and tol >= 0):
        raise ValueError(f"tol must be a nonnegative real, got {tol!r}")
    try:
        w = np.linalg.eigvalsh(m.entries)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    w_min = float(w[0])
    return PsdCertificate(
        min_eigenvalue=w_min,
        nullspace_dim=int(np.count_nonzero(np.abs(w) <= tol)),
        tol=float(tol),
        passed=w_min >= -tol,
    )
