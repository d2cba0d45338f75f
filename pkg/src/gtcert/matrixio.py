"""Matrix files: {"n": int, "re": n x n, "im": n x n} with "im" optional.

A missing "im" means a real symmetric matrix (zero imaginary parts).  Numbers
are written with Python's shortest round-trip representation, so save followed
by load reproduces the entries bit for bit.  Hermiticity is enforced on load
at tolerance 1e-10.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import MatrixParseError
from .hermitian import HermitianMatrix, validate_hermitian

LOAD_TOL = 1e-10


def _block(doc: dict, key: str, n: int) -> np.ndarray:
    try:
        arr = np.array(doc[key], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixParseError(f"field {key!r} is not a numeric matrix: {exc}") from None
    if arr.shape != (n, n):
        raise MatrixParseError(f"field {key!r} has shape {arr.shape}, expected ({n}, {n})")
    return arr


def loads_matrix(text: str) -> HermitianMatrix:
    """Parse a matrix document from a JSON string."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MatrixParseError("top-level value must be an object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixParseError(f"field 'n' must be a positive integer, got {n!r}")
    if "re" not in doc:
        raise MatrixParseError("missing field 're'")
    re = _block(doc, "re", n)
    im = _block(doc, "im", n) if "im" in doc else np.zeros((n, n))
    return validate_hermitian(re + 1j * im, LOAD_TOL)


def load_matrix(path: str) -> HermitianMatrix:
    """Load and validate a matrix file.  Missing files raise FileNotFoundError."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads_matrix(fh.read())


def dumps_matrix(a: HermitianMatrix) -> str:
    """Serialize; "im" is omitted when every imaginary part is zero."""
    doc = {"n": a.n, "re": a.entries.real.tolist()}
    if np.any(a.entries.imag):
        doc["im"] = a.entries.imag.tolist()
    return json.dumps(doc, indent=2) + "\n"


def save_matrix(a: HermitianMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(a))
