"""Max-times and p-norm semiring arithmetic on nonnegative scalars, vectors and matrices.

The max-times semiring is the nonnegative reals with a (+) b = max(a, b) and
a (x) b = ab.  The p-semiring keeps the ordinary product but replaces addition
with a +_p b = (a^p + b^p)^(1/p); it converges to max-times as p grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError

# Above this exponent, entrywise p-th powers are evaluated through logs so that
# small entries do not underflow to zero inside p-norm accumulations.
LOG_DOMAIN_P = 64


@dataclass(frozen=True)
class Tolerance:
    """Relative float comparison: x ~ y iff |x - y| <= rel_eps * max(1, |x|, |y|)."""

    rel_eps: float = 1e-9

    def __post_init__(self) -> None:
        if not self.rel_eps > 0:
            raise ValueError("rel_eps must be positive")

    def close(self, x: float, y: float) -> bool:
        return abs(x - y) <= self.rel_eps * max(1.0, abs(x), abs(y))

    def is_one(self, x: float) -> bool:
        return self.close(float(x), 1.0)


DEFAULT_TOL = Tolerance()


def as_matrix(values) -> np.ndarray:
    """Validate a square matrix of finite nonnegative reals and return a float64 copy."""
    A = np.array(values, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatchError(f"expected a square matrix, got shape {A.shape}")
    _check_entries(A)
    return A


def as_rectangular(values) -> np.ndarray:
    """Validate a 2-D array of finite nonnegative reals (rectangular allowed)."""
    A = np.array(values, dtype=float)
    if A.ndim != 2 or min(A.shape) < 1:
        raise DimensionMismatchError(f"expected a 2-D matrix, got shape {A.shape}")
    _check_entries(A)
    return A


def as_vector(values, n: int | None = None) -> np.ndarray:
    """Validate a vector of finite nonnegative reals, optionally of prescribed length."""
    x = np.array(values, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise DimensionMismatchError(f"expected a vector, got shape {x.shape}")
    if n is not None and x.size != n:
        raise DimensionMismatchError(f"expected a vector of length {n}, got {x.size}")
    _check_entries(x)
    return x


def _check_entries(A: np.ndarray) -> None:
    if not np.all(np.isfinite(A)):
        raise DomainError("entries must be finite")
    if np.any(A < 0):
        raise DomainError("entries must be nonnegative")


def max_matmul(A, B) -> np.ndarray:
    """Max-times matrix product: c_ij = max_k a_ik * b_kj.

    Square operands are the usual case; rectangular operands with a matching
    inner dimension are accepted (needed for score-matrix compositions).
    """
    A = as_rectangular(A)
    B = as_rectangular(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatchError(
            f"inner dimensions differ: {A.shape} vs {B.shape}"
        )
    return np.max(A[:, :, None] * B[None, :, :], axis=1)


def max_matvec(A, x) -> np.ndarray:
    """Max-times matrix-vector product: y_i = max_j a_ij * x_j."""
    A = as_rectangular(A)
    x = as_vector(x, A.shape[1])
    return np.max(A * x[None, :], axis=1)


def is_max_stochastic(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every row maximum equals 1 within tol."""
    A = as_matrix(A)
    return all(tol.is_one(m) for m in A.max(axis=1))


def normalize_max_stochastic(A) -> tuple[np.ndarray, np.ndarray]:
    """Divide each row by its maximum.

    Returns (Ahat, D) where D holds the row maxima and Ahat = diag(D)^-1 A is
    exactly max-stochastic.  Raises on a zero row (the diagonal would be
    singular).
    """
    A = as_matrix(A)
    D = A.max(axis=1)
    zero = np.flatnonzero(D <= 0.0)
    if zero.size:
        raise DomainError(
            f"row {zero[0] + 1} has no positive entry; row-maxima diagonal is singular"
        )
    return A / D[:, None], D


def p_add(a: float, b: float, p: int) -> float:
    """p-semiring addition (a^p + b^p)^(1/p) for nonnegative a, b and integer p >= 1."""
    _check_p(p)
    if a < 0 or b < 0:
        raise DomainError("p_add needs nonnegative operands")
    return float((a**p + b**p) ** (1.0 / p))


def row_p_norms(A, p: int) -> np.ndarray:
    """Per-row p-norms (sum_j a_ij^p)^(1/p), computed through logs for large p."""
    A = as_rectangular(A)
    _check_p(p)
    if p <= LOG_DOMAIN_P:
        return np.sum(A**p, axis=1) ** (1.0 / p)
    with np.errstate(divide="ignore"):
        L = np.log(A)
    return np.exp(np.logaddexp.reduce(p * L, axis=1) / p)


def is_p_stochastic(A, p: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every row p-norm equals 1 within tol."""
    A = as_matrix(A)
    return all(tol.is_one(v) for v in row_p_norms(A, p))


def _check_p(p) -> None:
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
