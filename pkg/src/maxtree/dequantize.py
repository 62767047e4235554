"""Dequantization pipeline for max-stochastic matrices.

A max-stochastic A is approximated by a family A^(p) of p-stochastic matrices:
entries below 1 are copied and each 1-entry of row i is replaced by
delta_i = ((1 - sum_{j in J_i} a_ij^p) / l_i)^(1/p), where J_i collects the
entries below 1 and l_i counts the 1-entries.  As p grows, A^(p) -> A and the
p-semiring RST vector of A^(p) converges to the maximal RST vector of A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arborescence import (
    DEFAULT_ENUM_CAP,
    enumerate_itrees,
    max_rst_vector,
    p_rst_vector,
)
from .digraph import from_matrix
from .errors import DomainError
from .semiring import DEFAULT_TOL, Tolerance, _check_p, as_matrix, is_max_stochastic

P_SWEEP_CAP = 1024


@dataclass(frozen=True)
class DequantStep:
    """One sweep point: the approximant, its p-RST vector and both errors."""

    p: int
    Ap: np.ndarray
    wp: np.ndarray
    err_matrix: float  # max_ij (a_ij - a^(p)_ij)
    err_vector: float  # max_i |w^(p)_i - w^max_i|


def _ones_mask(A: np.ndarray, tol: Tolerance) -> np.ndarray:
    return np.abs(A - 1.0) <= tol.rel_eps * np.maximum(1.0, A)


def _require_max_stochastic(A: np.ndarray, tol: Tolerance) -> None:
    if not is_max_stochastic(A, tol):
        raise DomainError("matrix is not max-stochastic: some row maximum differs from 1")


def _below_one_power_sums(A: np.ndarray, ones: np.ndarray, p: int) -> np.ndarray:
    return np.sum(np.where(ones, 0.0, A) ** p, axis=1)


def p0_threshold(A, tol: Tolerance = DEFAULT_TOL) -> int:
    """Smallest integer p >= 1 with sum_{j in J_i} a_ij^p <= 1 for every row."""
    A = as_matrix(A)
    _require_max_stochastic(A, tol)
    ones = _ones_mask(A, tol)

    def feasible(p: int) -> bool:
        return bool(np.all(_below_one_power_sums(A, ones, p) <= 1.0))

    if feasible(1):
        return 1
    # Exponential probe then bisection; sums are decreasing in p since every
    # J_i entry is strictly below 1.
    hi = 2
    while not feasible(hi):
        hi *= 2
    lo = hi // 2  # infeasible
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def build_Ap(A, p: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """The p-stochastic approximant: copy entries below 1, replace 1-entries by delta_i."""
    A = as_matrix(A)
    _check_p(p)
    _require_max_stochastic(A, tol)
    ones = _ones_mask(A, tol)
    sums = _below_one_power_sums(A, ones, p)
    bad = np.flatnonzero(sums > 1.0)
    if bad.size:
        raise DomainError(
            f"p = {p} is below the admissible threshold: row {bad[0] + 1} has "
            f"below-one power sum {sums[bad[0]]} > 1"
        )
    counts = ones.sum(axis=1)
    delta = ((1.0 - sums) / counts) ** (1.0 / p)
    return np.where(ones, delta[:, None], A)


def default_p_sweep(p0: int) -> list[int]:
    """Geometric sweep {p0, 2 p0, 4 p0, ...} capped at 1024."""
    _check_p(p0)
    values = [p0]
    while values[-1] * 2 <= P_SWEEP_CAP:
        values.append(values[-1] * 2)
    return values


def convergence_run(
    A,
    p_values=None,
    tol: Tolerance = DEFAULT_TOL,
    max_enum: int = DEFAULT_ENUM_CAP,
) -> list[DequantStep]:
    """One DequantStep per p, with errors measured against A and its maximal RST vector.

    Matrix and vector errors are reported as observed; the limit theorem makes
    them vanish as p grows but promises no rate, so monotonicity is not
    enforced here.
    """
    A = as_matrix(A)
    w_max = max_rst_vector(A, tol).vector
    if p_values is None:
        p_values = default_p_sweep(p0_threshold(A, tol))
    steps = []
    for p in sorted({int(p) for p in p_values}):
        Ap = build_Ap(A, p, tol)
        wp = p_rst_vector(Ap, p, max_enum).vector
        steps.append(
            DequantStep(
                p=p,
                Ap=Ap,
                wp=wp,
                err_matrix=float(np.max(A - Ap)),
                err_vector=float(np.max(np.abs(wp - w_max))),
            )
        )
    return steps


def theoretical_error_bound(
    A,
    p: int,
    tol: Tolerance = DEFAULT_TOL,
    max_enum: int = DEFAULT_ENUM_CAP,
) -> float:
    """Upper bound max_i (M_i^(1/p) - 1) + max_ij (a_ij - a^(p)_ij) on the vector error.

    M_i is the number of i-trees, obtained by enumeration.
    """
    A = as_matrix(A)
    _check_p(p)
    G = from_matrix(A)
    tree_count = max(
        sum(1 for _ in enumerate_itrees(G, root, max_enum)) for root in range(G.n)
    )
    if tree_count == 0:
        raise DomainError("some root has no trees; matrix must be irreducible")
    Ap = build_Ap(A, p, tol)
    return float(tree_count ** (1.0 / p) - 1.0 + np.max(A - Ap))
