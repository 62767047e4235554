"""Ranking applications of the maximal RST vector.

Pairwise-comparison (SR) matrices are ranked by the maximal RST vector of the
transposed matrix, which solves the generalized max-eigen equation
A (x) w = D w with D the diagonal of column maxima.  A judge/competitor scheme
composes two score matrices into a max-stochastic matrix and ranks its RST
vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arborescence import RstReport, max_rst_vector, verify_left_max_eigen
from .digraph import from_matrix, strongly_connected_components
from .errors import DomainError, DimensionMismatchError, ReducibleMatrixError
from .semiring import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_rectangular,
    as_vector,
    is_max_stochastic,
    max_matmul,
    max_matvec,
)


@dataclass(frozen=True)
class RankingResult:
    """Weights with the induced order (descending weight, index breaking ties).

    `ties` partitions the ordered indices into maximal equal-weight runs, so a
    consumer can tell genuine preference from tie-break order.
    """

    weights: np.ndarray
    order: tuple[int, ...]
    ties: tuple[tuple[int, ...], ...]
    residual: float


def _order_and_ties(w: np.ndarray, tol: Tolerance):
    order = sorted(range(w.size), key=lambda i: (-w[i], i))
    ties: list[tuple[int, ...]] = []
    group = [order[0]]
    for prev, cur in zip(order, order[1:]):
        if tol.close(w[prev], w[cur]):
            group.append(cur)
        else:
            ties.append(tuple(group))
            group = [cur]
    ties.append(tuple(group))
    return tuple(order), tuple(ties)


def is_sr_matrix(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff all entries are positive and a_ij * a_ji = 1 within tol."""
    A = as_matrix(A)
    if np.any(A <= 0):
        return False
    prod = A * A.T
    return all(tol.is_one(v) for v in prod.ravel())


def ahp_rank(A, tol: Tolerance = DEFAULT_TOL) -> RankingResult:
    """Rank options by the maximal RST vector of A^T.

    The weights solve A (x) w = D w with d_ii the maximum of column i of A;
    the reported residual measures that equation.
    """
    A = as_matrix(A)
    if np.any(A.max(axis=0) <= 0.0):
        raise DomainError("every column needs a positive maximum")
    w = max_rst_vector(A.T, tol).vector
    residual = generalized_eigen_residual(A.T, w)
    order, ties = _order_and_ties(w, tol)
    return RankingResult(weights=w, order=order, ties=ties, residual=residual)


def generalized_eigen_residual(A, w) -> float:
    """Deviation of A^T (x) w = D w with d_ii the maximum of row i of A."""
    A = as_matrix(A)
    w = as_vector(w, A.shape[0])
    d = A.max(axis=1)
    if np.any(d <= 0.0):
        raise DomainError("every row needs a positive maximum")
    target = d * w
    y = max_matvec(A.T, w)
    return float(np.max(np.abs(y - target) / np.maximum(target, 1.0)))


def error_functional(A, x) -> float:
    """max_ij a_ij x_j / x_i for strictly positive x."""
    A = as_matrix(A)
    x = as_vector(x, A.shape[0])
    if np.any(x <= 0.0):
        raise DomainError("error functional needs a strictly positive vector")
    return float(np.max(A * x[None, :] / x[:, None]))


def judge_competitor_rank(J, C, tol: Tolerance = DEFAULT_TOL):
    """Compose judge scores J (m x n) and competitor scores C (n x m).

    Every row of both matrices must have maximum exactly 1 (the top score).
    Returns (Chat, result) where Chat = C (x) J is max-stochastic and the
    result ranks the n competitors by the maximal RST vector of Chat.
    """
    J = as_rectangular(J)
    C = as_rectangular(C)
    if C.shape != (J.shape[1], J.shape[0]):
        raise DimensionMismatchError(
            f"judge matrix {J.shape} needs competitor matrix {J.shape[::-1]}, got {C.shape}"
        )
    for name, M in (("judge", J), ("competitor", C)):
        for i, m in enumerate(M.max(axis=1)):
            if not tol.is_one(m):
                raise DomainError(
                    f"row {i + 1} of the {name} matrix is not normalized: max = {m}, expected 1"
                )
    chat = max_matmul(C, J)
    if not is_max_stochastic(chat, tol):
        raise DomainError("composed matrix failed the max-stochasticity check")
    components = strongly_connected_components(from_matrix(chat))
    if len(components) > 1:
        listed = "; ".join("{" + ", ".join(str(v + 1) for v in comp) + "}" for comp in components)
        raise ReducibleMatrixError(
            f"composed matrix is reducible; strongly connected components: {listed}"
        )
    report: RstReport = max_rst_vector(chat, tol)
    order, ties = _order_and_ties(report.vector, tol)
    result = RankingResult(
        weights=report.vector,
        order=order,
        ties=ties,
        residual=verify_left_max_eigen(chat, report.vector),
    )
    return chat, result
