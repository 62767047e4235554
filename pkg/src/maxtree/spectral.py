"""Max-algebraic spectral machinery.

Covers the maximum cycle geometric mean mu(A), the Kleene star
A* = I (+) A (+) ... (+) A^(n-1) (finite when mu(A) <= 1), the critical
nodes/edges/components attaining mu(A), the component-wise reduced matrix, and
the constant-block structure of the Kleene star of a visualized matrix.

All closures run in the log domain: products become sums, absent edges are
-inf, and argmax structure is unchanged because log is monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .digraph import WeightedDigraph, from_matrix, strongly_connected_components
from .errors import DomainError
from .semiring import DEFAULT_TOL, Tolerance, as_matrix


@dataclass(frozen=True)
class KleeneStar:
    """The closure matrix; `positive` is equivalent to irreducibility of the input."""

    star: np.ndarray
    positive: bool


@dataclass(frozen=True)
class CriticalStructure:
    """mu(A) together with the critical nodes, edges and component partitions.

    `critical_matrix` is indexed by `critical_nodes` (sorted): it keeps the
    original entry on critical edges and is 0 elsewhere.  `dcstar_components`
    partitions all n nodes: the critical SCCs plus one singleton per
    non-critical node, ordered by smallest contained node.
    """

    mu: float
    critical_nodes: tuple[int, ...]
    critical_edges: tuple[tuple[int, int], ...]
    critical_matrix: np.ndarray
    dc_components: tuple[tuple[int, ...], ...]
    dcstar_components: tuple[tuple[int, ...], ...]

    @property
    def num_components(self) -> int:
        return len(self.dcstar_components)


@dataclass(frozen=True)
class BlockLawReport:
    """Outcome of the visualized-Kleene-star block check.

    Violations are (i, j, actual, expected) with 0-indexed nodes: the entry of
    A* that differs from the corresponding entry of the reduced-matrix star.
    """

    ok: bool
    violations: tuple[tuple[int, int, float, float], ...]


def _log_weights(A: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(A)


def _log_closure(L: np.ndarray) -> np.ndarray:
    """Floyd-Warshall max-plus closure of log-weights, with log(I) on the diagonal."""
    D = L.copy()
    np.fill_diagonal(D, np.maximum(np.diag(D), 0.0))
    for k in range(D.shape[0]):
        np.maximum(D, D[:, k : k + 1] + D[k : k + 1, :], out=D)
    return D


def _karp_max_mean(L: np.ndarray, component: list[int]) -> float | None:
    """Maximum mean (in logs) over cycles inside one SCC, or None if it has no cycle.

    Karp's recurrence: with D_k(v) the best weight of a length-k walk from a
    fixed source, the answer is max_v min_k (D_m(v) - D_k(v)) / (m - k).
    """
    idx = np.asarray(component)
    m = idx.size
    sub = L[np.ix_(idx, idx)]
    if m == 1:
        return float(sub[0, 0]) if np.isfinite(sub[0, 0]) else None
    D = np.full((m + 1, m), -np.inf)
    D[0, 0] = 0.0
    for k in range(1, m + 1):
        D[k] = np.max(D[k - 1][:, None] + sub, axis=0)
    best = -math.inf
    for v in range(m):
        if not np.isfinite(D[m, v]):
            continue
        ratios = [
            (D[m, v] - D[k, v]) / (m - k) for k in range(m) if np.isfinite(D[k, v])
        ]
        best = max(best, min(ratios))
    return best if best > -math.inf else None


def _mu_or_none(A: np.ndarray) -> float | None:
    L = _log_weights(A)
    best = None
    for component in strongly_connected_components(from_matrix(A)):
        lam = _karp_max_mean(L, component)
        if lam is not None:
            best = lam if best is None else max(best, lam)
    return math.exp(best) if best is not None else None


def max_cycle_geometric_mean(A) -> float:
    """mu(A): the maximum over directed cycles of (cycle weight)^(1/length)."""
    mu = _mu_or_none(as_matrix(A))
    if mu is None:
        raise DomainError("digraph has no cycles; maximum cycle geometric mean is undefined")
    return mu


def kleene_star(A, tol: Tolerance = DEFAULT_TOL, *, rescale: bool = False) -> KleeneStar:
    """Kleene star of A; requires mu(A) <= 1 (within tol) so the series is finite.

    With `rescale`, an input whose mu lies in (1, 1 + rel_eps] is divided by mu
    before the closure; otherwise it is used as given.
    """
    A = as_matrix(A)
    mu = _mu_or_none(A)
    if mu is not None and mu > 1.0 + tol.rel_eps:
        raise DomainError(
            f"Kleene star series diverges: maximum cycle geometric mean {mu} exceeds 1"
        )
    B = A / mu if (rescale and mu is not None and mu > 1.0) else A
    star = np.exp(_log_closure(_log_weights(B)))
    np.maximum(star, B, out=star)  # direct edges exactly, free of exp/log rounding
    np.fill_diagonal(star, 1.0)
    return KleeneStar(star=star, positive=bool(np.all(star > 0)))


def critical_structure(A, tol: Tolerance = DEFAULT_TOL) -> CriticalStructure:
    """Critical nodes, edges, matrix and component partitions of A.

    An edge (i, j) is critical iff b_ij * (B*)_ji = 1 for B = A / mu(A): the
    best closed walk through the edge attains the maximum cycle mean.
    """
    A = as_matrix(A)
    n = A.shape[0]
    mu = max_cycle_geometric_mean(A)
    B = A / mu
    C = _log_closure(_log_weights(B))

    critical_edges = []
    for i in range(n):
        for j in range(n):
            if A[i, j] <= 0:
                continue
            back = 1.0 if i == j else math.exp(C[j, i])
            if tol.is_one(B[i, j] * back):
                critical_edges.append((i, j))
    critical_nodes = sorted({i for i, _ in critical_edges} | {j for _, j in critical_edges})
    node_set = set(critical_nodes)

    critical_graph = WeightedDigraph(n, [(i, j, A[i, j]) for i, j in critical_edges])
    dc = [
        tuple(comp)
        for comp in strongly_connected_components(critical_graph)
        if comp[0] in node_set
    ]
    dc.sort(key=lambda comp: comp[0])
    dcstar = dc + [(v,) for v in range(n) if v not in node_set]
    dcstar.sort(key=lambda comp: comp[0])

    k = len(critical_nodes)
    pos = {v: a for a, v in enumerate(critical_nodes)}
    critical_matrix = np.zeros((k, k))
    for i, j in critical_edges:
        critical_matrix[pos[i], pos[j]] = A[i, j]

    return CriticalStructure(
        mu=mu,
        critical_nodes=tuple(critical_nodes),
        critical_edges=tuple(critical_edges),
        critical_matrix=critical_matrix,
        dc_components=tuple(dc),
        dcstar_components=tuple(dcstar),
    )


def reduced_matrix(A, cs: CriticalStructure) -> np.ndarray:
    """Component-wise maxima: entry (u, v) is max{a_ij : i in N_u, j in N_v}."""
    A = as_matrix(A)
    comps = [list(c) for c in cs.dcstar_components]
    r = len(comps)
    R = np.zeros((r, r))
    for a in range(r):
        for b in range(r):
            R[a, b] = A[np.ix_(comps[a], comps[b])].max()
    return R


def verify_vis_kleene_blocks(A, tol: Tolerance = DEFAULT_TOL) -> BlockLawReport:
    """Check the block law for a visualized matrix with mu = 1.

    Every (u, v) block of A* over the component partition must be constant and
    equal to entry (u, v) of the Kleene star of the reduced matrix.
    Max-stochastic inputs always satisfy the visualization precondition.
    """
    A = as_matrix(A)
    cs = critical_structure(A, tol)
    if not tol.is_one(cs.mu):
        raise DomainError(f"matrix is not visualized: mu = {cs.mu} instead of 1")
    for i, j in cs.critical_edges:
        if not tol.is_one(A[i, j]):
            raise DomainError(
                f"matrix is not visualized: critical edge ({i + 1}, {j + 1}) "
                f"has weight {A[i, j]} instead of 1"
            )
    star = kleene_star(A, tol).star
    reduced_star = kleene_star(reduced_matrix(A, cs), tol).star
    violations = []
    for a, Na in enumerate(cs.dcstar_components):
        for b, Nb in enumerate(cs.dcstar_components):
            expected = reduced_star[a, b]
            for i in Na:
                for j in Nb:
                    if not tol.close(star[i, j], expected):
                        violations.append((i, j, float(star[i, j]), float(expected)))
    return BlockLawReport(ok=not violations, violations=tuple(violations))


def min_critical_row(ks: KleeneStar, cs: CriticalStructure) -> np.ndarray:
    """Entrywise minimum of the critical rows of A*.

    For an irreducible max-stochastic matrix this equals the full columnwise
    minimum of A*.
    """
    if not cs.critical_nodes:
        raise DomainError("no critical nodes; input cannot be irreducible max-stochastic")
    return ks.star[np.asarray(cs.critical_nodes), :].min(axis=0)


def critical_column_eigenvectors(ks: KleeneStar, cs: CriticalStructure) -> list[np.ndarray]:
    """One Kleene-star column per critical SCC (smallest node as representative).

    Each returned column v satisfies A (x) v = v when A is irreducible with
    mu(A) = 1.
    """
    return [ks.star[:, comp[0]].copy() for comp in cs.dc_components]
