"""Rooted-spanning-tree (RST) vectors in three arithmetics.

For each root i, the i-trees of the digraph are aggregated by max (max-times
semiring), by ordinary sum (the classical Markov-chain case), or by p-norm sum
(the p-semiring).  Brute-force enumeration provides the exact oracle at desk
scale; a Chu-Liu/Edmonds maximum arborescence on log-weights provides the
efficient route for the max case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .digraph import ITree, WeightedDigraph, from_matrix, reverse_reachable
from .errors import DomainError, EnumerationCapError, ReducibleMatrixError
from .semiring import (
    DEFAULT_TOL,
    LOG_DOMAIN_P,
    Tolerance,
    _check_p,
    as_matrix,
    as_vector,
    max_matvec,
    row_p_norms,
)

DEFAULT_ENUM_CAP = 9

# Two log-scores within this relative distance are treated as tied when
# selecting the lexicographically smallest maximum-weight tree.
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class RstReport:
    """RST vector with per-root witness trees (max semantics only) and the
    residual of the governing eigen-equation."""

    vector: np.ndarray
    witnesses: tuple[ITree, ...] | None
    residual: float


def enumerate_itrees(G: WeightedDigraph, root: int, max_enum: int = DEFAULT_ENUM_CAP) -> Iterator[ITree]:
    """Yield every i-tree of G rooted at `root`, exactly once.

    Backtracks over the out-edge choice of each non-root node in ascending node
    order, pruning as soon as a choice closes a cycle, so the stream is in
    lexicographic order of the sorted edge list.  Refuses graphs larger than
    `max_enum` nodes; use max_arborescence for those.
    """
    if G.n > max_enum:
        raise EnumerationCapError(
            f"enumeration needs n <= {max_enum}, got n = {G.n}; "
            "use max_arborescence for the maximum-weight tree"
        )
    if not 0 <= root < G.n:
        raise DomainError(f"root {root} out of range")
    tails = [v for v in range(G.n) if v != root]
    options = [[(h, w) for h, w in G.out_edges(t) if h != t] for t in tails]
    succ: dict[int, int] = {}

    def closes_cycle(tail: int, head: int) -> bool:
        v = head
        while True:
            if v == tail:
                return True
            if v == root or v not in succ:
                return False
            v = succ[v]

    def extend(pos: int, weight: float) -> Iterator[ITree]:
        if pos == len(tails):
            yield ITree(root=root, edges=tuple(succ.items()), weight=weight)
            return
        tail = tails[pos]
        for head, w in options[pos]:
            if closes_cycle(tail, head):
                continue
            succ[tail] = head
            yield from extend(pos + 1, weight * w)
            del succ[tail]

    yield from extend(0, 1.0)


# --- Chu-Liu/Edmonds on log-weights ----------------------------------------
#
# Records are (tail, head, logw, under, displaced).  Contraction wraps a record
# so that expansion can recover the record one level down (`under`) and, for
# edges leaving the contracted cycle, which cycle node's selection they evict
# (`displaced`).


def _best_selection(nodes, edges, root):
    best: dict[int, tuple] = {}
    for rec in edges:
        t = rec[0]
        if t == root or t == rec[1]:
            continue
        cur = best.get(t)
        if cur is None or rec[2] > cur[2]:
            best[t] = rec
    for v in nodes:
        if v != root and v not in best:
            return None
    return best


def _selection_cycle(best, root):
    done: set[int] = set()
    for start in best:
        if start in done:
            continue
        walk: list[int] = []
        pos: dict[int, int] = {}
        v = start
        while v != root and v in best and v not in done:
            if v in pos:
                return walk[pos[v]:]
            pos[v] = len(walk)
            walk.append(v)
            v = best[v][1]
        done.update(walk)
    return None


def _solve(nodes, edges, root, next_label):
    """Best out-edge per non-root node, acyclic; None if some node is stuck."""
    best = _best_selection(nodes, edges, root)
    if best is None:
        return None
    cycle = _selection_cycle(best, root)
    if cycle is None:
        return best
    members = set(cycle)
    c = next_label
    sub_nodes = [v for v in nodes if v not in members]
    sub_nodes.append(c)
    sub_edges = []
    for rec in edges:
        t_in = rec[0] in members
        h_in = rec[1] in members
        if t_in and h_in:
            continue
        if t_in:
            sub_edges.append((c, rec[1], rec[2] - best[rec[0]][2], rec, rec[0]))
        elif h_in:
            sub_edges.append((rec[0], c, rec[2], rec, None))
        else:
            sub_edges.append(rec)
    sub = _solve(sub_nodes, sub_edges, root, next_label + 1)
    if sub is None:
        return None
    out = {}
    for v, rec in sub.items():
        if v == c:
            continue
        out[v] = rec[3] if rec[1] == c else rec
    leaving = sub[c]
    out[leaving[4]] = leaving[3]
    for v in cycle:
        if v != leaving[4]:
            out[v] = best[v]
    return out


def _solve_graph(G: WeightedDigraph, root: int, forced: dict[int, int] | None = None):
    """Run the contraction solver; returns ({tail: head}, total log-weight) or None."""
    records = []
    for tail, head, weight in G.edges:
        if tail == root or tail == head:
            continue
        if forced is not None and tail in forced and head != forced[tail]:
            continue
        records.append((tail, head, math.log(weight), None, None))
    selection = _solve(list(range(G.n)), records, root, G.n)
    if selection is None:
        return None
    pairs = {t: rec[1] for t, rec in selection.items()}
    return pairs, sum(rec[2] for rec in selection.values())


def _tree_weight(G: WeightedDigraph, edges) -> float:
    weight = 1.0
    for tail, head in sorted(edges):
        weight *= G.weight(tail, head)
    return weight


def max_arborescence(G: WeightedDigraph, root: int) -> ITree:
    """A maximum-weight i-tree rooted at `root` (Chu-Liu/Edmonds on log-weights)."""
    if not 0 <= root < G.n:
        raise DomainError(f"root {root} out of range")
    reachable = reverse_reachable(G, root)
    if len(reachable) < G.n:
        stuck = min(set(range(G.n)) - reachable)
        raise DomainError(f"node {stuck + 1} cannot reach root {root + 1}; no tree exists")
    if G.n == 1:
        return ITree(root=root, edges=(), weight=1.0)
    pairs, _ = _solve_graph(G, root)
    edges = tuple(sorted(pairs.items()))
    return ITree(root=root, edges=edges, weight=_tree_weight(G, edges))


def _lex_max_arborescence(G: WeightedDigraph, root: int) -> ITree:
    """The lexicographically smallest maximum-weight i-tree (sorted edge lists).

    Greedy over tails in ascending order: a smaller head is adopted whenever
    forcing it still achieves the optimal log-weight.  Candidates are pruned
    with the upper bound "sum of best out-weights elsewhere + this edge".
    """
    if G.n == 1:
        return ITree(root=root, edges=(), weight=1.0)
    pairs, opt = _solve_graph(G, root)
    best_out = {}
    for t in pairs:
        best_out[t] = max(math.log(w) for h, w in G.out_edges(t) if h != t)
    total_best = sum(best_out.values())
    slack = _TIE_EPS * max(1.0, abs(opt))
    forced: dict[int, int] = {}
    for tail in sorted(pairs):
        chosen = pairs[tail]
        for head, weight in G.out_edges(tail):
            if head >= chosen:
                break
            if head == tail:
                continue
            if total_best - best_out[tail] + math.log(weight) < opt - slack:
                continue
            trial = dict(forced)
            trial[tail] = head
            solved = _solve_graph(G, root, trial)
            if solved is not None and solved[1] >= opt - slack:
                pairs, chosen = solved[0], head
                break
        forced[tail] = chosen
    edges = tuple(sorted(forced.items()))
    return ITree(root=root, edges=edges, weight=_tree_weight(G, edges))


def _require_all_roots(G: WeightedDigraph) -> None:
    for root in range(G.n):
        reachable = reverse_reachable(G, root)
        if len(reachable) < G.n:
            stuck = min(set(range(G.n)) - reachable)
            raise ReducibleMatrixError(
                f"matrix is reducible: the {root + 1}-tree set is empty "
                f"(node {stuck + 1} has no path to {root + 1})"
            )


def max_rst_vector(A, tol: Tolerance = DEFAULT_TOL) -> RstReport:
    """Maximal RST vector: w_i is the maximum i-tree weight.

    Witnesses are the lexicographically smallest maximizing edge sets, so equal
    inputs always produce identical reports.  The residual is the deviation of
    A^T (x) w = w; it vanishes for irreducible max-stochastic A.
    """
    A = as_matrix(A)
    G = from_matrix(A)
    _require_all_roots(G)
    witnesses = []
    w = np.empty(G.n)
    for root in range(G.n):
        tree = _lex_max_arborescence(G, root)
        witnesses.append(tree)
        w[root] = tree.weight
    return RstReport(vector=w, witnesses=tuple(witnesses), residual=verify_left_max_eigen(A, w))


def sum_rst_vector(A, max_enum: int = DEFAULT_ENUM_CAP) -> RstReport:
    """Classical RST vector: w_i sums the i-tree weights.

    For an irreducible row-stochastic matrix, w / sum(w) is the stationary
    distribution and the residual of A^T w = w vanishes.
    """
    A = as_matrix(A)
    G = from_matrix(A)
    _require_all_roots(G)
    w = np.array(
        [
            math.fsum(t.weight for t in enumerate_itrees(G, root, max_enum))
            for root in range(G.n)
        ]
    )
    y = A.T @ w
    residual = float(np.max(np.abs(y - w) / np.maximum(w, 1.0)))
    return RstReport(vector=w, witnesses=None, residual=residual)


def p_rst_vector(A, p: int, max_enum: int = DEFAULT_ENUM_CAP) -> RstReport:
    """p-semiring RST vector: w_i = (sum over i-trees of weight^p)^(1/p).

    Computed through the isomorphism a -> a^(1/p) with ordinary arithmetic;
    large p switches to log-space accumulation so tree weights below the
    underflow threshold of weight^p still contribute.  The residual is the
    deviation of the p-semiring equation A^T (x_p) w = w.
    """
    _check_p(p)
    A = as_matrix(A)
    G = from_matrix(A)
    _require_all_roots(G)
    w = np.empty(G.n)
    for root in range(G.n):
        weights = [t.weight for t in enumerate_itrees(G, root, max_enum)]
        if p <= LOG_DOMAIN_P:
            w[root] = math.fsum(x**p for x in weights) ** (1.0 / p)
        else:
            logs = np.array([math.log(x) for x in weights])
            w[root] = math.exp(np.logaddexp.reduce(p * logs) / p)
    y = row_p_norms((A * w[:, None]).T, p)
    residual = float(np.max(np.abs(y - w) / np.maximum(w, 1.0)))
    return RstReport(vector=w, witnesses=None, residual=residual)


def verify_left_max_eigen(A, w) -> float:
    """max_i |(A^T (x) w)_i - w_i| / max(w_i, 1)."""
    A = as_matrix(A)
    w = as_vector(w, A.shape[0])
    y = max_matvec(A.T, w)
    return float(np.max(np.abs(y - w) / np.maximum(w, 1.0)))
