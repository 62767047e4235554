"""Digraph view of a nonnegative matrix.

An entry a_ij > 0 is a directed edge (i, j) of weight a_ij; zero entries are
non-edges.  Nodes are 0-indexed in process and 1-indexed in every report.  An
i-tree is a spanning subgraph in which every node except i has exactly one
outgoing edge, i has none, and there is no directed cycle; its weight is the
product of its edge weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .semiring import DEFAULT_TOL, Tolerance, as_matrix


class WeightedDigraph:
    """Immutable-by-convention digraph with positive edge weights.

    Edges are kept sorted by (tail, head) so that every traversal in the
    package is deterministic.
    """

    def __init__(self, n: int, edges) -> None:
        if n < 1:
            raise DomainError("digraph needs at least one node")
        self.n = int(n)
        cleaned = []
        seen = set()
        for tail, head, weight in edges:
            tail, head, weight = int(tail), int(head), float(weight)
            if not (0 <= tail < n and 0 <= head < n):
                raise DomainError(f"edge ({tail}, {head}) out of range for n={n}")
            if not (weight > 0 and math.isfinite(weight)):
                raise DomainError(f"edge ({tail}, {head}) must have finite positive weight")
            if (tail, head) in seen:
                raise DomainError(f"duplicate edge ({tail}, {head})")
            seen.add((tail, head))
            cleaned.append((tail, head, weight))
        cleaned.sort()
        self.edges: tuple[tuple[int, int, float], ...] = tuple(cleaned)
        self._out: list[tuple[tuple[int, float], ...]] = [()] * n
        self._pred: list[list[int]] = [[] for _ in range(n)]
        self._weight: dict[tuple[int, int], float] = {}
        buckets: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for tail, head, weight in cleaned:
            buckets[tail].append((head, weight))
            self._pred[head].append(tail)
            self._weight[(tail, head)] = weight
        self._out = [tuple(b) for b in buckets]

    def out_edges(self, v: int) -> tuple[tuple[int, float], ...]:
        """(head, weight) pairs leaving v, sorted by head."""
        return self._out[v]

    def successors(self, v: int) -> tuple[int, ...]:
        return tuple(h for h, _ in self._out[v])

    def predecessors(self, v: int) -> tuple[int, ...]:
        return tuple(self._pred[v])

    def has_edge(self, tail: int, head: int) -> bool:
        return (tail, head) in self._weight

    def weight(self, tail: int, head: int) -> float:
        """Edge weight, or 0.0 for a non-edge."""
        return self._weight.get((tail, head), 0.0)

    def __repr__(self) -> str:  # pragma: no cover
        return f"WeightedDigraph(n={self.n}, edges={len(self.edges)})"


@dataclass(frozen=True)
class ITree:
    """A rooted spanning tree: edge (j, k) means j points toward the root."""

    root: int
    edges: tuple[tuple[int, int], ...]
    weight: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(sorted((int(t), int(h)) for t, h in self.edges)))


def from_matrix(A) -> WeightedDigraph:
    """Digraph of a matrix: edge (i, j) with weight a_ij iff a_ij > 0."""
    A = as_matrix(A)
    n = A.shape[0]
    edges = [(i, j, A[i, j]) for i in range(n) for j in range(n) if A[i, j] > 0]
    return WeightedDigraph(n, edges)


def strongly_connected_components(G: WeightedDigraph) -> list[list[int]]:
    """Maximal SCCs in reverse topological order of the condensation.

    Each component is sorted ascending; a component is emitted before any
    component with an edge into it, which makes reports deterministic.
    """
    n = G.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for start in range(n):
        if index[start] != -1:
            continue
        work = [(start, iter(G.successors(start)))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(G.successors(w))))
                    pushed = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
    return components


def is_irreducible(A) -> bool:
    """True iff the digraph of A is strongly connected (n = 1 always counts)."""
    G = from_matrix(A)
    if G.n == 1:
        return True
    return len(strongly_connected_components(G)) == 1


def saturation_digraph(A, tol: Tolerance = DEFAULT_TOL) -> WeightedDigraph:
    """Subgraph keeping exactly the edges of weight 1 (within tol)."""
    A = as_matrix(A)
    n = A.shape[0]
    edges = [
        (i, j, A[i, j])
        for i in range(n)
        for j in range(n)
        if A[i, j] > 0 and tol.is_one(A[i, j])
    ]
    return WeightedDigraph(n, edges)


def validate_itree(G: WeightedDigraph, T: ITree, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Check that T is a valid i-tree of G with a consistent weight."""
    n = G.n
    if not 0 <= T.root < n:
        return False
    succ: dict[int, int] = {}
    for tail, head in T.edges:
        if tail == T.root or tail == head or not G.has_edge(tail, head):
            return False
        if tail in succ:
            return False
        succ[tail] = head
    if sorted(succ) != [v for v in range(n) if v != T.root]:
        return False
    for start in succ:
        v = start
        for _ in range(n):
            if v == T.root:
                break
            v = succ[v]
        else:
            return False
    weight = 1.0
    for tail, head in T.edges:
        weight *= G.weight(tail, head)
    return tol.close(weight, T.weight)


def tree_path(T: ITree, j: int) -> list[int]:
    """The unique node path from j to the root along outgoing edges ([] if j is the root)."""
    if j == T.root:
        return []
    succ = dict(T.edges)
    path = [j]
    v = j
    for _ in range(len(succ) + 1):
        if v not in succ:
            raise DomainError(f"node {v + 1} has no outgoing edge in the tree")
        v = succ[v]
        path.append(v)
        if v == T.root:
            return path
    raise DomainError("tree contains a cycle")


def reverse_reachable(G: WeightedDigraph, target: int) -> set[int]:
    """All nodes with a directed path to target (target included)."""
    seen = {target}
    frontier = [target]
    while frontier:
        v = frontier.pop()
        for u in G.predecessors(v):
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return seen
