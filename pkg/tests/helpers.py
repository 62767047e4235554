"""Shared test fixtures: the worked 4x4 example, random generators, brute-force oracles."""

from fractions import Fraction

import numpy as np

from maxtree.digraph import ITree, WeightedDigraph


def rational_matrix(rows) -> np.ndarray:
    return np.array([[float(Fraction(x)) for x in row] for row in rows])


EXAMPLE_ROWS = [
    ["1", "3/4", "5/6", "0"],
    ["1/2", "1", "1/4", "9/10"],
    ["0", "0", "1", "7/8"],
    ["1/3", "0", "1", "4/5"],
]

EXAMPLE_STAR_ROWS = [
    ["1", "3/4", "5/6", "35/48"],
    ["1/2", "1", "9/10", "9/10"],
    ["7/24", "7/32", "1", "7/8"],
    ["1/3", "1/4", "1", "1"],
]

EXAMPLE_W = np.array([21 / 80, 7 / 32, 3 / 4, 21 / 32])
EXAMPLE_MIN_CRITICAL = np.array([7 / 24, 7 / 32, 5 / 6, 35 / 48])

# Maximum-weight trees per root, 0-indexed (tail, head) pairs.
EXAMPLE_TREES = {
    0: {(2, 3), (1, 3), (3, 0)},
    1: {(2, 3), (3, 0), (0, 1)},
    2: {(0, 2), (1, 3), (3, 2)},
    3: {(1, 3), (0, 2), (2, 3)},
}


def example_matrix() -> np.ndarray:
    return rational_matrix(EXAMPLE_ROWS)


def example_star() -> np.ndarray:
    return rational_matrix(EXAMPLE_STAR_ROWS)


# --- random fixtures ---------------------------------------------------------


def random_irreducible_max_stochastic(rng, n, extra_edges=None):
    """Support = random Hamiltonian cycle plus extras; rows normalized by max."""
    if n == 1:
        return np.array([[1.0]])
    perm = rng.permutation(n)
    support = {(int(perm[i]), int(perm[(i + 1) % n])) for i in range(n)}
    if extra_edges is None:
        extra_edges = n
    for _ in range(extra_edges):
        i, j = rng.integers(0, n, 2)
        support.add((int(i), int(j)))
    A = np.zeros((n, n))
    for i, j in support:
        A[i, j] = rng.uniform(0.05, 1.0)
    return A / A.max(axis=1, keepdims=True)


def random_max_stochastic_general(rng, n, extra_ones=False):
    """Random support (possibly reducible), every row nonempty, rows normalized by max.

    With extra_ones, some rows get a second exact 1 so multi-node critical
    components appear.
    """
    A = np.zeros((n, n))
    for i in range(n):
        degree = int(rng.integers(1, n + 1))
        heads = rng.choice(n, size=degree, replace=False)
        for j in heads:
            A[i, int(j)] = rng.uniform(0.05, 1.0)
    A = A / A.max(axis=1, keepdims=True)
    if extra_ones:
        for i in range(n):
            if rng.uniform() < 0.5:
                A[i, int(rng.integers(0, n))] = 1.0
    return A


def random_row_stochastic(rng, n):
    A = rng.uniform(0.05, 1.0, (n, n))
    return A / A.sum(axis=1, keepdims=True)


def random_positive_irreducible(rng, n):
    return rng.uniform(0.05, 2.0, (n, n))


def _attach_forest(rng, A, attached, loose):
    """Give each loose node one exact-1 edge toward the attached set."""
    attached = list(attached)
    for v in loose:
        target = attached[int(rng.integers(0, len(attached)))]
        A[v, target] = 1.0
        attached.append(v)


def random_single_critical(rng, n):
    """Dense irreducible max-stochastic with exactly one critical SCC.

    Exactly one entry per row equals 1; those entries form one cycle plus a
    forest hanging into it, so the weight-1 edges contain a single cycle.
    """
    A = rng.uniform(0.05, 0.95, (n, n))
    perm = [int(v) for v in rng.permutation(n)]
    k = int(rng.integers(1, n + 1))
    cycle, rest = perm[:k], perm[k:]
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        A[a, b] = 1.0
    _attach_forest(rng, A, cycle, rest)
    return A


def random_two_critical(rng, n):
    """Dense irreducible max-stochastic whose critical graph has two components."""
    assert n >= 2
    A = rng.uniform(0.05, 0.95, (n, n))
    perm = [int(v) for v in rng.permutation(n)]
    k1 = int(rng.integers(1, n))
    k2 = int(rng.integers(1, n - k1 + 1))
    first, second, rest = perm[:k1], perm[k1 : k1 + k2], perm[k1 + k2 :]
    for cyc in (first, second):
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            A[a, b] = 1.0
    _attach_forest(rng, A, first + second, rest)
    return A


def random_sr_matrix(rng, n, noise=0.3):
    x = rng.uniform(0.5, 2.0, n)
    E = rng.normal(0.0, noise, (n, n))
    S = (E - E.T) / 2.0
    A = np.outer(x, 1.0 / x) * np.exp(S)
    np.fill_diagonal(A, 1.0)
    return A


def random_row_normalized(rng, rows, cols):
    M = rng.uniform(0.05, 1.0, (rows, cols))
    return M / M.max(axis=1, keepdims=True)


def random_reachable_graph(rng, n, root, extra_per_node=2):
    """Sparse graph where every node reaches the root (random in-forest + extras)."""
    others = [int(v) for v in rng.permutation([v for v in range(n) if v != root])]
    order = [root] + others
    edges = {}
    for k, v in enumerate(order[1:], start=1):
        parent = order[int(rng.integers(0, k))]
        edges[(v, parent)] = float(rng.uniform(0.05, 1.0))
    for _ in range(extra_per_node * n):
        i, j = (int(v) for v in rng.integers(0, n, 2))
        if i != j and (i, j) not in edges:
            edges[(i, j)] = float(rng.uniform(0.05, 1.0))
    return WeightedDigraph(n, [(i, j, w) for (i, j), w in edges.items()])


# --- independent oracles -----------------------------------------------------


def brute_force_star(A: np.ndarray) -> np.ndarray:
    """Max path weight over all simple paths (diagonal 1), by exhaustive DFS."""
    n = A.shape[0]
    S = np.eye(n)

    def dfs(v, target, weight, visited):
        best = 0.0
        for u in range(n):
            if A[v, u] <= 0:
                continue
            w2 = weight * A[v, u]
            if u == target:
                best = max(best, w2)
            elif u not in visited:
                best = max(best, dfs(u, target, w2, visited | {u}))
        return best

    for i in range(n):
        for j in range(n):
            if i != j:
                S[i, j] = dfs(i, j, 1.0, {i})
    return S


def stationary_from_linear_solve(P: np.ndarray) -> np.ndarray:
    """Stationary distribution of a row-stochastic P from a direct linear system."""
    n = P.shape[0]
    M = P.T - np.eye(n)
    M[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    return np.linalg.solve(M, b)


def bfs_itree(G: WeightedDigraph, root: int) -> ITree:
    """Constructive tree: reverse BFS from the root, attaching each node once."""
    parent = {}
    seen = {root}
    frontier = [root]
    while frontier:
        u = frontier.pop(0)
        for v in G.predecessors(u):
            if v not in seen:
                seen.add(v)
                parent[v] = u
                frontier.append(v)
    assert len(seen) == G.n, "not every node reaches the root"
    weight = 1.0
    for v in sorted(parent):
        weight *= G.weight(v, parent[v])
    return ITree(root=root, edges=tuple(parent.items()), weight=weight)
