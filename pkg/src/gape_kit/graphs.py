"""Node-labeled graphs, canonical generators and derived matrices.

Nodes are 1-indexed in every external format (JSON, CLI, error messages)
and 0-indexed internally. Adjacency is a dense 0/1 float64 matrix; entry
(i, j) = 1 means an edge from node i+1 to node j+1. Undirected graphs are
stored with symmetric adjacency.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "GraphError",
    "IsolatedNodeError",
    "LabeledGraph",
    "graph_from_edges",
    "string_graph",
    "cycle_graph",
    "erdos_renyi",
    "csl_graph",
    "symmetrize",
    "degree_matrix",
    "laplacian",
    "walk_matrix",
    "label_matrix",
    "relabel_nodes",
    "load_graph",
    "save_graph",
]


class GraphError(ValueError):
    """Invalid graph construction or graph-operation precondition."""


class IsolatedNodeError(GraphError):
    """An operation requiring positive degrees met an isolated node."""

    def __init__(self, node: int):
        super().__init__(f"node {node} is isolated (degree 0)")
        self.node = node


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LabeledGraph:
    """A directed or undirected graph with a label in {1..m} on each node."""

    n: int
    labels: np.ndarray
    adjacency: np.ndarray
    directed: bool

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if self.n < 1:
            raise GraphError(f"graph needs at least one node, got n={self.n}")
        if adj.shape != (self.n, self.n):
            raise GraphError(f"adjacency shape {adj.shape} does not match n={self.n}")
        if labels.shape != (self.n,):
            raise GraphError(f"labels shape {labels.shape} does not match n={self.n}")
        if not np.all((adj == 0.0) | (adj == 1.0)):
            raise GraphError("adjacency entries must be exactly 0 or 1")
        if not self.directed and not np.array_equal(adj, adj.T):
            raise GraphError("undirected graph requires symmetric adjacency")
        if labels.min() < 1:
            raise GraphError("labels must be positive integers (1-indexed)")
        object.__setattr__(self, "adjacency", _frozen(adj))
        object.__setattr__(self, "labels", _frozen(labels))

    @property
    def max_label(self) -> int:
        return int(self.labels.max())

    def edge_count(self) -> int:
        """Number of edges; each undirected edge counted once."""
        total = int(self.adjacency.sum())
        if self.directed:
            return total
        loops = int(np.trace(self.adjacency))
        return (total - loops) // 2 + loops

    def label_of(self, node: int) -> int:
        """Label of a 1-indexed node."""
        if not 1 <= node <= self.n:
            raise GraphError(f"node {node} out of range 1..{self.n}")
        return int(self.labels[node - 1])

    def has_edge(self, u: int, v: int) -> bool:
        """Edge test on 1-indexed nodes."""
        return self.adjacency[u - 1, v - 1] == 1.0


def graph_from_edges(n: int, edges, labels=None, directed: bool = False) -> LabeledGraph:
    """Build a graph from 1-indexed (u, v) edge pairs."""
    adj = np.zeros((n, n))
    for u, v in edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"edge ({u}, {v}) out of range 1..{n}")
        adj[u - 1, v - 1] = 1.0
        if not directed:
            adj[v - 1, u - 1] = 1.0
    if labels is None:
        labels = np.ones(n, dtype=np.int64)
    return LabeledGraph(n=n, labels=np.asarray(labels), adjacency=adj, directed=directed)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def string_graph(length: int) -> LabeledGraph:
    """Directed path graph of a string: label 1 on node 1, label 2 after.

    Edges run i -> i+1, so the adjacency is nilpotent.
    """
    if length < 1:
        raise GraphError(f"string graph needs length >= 1, got {length}")
    labels = np.full(length, 2, dtype=np.int64)
    labels[0] = 1
    edges = [(i, i + 1) for i in range(1, length)]
    adj = np.zeros((length, length))
    for u, v in edges:
        adj[u - 1, v - 1] = 1.0
    return LabeledGraph(n=length, labels=labels, adjacency=adj, directed=True)


def cycle_graph(n: int) -> LabeledGraph:
    """Undirected cycle on n >= 3 nodes, all labels 1."""
    if n < 3:
        raise GraphError(f"cycle graph needs n >= 3, got {n}")
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    return graph_from_edges(n, edges, directed=False)


def erdos_renyi(n: int, p: float, seed: int) -> LabeledGraph:
    """Undirected G(n, p): each unordered pair is an edge with probability p."""
    if n < 1:
        raise GraphError(f"need n >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    upper = rng.random((n, n)) < p
    adj = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    adj[iu] = upper[iu].astype(np.float64)
    adj = adj + adj.T
    return LabeledGraph(n=n, labels=np.ones(n, dtype=np.int64), adjacency=adj, directed=False)


def csl_graph(n: int, skip: int) -> LabeledGraph:
    """Circular skip-link graph: an n-cycle plus chords i -> i+skip (mod n).

    Requires a skip that keeps the graph simple and 4-regular, so skip
    values congruent to 0 or +-1 mod n are rejected, as is 2*skip == 0
    (mod n) which would collapse the two skip neighbors of each node.
    """
    if n < 5:
        raise GraphError(f"csl graph needs n >= 5, got {n}")
    if skip < 1:
        raise GraphError(f"skip must be positive, got {skip}")
    s = skip % n
    if s in (0, 1, n - 1):
        raise GraphError(
            f"skip {skip} coincides with cycle edges for n={n}; graph would not be 4-regular"
        )
    if (2 * s) % n == 0:
        raise GraphError(
            f"skip {skip} is its own inverse mod {n}; nodes would have degree 3"
        )
    edges = [(i, i % n + 1) for i in range(1, n + 1)]
    edges += [(i, (i - 1 + s) % n + 1) for i in range(1, n + 1)]
    return graph_from_edges(n, edges, directed=False)


# ---------------------------------------------------------------------------
# Derived matrices
# ---------------------------------------------------------------------------


def symmetrize(adjacency: np.ndarray) -> np.ndarray:
    """Undirected view of an adjacency: max(A, A^T), preserving 0/1 entries."""
    a = np.asarray(adjacency, dtype=np.float64)
    return np.maximum(a, a.T)


def degree_matrix(g: LabeledGraph) -> np.ndarray:
    """Diagonal degree matrix from the symmetrized adjacency row sums."""
    a = symmetrize(g.adjacency)
    return np.diag(a.sum(axis=1))


def laplacian(g: LabeledGraph) -> np.ndarray:
    """Graph Laplacian L = D - A on the symmetrized adjacency."""
    a = symmetrize(g.adjacency)
    return np.diag(a.sum(axis=1)) - a


def walk_matrix(g: LabeledGraph) -> np.ndarray:
    """Column-stochastic walk matrix W = A D^{-1} on the symmetrized adjacency."""
    a = symmetrize(g.adjacency)
    deg = a.sum(axis=1)
    for i, d in enumerate(deg):
        if d == 0.0:
            raise IsolatedNodeError(i + 1)
    return a / deg[np.newaxis, :]


def label_matrix(g: LabeledGraph, m: int) -> np.ndarray:
    """One-hot label matrix in {0,1}^{m x n}; column v flags label(v)."""
    if g.max_label > m:
        raise GraphError(
            f"graph has label {g.max_label} but only m={m} labels were declared"
        )
    out = np.zeros((m, g.n))
    out[g.labels - 1, np.arange(g.n)] = 1.0
    return out


def relabel_nodes(g: LabeledGraph, perm) -> LabeledGraph:
    """Apply a node permutation: node i of the result is node perm[i] of g.

    ``perm`` is a 0-based permutation array of length n.
    """
    p = np.asarray(perm, dtype=np.int64)
    if sorted(p.tolist()) != list(range(g.n)):
        raise GraphError("perm must be a permutation of 0..n-1")
    adj = g.adjacency[np.ix_(p, p)]
    return LabeledGraph(n=g.n, labels=g.labels[p], adjacency=adj, directed=g.directed)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def graph_to_dict(g: LabeledGraph) -> dict:
    edges = []
    adj = g.adjacency
    for i in range(g.n):
        for j in range(g.n):
            if adj[i, j] == 1.0:
                if g.directed or j >= i:
                    edges.append([i + 1, j + 1])
    return {
        "n": g.n,
        "directed": g.directed,
        "labels": [int(x) for x in g.labels],
        "edges": edges,
    }


def graph_from_dict(d: dict) -> LabeledGraph:
    try:
        n = int(d["n"])
        directed = bool(d["directed"])
        labels = d["labels"]
        edges = d["edges"]
    except KeyError as e:
        raise GraphError(f"graph JSON missing required key: {e}") from e
    if len(labels) != n:
        raise GraphError(f"graph JSON has {len(labels)} labels for n={n}")
    return graph_from_edges(n, edges, labels=labels, directed=directed)


def save_graph(g: LabeledGraph, path) -> None:
    Path(path).write_text(json.dumps(graph_to_dict(g)) + "\n", encoding="utf-8")


def load_graph(path) -> LabeledGraph:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise GraphError(f"invalid graph JSON at {path}: {e}") from e
    return graph_from_dict(data)
