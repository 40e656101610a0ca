"""Weighted graph-walking automata and the encoding they induce.

A k-state automaton walks the edges of a node-labeled graph. A run is a
sequence of (state, node) configurations; its weight is the initial weight
of the first configuration, times one transition weight per step, times
the final weight of the last configuration. The encoding of a node v is
the total weight of all runs ending at v, one coordinate per ending state:
the solution columns of

    P = mu P A + alpha l        (P is k x n, l the one-hot label matrix)

Hadamard-scaled by tau l. Transition weights are stored column-convention:
``mu[r, q]`` is the weight of moving from state q to state r, which makes
the matrix fixed point above literally the sum over runs (see run_weight).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from gape_kit.encoding import EncodingMatrix
from gape_kit.graphs import GraphError, LabeledGraph, label_matrix, string_graph
from gape_kit.numerics import DEFAULT_TOL, Tolerances
from gape_kit.sylvester import SolveReport, SolverError, solve_gape_system

__all__ = [
    "Wgwa",
    "init_damped",
    "softmax_variant",
    "encode_gape",
    "run_weight",
    "enumerate_run_weight_sum",
    "sinusoidal_wgwa",
    "encode_sinusoidal_via_wgwa",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Wgwa:
    """A weighted graph-walking automaton with k states over m node labels.

    ``alpha`` (k x m) holds initial weights per starting label, ``mu``
    (k x k) transition weights with mu[r, q] = weight of q -> r, and
    ``tau`` (k x m) final weights per ending label. ``gamma`` and ``seed``
    record how the automaton was initialized when that is known.
    """

    k: int
    m: int
    alpha: np.ndarray
    mu: np.ndarray
    tau: np.ndarray
    gamma: float | None = None
    seed: int | None = None

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.float64)
        mu = np.asarray(self.mu, dtype=np.float64)
        tau = np.asarray(self.tau, dtype=np.float64)
        if self.k < 1 or self.m < 1:
            raise ValueError(f"need k >= 1 and m >= 1, got k={self.k}, m={self.m}")
        if alpha.shape != (self.k, self.m):
            raise ValueError(f"alpha must be {self.k}x{self.m}, got {alpha.shape}")
        if mu.shape != (self.k, self.k):
            raise ValueError(f"mu must be {self.k}x{self.k}, got {mu.shape}")
        if tau.shape != (self.k, self.m):
            raise ValueError(f"tau must be {self.k}x{self.m}, got {tau.shape}")
        for name, arr in (("alpha", alpha), ("mu", mu), ("tau", tau)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains NaN or Inf entries")
        object.__setattr__(self, "alpha", _frozen(alpha))
        object.__setattr__(self, "mu", _frozen(mu))
        object.__setattr__(self, "tau", _frozen(tau))

    def with_weights(self, alpha=None, mu=None, tau=None) -> "Wgwa":
        """Copy with some weight matrices replaced."""
        return Wgwa(
            k=self.k,
            m=self.m,
            alpha=self.alpha if alpha is None else alpha,
            mu=self.mu if mu is None else mu,
            tau=self.tau if tau is None else tau,
            gamma=self.gamma,
            seed=self.seed,
        )


def _random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random orthogonal matrix via QR with sign fixing."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def init_damped(k: int, m: int, gamma: float, seed: int) -> Wgwa:
    """Orthogonally initialize mu and alpha, damping mu by gamma.

    mu is gamma times a random orthogonal matrix, so its spectral radius is
    exactly gamma and the encoding fixed point stays well defined whenever
    gamma * rho(A) < 1. alpha takes columns of an independent random
    orthogonal matrix; tau is all ones.
    """
    if gamma <= 0:
        raise ValueError(f"damping factor must be positive, got {gamma}")
    if k < 1 or m < 1:
        raise ValueError(f"need k >= 1 and m >= 1, got k={k}, m={m}")
    rng = np.random.default_rng(seed)
    mu = gamma * _random_orthogonal(k, rng)
    alpha = _random_orthogonal(max(k, m), rng)[:k, :m]
    tau = np.ones((k, m))
    return Wgwa(k=k, m=m, alpha=alpha, mu=mu, tau=tau, gamma=gamma, seed=seed)


def softmax_variant(w: Wgwa, mu_row_softmax: bool = True,
                    alpha_col_softmax: bool = False) -> Wgwa:
    """Normalized automaton variants: row-softmax mu, column-softmax alpha.

    Row-softmaxing mu undoes any damping (rows become stochastic), which
    generally puts rho(mu) at 1; the direct solvers still apply as long as
    the vec-trick system stays nonsingular.
    """
    mu = w.mu
    alpha = w.alpha
    if mu_row_softmax:
        e = np.exp(mu - mu.max(axis=1, keepdims=True))
        mu = e / e.sum(axis=1, keepdims=True)
    if alpha_col_softmax:
        e = np.exp(alpha - alpha.max(axis=0, keepdims=True))
        alpha = e / e.sum(axis=0, keepdims=True)
    return w.with_weights(alpha=alpha, mu=mu)


def encode_gape(g: LabeledGraph, w: Wgwa, strategy: str = "auto",
                tol: Tolerances = DEFAULT_TOL,
                rho_product: float | None = None
                ) -> tuple[EncodingMatrix, SolveReport]:
    """Encode every node of g with automaton w.

    Solves P = mu P A + alpha l and returns row v = P[:, v] * (tau l)[:, v]
    as an n x k matrix, along with the solver report.
    """
    if g.max_label > w.m:
        raise GraphError(
            f"graph uses label {g.max_label} but the automaton knows m={w.m} labels"
        )
    ell = label_matrix(g, w.m)
    c = w.alpha @ ell
    try:
        p, report = solve_gape_system(w.mu, g.adjacency, c, strategy=strategy,
                                      tol=tol, rho_product=rho_product)
    except SolverError as e:
        raise SolverError(
            f"gape encoding failed on {g.n}-node graph: {e}",
            rho_product=e.rho_product, block=e.block,
        ) from e
    values = (p * (w.tau @ ell)).T
    meta = {
        "k_enc": w.k,
        "gamma": w.gamma,
        "seed": w.seed,
        "solver": report.method,
        "strategy": strategy,
    }
    return EncodingMatrix(scheme="gape", values=values, meta=meta), report


def run_weight(g: LabeledGraph, w: Wgwa, configs) -> float:
    """Weight of one run, a sequence of 1-indexed (state, node) pairs.

    The weight is alpha[q1, label(v1)] times the product of transition
    weights mu[q_{t+1}, q_t] over consecutive configurations, times
    tau[qT, label(vT)]. Consecutive nodes must be joined by an edge of g;
    states may change freely (the automaton pays the transition weight).
    """
    configs = list(configs)
    if not configs:
        raise ValueError("a run needs at least one configuration")
    for q, v in configs:
        if not 1 <= q <= w.k:
            raise ValueError(f"state {q} out of range 1..{w.k}")
        if not 1 <= v <= g.n:
            raise GraphError(f"node {v} out of range 1..{g.n}")
    q1, v1 = configs[0]
    qt, vt = configs[-1]
    weight = w.alpha[q1 - 1, g.label_of(v1) - 1]
    for (q_a, v_a), (q_b, v_b) in zip(configs, configs[1:]):
        if not g.has_edge(v_a, v_b):
            raise GraphError(f"no edge from node {v_a} to node {v_b}")
        weight *= w.mu[q_b - 1, q_a - 1]
    weight *= w.tau[qt - 1, g.label_of(vt) - 1]
    return float(weight)


def enumerate_run_weight_sum(g: LabeledGraph, w: Wgwa, node: int, state: int,
                             max_len: int) -> float:
    """Sum of run_weight over every run of length <= max_len ending at (state, node).

    Exhaustive over node walks and state sequences, so it is exponential
    and meant as a small-instance semantic oracle: on DAGs (where walks
    terminate) the value equals the encoding entry for (node, state).
    """
    adj = g.adjacency
    total = 0.0
    walks = [(node,)]
    for _ in range(max_len):
        next_walks = []
        for walk in walks:
            head = walk[0]
            for q_seq in itertools.product(range(1, w.k + 1), repeat=len(walk) - 1):
                states = q_seq + (state,)
                total += run_weight(g, w, list(zip(states, walk)))
            for u in range(1, g.n + 1):
                if adj[u - 1, head - 1] == 1.0:
                    next_walks.append((u,) + walk)
        walks = next_walks
        if not walks:
            break
    return total


def sinusoidal_wgwa(k: int) -> Wgwa:
    """The automaton whose path-graph encoding is the sinusoidal PE.

    Block j of mu rotates by theta_j = -10000^(-2(j-1)/k); starting weight
    1 sits in the cosine slot of each block for label 1 (string start) and
    the automaton carries a second, weightless label for the other nodes.
    """
    if k < 2 or k % 2 != 0:
        raise ValueError(f"sinusoidal automaton needs even k >= 2, got {k}")
    alpha = np.zeros((k, 2))
    alpha[1::2, 0] = 1.0
    mu = np.zeros((k, k))
    for j in range(k // 2):
        theta = -(10000.0 ** (-2.0 * j / k))
        c, s = np.cos(theta), np.sin(theta)
        mu[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = [[c, -s], [s, c]]
    tau = np.ones((k, 2))
    return Wgwa(k=k, m=2, alpha=alpha, mu=mu, tau=tau)


def encode_sinusoidal_via_wgwa(length: int, k: int) -> EncodingMatrix:
    """Sinusoidal positional encodings computed by the automaton route.

    Runs the rotation-block automaton over the directed string graph with
    the fixed-point solver: the path adjacency is nilpotent, so iteration
    terminates exactly even though rho(mu) = 1.
    """
    g = string_graph(length)
    w = sinusoidal_wgwa(k)
    enc, report = encode_gape(g, w, strategy="fixed_point")
    meta = dict(enc.meta)
    meta.update({"variant": "wgwa", "length": length})
    return EncodingMatrix(scheme="sinusoidal", values=enc.values, meta=meta)
