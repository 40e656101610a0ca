"""Reference positional encodings and the equivalence constructions.

Implements the schemes the automaton encoding is compared against --
sinusoidal, Laplacian eigenvectors (LAPE), random-walk self-return
probabilities (RW), personalized PageRank (PPR) and its fixed-step-size
power variant (PPRP) -- plus the constructions that realize LAPE and PPR
through the automaton fixed point.
"""

from __future__ import annotations

import numpy as np

from gape_kit.encoding import EncodingMatrix
from gape_kit.graphs import GraphError, LabeledGraph, laplacian, walk_matrix
from gape_kit.numerics import (
    DEFAULT_TOL,
    NumericsError,
    Tolerances,
    eig_symmetric,
    solve_dense_multi,
)
from gape_kit.sylvester import solve_gape_system
from gape_kit.wgwa import Wgwa

__all__ = [
    "reference_sinusoidal",
    "lape",
    "lape_wgwa_construction",
    "rw_encoding",
    "ppr_matrix",
    "ppr_series_matrix",
    "pprp_encoding",
    "gape_as_ppr",
    "minmax_normalize",
    "pearson_columns",
    "pearson_rows",
]


def reference_sinusoidal(length: int, k: int) -> EncodingMatrix:
    """Classic sinusoidal encodings: position p gets sin/cos pairs.

    Dimension pair (2j-1, 2j) of position p (0-based) holds
    (sin(p * w_j), cos(p * w_j)) with w_j = 10000^(-2(j-1)/k).
    """
    if length < 1:
        raise ValueError(f"need length >= 1, got {length}")
    if k < 2 or k % 2 != 0:
        raise ValueError(f"sinusoidal encoding needs even k >= 2, got {k}")
    pos = np.arange(length, dtype=np.float64)[:, np.newaxis]
    j = np.arange(k // 2, dtype=np.float64)[np.newaxis, :]
    angles = pos * (10000.0 ** (-2.0 * j / k))
    values = np.empty((length, k))
    values[:, 0::2] = np.sin(angles)
    values[:, 1::2] = np.cos(angles)
    return EncodingMatrix(scheme="sinusoidal", values=values,
                          meta={"variant": "reference", "k_enc": k, "length": length})


def lape(g: LabeledGraph, k_enc: int, tol: Tolerances = DEFAULT_TOL) -> EncodingMatrix:
    """Laplacian-eigenvector encoding: the k_enc smallest eigenvectors.

    Column j of the output is the eigenvector of L = D - A with the j-th
    smallest eigenvalue, sign-canonicalized. Unlike walk-based encodings
    the width is capped by the graph: k_enc > n is an error because the
    graph simply does not have that many eigenvectors.
    """
    if k_enc < 1:
        raise ValueError(f"need k_enc >= 1, got {k_enc}")
    if k_enc > g.n:
        raise GraphError(
            f"graph has only {g.n} Laplacian eigenvectors but k_enc={k_enc} were requested"
        )
    dec = eig_symmetric(laplacian(g), tol)
    values = dec.vectors[:, :k_enc].copy()
    meta = {"k_enc": k_enc, "eigenvalues": [float(x) for x in dec.values[:k_enc]]}
    return EncodingMatrix(scheme="lape", values=values, meta=meta)


def lape_wgwa_construction(g: LabeledGraph, tol: Tolerances = DEFAULT_TOL
                           ) -> tuple[Wgwa, EncodingMatrix]:
    """The n-state automaton that reproduces LAPE when L replaces A.

    With mu the diagonal of inverse nonzero eigenvalues and P the
    transposed eigenvector matrix, P = mu P L holds row by row on the
    nonzero spectrum; rows belonging to (near-)zero eigenvalues are zeroed
    on both sides, since 1/lambda is undefined there. The construction is
    verified by substitution and fails loudly if the residual exceeds 1e-7.
    """
    lap = laplacian(g)
    dec = eig_symmetric(lap, tol)
    n = g.n
    inv = np.zeros(n)
    nonzero = np.abs(dec.values) > tol.zero_eigenvalue
    inv[nonzero] = 1.0 / dec.values[nonzero]
    mu = np.diag(inv)
    p = dec.vectors.T.copy()
    p[~nonzero, :] = 0.0

    residual = float(np.abs(p - mu @ p @ lap).max())
    if residual > 1e-7:
        raise NumericsError(
            f"LAPE automaton construction residual {residual:.3g} exceeds 1e-7"
        )

    w = Wgwa(k=n, m=1, alpha=np.zeros((n, 1)), mu=mu, tau=np.ones((n, 1)))
    enc = EncodingMatrix(
        scheme="gape",
        values=p.T,
        meta={"construction": "lape_remark", "residual": residual,
              "zero_modes": int((~nonzero).sum())},
    )
    return w, enc


def rw_encoding(g: LabeledGraph, k_enc: int) -> EncodingMatrix:
    """Random-walk encoding: column i holds the diagonal of W^i.

    Entry (u, i) is the probability that an i-step walk from u returns
    to u, with W = A D^{-1}.
    """
    if k_enc < 1:
        raise ValueError(f"need k_enc >= 1, got {k_enc}")
    w = walk_matrix(g)
    values = np.empty((g.n, k_enc))
    power = np.eye(g.n)
    for i in range(k_enc):
        power = power @ w
        values[:, i] = np.diag(power)
    return EncodingMatrix(scheme="rw", values=values, meta={"k_enc": k_enc})


def ppr_matrix(g: LabeledGraph, beta: float, walk: np.ndarray | None = None,
               tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Personalized PageRank scores: the solution of Pi = beta I + (1-beta) Pi W.

    Solved directly as Pi (I - (1-beta) W) = beta I; for beta > 0 the
    system is nonsingular because rho(W) <= 1 for the column-stochastic W.
    ``walk`` substitutes a custom step matrix (used by the power variant).
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"teleport probability must be in (0, 1], got {beta}")
    w = walk_matrix(g) if walk is None else np.asarray(walk, dtype=np.float64)
    n = g.n
    if w.shape != (n, n):
        raise ValueError(f"walk matrix shape {w.shape} does not match n={n}")
    # Pi (I - (1-beta) W) = beta I, transposed to a standard left solve
    system = (np.eye(n) - (1.0 - beta) * w).T
    pi = solve_dense_multi(system, beta * np.eye(n), tol).T
    residual = float(np.abs(pi - beta * np.eye(n) - (1.0 - beta) * pi @ w).max())
    if residual > 1e-9:
        raise NumericsError(f"PPR solve residual {residual:.3g} exceeds 1e-9")
    return pi


def ppr_series_matrix(g: LabeledGraph, beta: float, walk: np.ndarray | None = None,
                      tail: float = 1e-12) -> np.ndarray:
    """Independent PPR oracle: the series beta * sum_t (1-beta)^t W^t.

    Truncated when the geometric tail (1-beta)^(t+1) drops below ``tail``;
    kept separate from the direct solve so the two can cross-check.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"teleport probability must be in (0, 1], got {beta}")
    w = walk_matrix(g) if walk is None else np.asarray(walk, dtype=np.float64)
    n = g.n
    if beta == 1.0:
        return np.eye(n)
    total = np.zeros((n, n))
    term = beta * np.eye(n)
    weight = 1.0
    while weight > tail:
        total += term
        term = (1.0 - beta) * term @ w
        weight *= 1.0 - beta
    return total


def pprp_encoding(g: LabeledGraph, beta: float, k_enc: int,
                  tol: Tolerances = DEFAULT_TOL) -> EncodingMatrix:
    """PPR-power encoding: column i is the diagonal of the PPR matrix for W^i.

    Entry (u, i) is the stationary self-landing probability of a teleporting
    walker whose every step jumps i edges.
    """
    if k_enc < 1:
        raise ValueError(f"need k_enc >= 1, got {k_enc}")
    w = walk_matrix(g)
    values = np.empty((g.n, k_enc))
    power = np.eye(g.n)
    for i in range(k_enc):
        power = power @ w
        values[:, i] = np.diag(ppr_matrix(g, beta, walk=power, tol=tol))
    return EncodingMatrix(scheme="pprp", values=values,
                          meta={"k_enc": k_enc, "beta": beta})


def gape_as_ppr(g: LabeledGraph, beta: float,
                tol: Tolerances = DEFAULT_TOL) -> EncodingMatrix:
    """PPR realized as n single-state automaton solves.

    Row u comes from the one-state system p = (1-beta) p W + beta e_u^T:
    per-node one-hot labels make alpha = beta I expressible, and the
    stacked rows equal the PPR matrix.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"teleport probability must be in (0, 1], got {beta}")
    w = walk_matrix(g)
    mu = np.array([[1.0 - beta]])
    n = g.n
    values = np.empty((n, n))
    for u in range(n):
        c = np.zeros((1, n))
        c[0, u] = beta
        p, _ = solve_gape_system(mu, w, c, strategy="auto", tol=tol,
                                 rho_product=1.0 - beta)
        values[u, :] = p[0]
    return EncodingMatrix(scheme="gape", values=values,
                          meta={"construction": "ppr_k1", "beta": beta})


def minmax_normalize(e: EncodingMatrix) -> EncodingMatrix:
    """Per-column min-max normalization; constant columns map to zero."""
    v = e.values.copy()
    lo = v.min(axis=0)
    span = v.max(axis=0) - lo
    keep = span > 0.0
    v[:, keep] = (v[:, keep] - lo[keep]) / span[keep]
    v[:, ~keep] = 0.0
    meta = dict(e.meta)
    meta["minmax"] = True
    return EncodingMatrix(scheme=e.scheme, values=v, meta=meta)


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation; 1.0 for two constant vectors, 0.0 if only one is."""
    xc = x - x.mean()
    yc = y - y.mean()
    nx = float(np.linalg.norm(xc))
    ny = float(np.linalg.norm(yc))
    if nx == 0.0 and ny == 0.0:
        return 1.0
    if nx == 0.0 or ny == 0.0:
        return 0.0
    return float(xc @ yc / (nx * ny))


def pearson_columns(a: EncodingMatrix, b: EncodingMatrix) -> np.ndarray:
    """Columnwise Pearson correlation between two same-shape encodings."""
    if a.values.shape != b.values.shape:
        raise ValueError(f"shape mismatch: {a.values.shape} vs {b.values.shape}")
    return np.array([_pearson(a.values[:, j], b.values[:, j])
                     for j in range(a.k)])


def pearson_rows(a: EncodingMatrix, b: EncodingMatrix) -> np.ndarray:
    """Per-node Pearson correlation between two same-shape encodings."""
    if a.values.shape != b.values.shape:
        raise ValueError(f"shape mismatch: {a.values.shape} vs {b.values.shape}")
    return np.array([_pearson(a.values[i, :], b.values[i, :])
                     for i in range(a.n)])
