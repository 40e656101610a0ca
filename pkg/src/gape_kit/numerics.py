"""Dense linear-algebra kernels used throughout the package.

Everything here operates on plain float64 numpy arrays. The algorithms are
deliberately self-contained (cyclic Jacobi for symmetric eigenproblems,
Householder reduction plus Francis double-shift QR for the real Schur form,
power iteration with a Schur fallback for spectral radii) so that their
behaviour, tolerances and failure modes are fully under our control at the
matrix sizes this package targets (n up to a few hundred).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "EigenDecomposition",
    "SchurDecomposition",
    "NumericsError",
    "ConvergenceError",
    "SingularMatrixError",
    "as_matrix",
    "eig_symmetric",
    "real_schur",
    "schur_eigenvalues",
    "spectral_radius",
    "kronecker",
    "solve_dense",
    "solve_dense_multi",
]


class NumericsError(Exception):
    """Base class for numerical failures in this package."""


class ConvergenceError(NumericsError):
    """An iterative kernel failed to converge within its iteration cap."""

    def __init__(self, message: str, iterations: int):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class SingularMatrixError(NumericsError):
    """A linear system is singular to working precision."""

    def __init__(self, message: str, pivot_index: int):
        super().__init__(f"{message} (pivot index {pivot_index})")
        self.pivot_index = pivot_index


@dataclass(frozen=True)
class Tolerances:
    """Central tolerance configuration for all numeric kernels.

    Tests tighten or loosen these uniformly by passing a modified instance;
    the defaults are what every public entry point uses.
    """

    symmetry_check: float = 1e-10        # max asymmetry accepted by eig_symmetric
    jacobi_offdiag: float = 1e-12        # stop when off(A)_F <= this * ||A||_F
    jacobi_max_sweeps: int = 100
    schur_deflation: float = 1e-12       # |h[i+1,i]| <= this * (|h_ii| + |h_jj|)
    schur_max_sweeps_per_n: int = 40     # default QR sweep budget is this * n
    singular_pivot: float = 1e-13        # pivot <= this * max|a| counts as zero
    zero_eigenvalue: float = 1e-8        # |lambda| below this is treated as 0
    wellposed_margin: float = 1e-6       # require rho(mu)*rho(A) < 1 - margin
    residual_accept: float = 1e-6        # solver residual acceptance bound
    fixed_point_tol: float = 1e-10
    fixed_point_max_iter: int = 10_000


DEFAULT_TOL = Tolerances()


def as_matrix(m) -> np.ndarray:
    """Coerce input to a 2-D float64 array without copying when possible."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def _require_square(a: np.ndarray, what: str) -> None:
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{what} must be square, got shape {a.shape}")


def _require_finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise NumericsError(f"{what} contains NaN or Inf entries")


@dataclass(frozen=True)
class EigenDecomposition:
    """Symmetric eigendecomposition with ascending eigenvalues.

    ``vectors[:, j]`` is the unit eigenvector paired with ``values[j]``;
    signs are canonicalized so the first nonzero component of each column
    is positive.
    """

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class SchurDecomposition:
    """Real Schur form M = Q T Q^T.

    ``t`` is quasi upper triangular: 1x1 diagonal blocks carry real
    eigenvalues and 2x2 diagonal blocks carry complex conjugate pairs.
    Entries below the first subdiagonal are exactly zero.
    """

    q: np.ndarray
    t: np.ndarray


def _canonical_sign(vectors: np.ndarray) -> np.ndarray:
    """Flip column signs so each column's first nonzero entry is positive."""
    v = vectors.copy()
    n = v.shape[0]
    for j in range(v.shape[1]):
        col = v[:, j]
        cutoff = 1e-12 * max(1.0, float(np.abs(col).max()))
        for i in range(n):
            if abs(col[i]) > cutoff:
                if col[i] < 0:
                    v[:, j] = -col
                break
    return v


def eig_symmetric(m, tol: Tolerances = DEFAULT_TOL) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi.

    Sweeps classical Jacobi rotations over all upper-triangle pairs until
    the off-diagonal Frobenius norm falls below ``tol.jacobi_offdiag``
    relative to the input norm. Orthonormality of the eigenvector matrix
    holds by construction (it is a product of rotations).
    """
    a = as_matrix(m).copy()
    _require_square(a, "eig_symmetric input")
    _require_finite(a, "eig_symmetric input")
    n = a.shape[0]
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.T).max()) > tol.symmetry_check * scale:
        raise ValueError("eig_symmetric requires a symmetric matrix")
    a = 0.5 * (a + a.T)

    v = np.eye(n)
    norm = np.linalg.norm(a, "fro")
    if n == 1 or norm == 0.0:
        return EigenDecomposition(values=np.diag(a).copy(), vectors=v)

    threshold = tol.jacobi_offdiag * norm
    for _ in range(tol.jacobi_max_sweeps):
        off = np.sqrt(max(0.0, norm * norm - float(np.sum(np.diag(a) ** 2))))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold / n:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # rotate rows/columns p and q of a, columns p and q of v
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        off = np.sqrt(max(0.0, norm * norm - float(np.sum(np.diag(a) ** 2))))
        if off > 1e-8 * max(1.0, norm):
            raise ConvergenceError(
                "Jacobi eigensolver did not converge", tol.jacobi_max_sweeps
            )

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = _canonical_sign(v[:, order])
    return EigenDecomposition(values=values, vectors=vectors)


# ---------------------------------------------------------------------------
# Real Schur decomposition: Householder Hessenberg + Francis double-shift QR
# ---------------------------------------------------------------------------


def _hessenberg(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce to upper Hessenberg form H = Q^T A Q by Householder reflectors."""
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n)
    for k in range(n - 2):
        x = h[k + 1 :, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        # H <- P H P with P = I - 2 v v^T acting on rows/cols k+1..n
        h[k + 1 :, k:] -= 2.0 * np.outer(v, v @ h[k + 1 :, k:])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v)
        q[:, k + 1 :] -= 2.0 * np.outer(q[:, k + 1 :] @ v, v)
        h[k + 2 :, k] = 0.0
    return q, h


def _house3(x: np.ndarray) -> np.ndarray | None:
    """Householder unit vector annihilating all but the first entry of x."""
    alpha = np.linalg.norm(x)
    if alpha == 0.0:
        return None
    if x[0] > 0:
        alpha = -alpha
    v = x.copy()
    v[0] -= alpha
    vnorm = np.linalg.norm(v)
    if vnorm == 0.0:
        return None
    return v / vnorm


def _francis_sweep(h: np.ndarray, q: np.ndarray, lo: int, hi: int,
                   exceptional: bool) -> None:
    """One implicit double-shift QR sweep on the active block h[lo:hi+1]."""
    n = hi - lo + 1
    # trailing 2x2 of the active block supplies the (possibly complex) shifts
    a = h[hi - 1, hi - 1]
    b = h[hi - 1, hi]
    c = h[hi, hi - 1]
    d = h[hi, hi]
    if exceptional:
        # ad-hoc shift to break symmetric stalls (Wilkinson's suggestion)
        s = abs(h[hi, hi - 1]) + abs(h[hi - 1, hi - 2] if hi - 2 >= lo else 0.0)
        trace = 2.0 * (d + 0.75 * s)
        det = (d + 0.75 * s) ** 2 - (0.4375 * s) ** 2
    else:
        trace = a + d
        det = a * d - b * c

    # first column of (H - s1 I)(H - s2 I) where s1+s2 = trace, s1*s2 = det
    h00 = h[lo, lo]
    h10 = h[lo + 1, lo]
    x = np.empty(3)
    x[0] = h00 * h00 + h[lo, lo + 1] * h10 - trace * h00 + det
    x[1] = h10 * (h00 + h[lo + 1, lo + 1] - trace)
    x[2] = h10 * h[lo + 2, lo + 1]

    for k in range(lo, hi - 1):
        v = _house3(x[:3])
        if v is not None:
            rows = slice(k, k + 3)
            cstart = max(lo, k - 1)
            h[rows, cstart:] -= 2.0 * np.outer(v, v @ h[rows, cstart:])
            rend = min(hi, k + 3) + 1
            h[:rend, rows] -= 2.0 * np.outer(h[:rend, rows] @ v, v)
            q[:, rows] -= 2.0 * np.outer(q[:, rows] @ v, v)
        if k > lo:
            h[k + 1 : min(k + 3, hi) + 1, k - 1] = 0.0
        if k + 3 <= hi:
            x = h[k + 1 : k + 4, k].copy()

    # final 2-element reflector to push the bulge off the bottom edge
    v = _house3(h[hi - 1 : hi + 1, hi - 2].copy())
    if v is not None:
        rows = slice(hi - 1, hi + 1)
        h[rows, hi - 2 :] -= 2.0 * np.outer(v, v @ h[rows, hi - 2 :])
        h[: hi + 1, rows] -= 2.0 * np.outer(h[: hi + 1, rows] @ v, v)
        q[:, rows] -= 2.0 * np.outer(q[:, rows] @ v, v)
        h[hi, hi - 2] = 0.0


def _split_real_2x2_blocks(h: np.ndarray, q: np.ndarray,
                           tol: Tolerances) -> None:
    """Rotate 2x2 diagonal blocks with real eigenvalues into triangular form."""
    n = h.shape[0]
    i = 0
    while i < n - 1:
        if h[i + 1, i] == 0.0:
            i += 1
            continue
        a, b = h[i, i], h[i, i + 1]
        c, d = h[i + 1, i], h[i + 1, i + 1]
        disc = (a - d) ** 2 + 4.0 * b * c
        if disc < 0.0:
            i += 2  # genuine complex pair, keep the block
            continue
        # real eigenvalues: rotate so the block becomes upper triangular
        sq = np.sqrt(disc)
        lam = (a + d + sq) / 2.0 if abs(a + d + sq) > abs(a + d - sq) else (a + d - sq) / 2.0
        # eigenvector of [[a,b],[c,d]] for lam: (b, lam - a) or (lam - d, c)
        if abs(b) + abs(lam - a) > abs(lam - d) + abs(c):
            vx, vy = b, lam - a
        else:
            vx, vy = lam - d, c
        norm = np.hypot(vx, vy)
        if norm == 0.0:
            vx, vy = 1.0, 0.0
        else:
            vx, vy = vx / norm, vy / norm
        g = np.array([[vx, -vy], [vy, vx]])
        h[i : i + 2, i:] = g.T @ h[i : i + 2, i:]
        h[: i + 2, i : i + 2] = h[: i + 2, i : i + 2] @ g
        q[:, i : i + 2] = q[:, i : i + 2] @ g
        h[i + 1, i] = 0.0
        i += 2


def real_schur(m, max_iter: int | None = None,
               tol: Tolerances = DEFAULT_TOL) -> SchurDecomposition:
    """Real Schur decomposition M = Q T Q^T via Francis double-shift QR.

    ``max_iter`` caps the total number of QR sweeps (default
    ``tol.schur_max_sweeps_per_n * n``); exceeding it raises
    :class:`ConvergenceError` carrying the sweep count.
    """
    a = as_matrix(m)
    _require_square(a, "real_schur input")
    _require_finite(a, "real_schur input")
    n = a.shape[0]
    if max_iter is None:
        max_iter = tol.schur_max_sweeps_per_n * max(n, 1)
    if n == 0:
        return SchurDecomposition(q=np.eye(0), t=np.zeros((0, 0)))
    if n == 1:
        return SchurDecomposition(q=np.eye(1), t=a.copy())

    q, h = _hessenberg(a)
    scale = max(1.0, float(np.abs(h).max()))

    hi = n - 1
    sweeps = 0
    stagnation = 0
    while hi > 0:
        # deflate negligible subdiagonals
        for i in range(hi):
            bound = tol.schur_deflation * (abs(h[i, i]) + abs(h[i + 1, i + 1]))
            if abs(h[i + 1, i]) <= max(bound, 1e-300):
                h[i + 1, i] = 0.0

        # shrink the active block from the bottom
        if h[hi, hi - 1] == 0.0:
            hi -= 1
            stagnation = 0
            continue
        if hi - 1 == 0 or h[hi - 1, hi - 2] == 0.0:
            # 2x2 block at the bottom: deflate if its eigenvalues are complex,
            # otherwise split it with a rotation and deflate both
            a2, b2 = h[hi - 1, hi - 1], h[hi - 1, hi]
            c2, d2 = h[hi, hi - 1], h[hi, hi]
            disc = (a2 - d2) ** 2 + 4.0 * b2 * c2
            if disc < 0.0:
                hi -= 2
                stagnation = 0
                continue

        # find the start of the active Hessenberg block
        lo = hi - 1
        while lo > 0 and h[lo, lo - 1] != 0.0:
            lo -= 1

        if hi - lo + 1 == 2:
            # real-eigenvalue 2x2: split via the standardization pass below
            _split_block_2x2(h, q, lo)
            hi = lo
            stagnation = 0
            continue

        sweeps += 1
        stagnation += 1
        if sweeps > max_iter:
            raise ConvergenceError(
                f"Schur QR iteration exceeded {max_iter} sweeps "
                f"(matrix size {n}, active block {lo}..{hi})",
                sweeps,
            )
        _francis_sweep(h, q, lo, hi, exceptional=(stagnation % 12 == 0))

    # exact zeros below the subdiagonal, then standardize 2x2 blocks
    for i in range(n):
        for j in range(i - 1):
            h[i, j] = 0.0
    _split_real_2x2_blocks(h, q, tol)

    # guard against silent corruption at unusual scales
    _require_finite(h, "Schur form")
    if float(np.abs(q @ h @ q.T - a).max()) > 1e-7 * scale * max(1.0, n / 8):
        raise NumericsError("Schur reconstruction residual unexpectedly large")
    return SchurDecomposition(q=q, t=h)


def _split_block_2x2(h: np.ndarray, q: np.ndarray, i: int) -> None:
    """Standardize the 2x2 block at (i, i): triangularize if eigenvalues real."""
    a, b = h[i, i], h[i, i + 1]
    c, d = h[i + 1, i], h[i + 1, i + 1]
    disc = (a - d) ** 2 + 4.0 * b * c
    if disc < 0.0:
        return
    sq = np.sqrt(disc)
    lam = (a + d + sq) / 2.0 if abs(a + d + sq) > abs(a + d - sq) else (a + d - sq) / 2.0
    if abs(b) + abs(lam - a) > abs(lam - d) + abs(c):
        vx, vy = b, lam - a
    else:
        vx, vy = lam - d, c
    norm = np.hypot(vx, vy)
    if norm == 0.0:
        return
    vx, vy = vx / norm, vy / norm
    g = np.array([[vx, -vy], [vy, vx]])
    h[i : i + 2, i:] = g.T @ h[i : i + 2, i:]
    h[: i + 2, i : i + 2] = h[: i + 2, i : i + 2] @ g
    q[:, i : i + 2] = q[:, i : i + 2] @ g
    h[i + 1, i] = 0.0


def schur_blocks(t: np.ndarray) -> list[tuple[int, int]]:
    """Diagonal block layout of a quasi-triangular matrix as (start, size)."""
    n = t.shape[0]
    blocks = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            blocks.append((i, 2))
            i += 2
        else:
            blocks.append((i, 1))
            i += 1
    return blocks


def schur_eigenvalues(t: np.ndarray) -> np.ndarray:
    """Complex eigenvalues read off the diagonal blocks of a Schur form."""
    eigs = []
    for start, size in schur_blocks(t):
        if size == 1:
            eigs.append(complex(t[start, start]))
        else:
            a, b = t[start, start], t[start, start + 1]
            c, d = t[start + 1, start], t[start + 1, start + 1]
            tr, det = a + d, a * d - b * c
            disc = tr * tr - 4.0 * det
            if disc >= 0.0:
                sq = np.sqrt(disc)
                eigs.append(complex((tr + sq) / 2.0))
                eigs.append(complex((tr - sq) / 2.0))
            else:
                sq = np.sqrt(-disc)
                eigs.append(complex(tr / 2.0, sq / 2.0))
                eigs.append(complex(tr / 2.0, -sq / 2.0))
    return np.array(eigs)


def spectral_radius(m, tol: float = 1e-8, max_iter: int = 1000) -> float:
    """Largest eigenvalue modulus of a square matrix.

    Runs power iteration from a fixed-seed random start; the norm-ratio
    estimate converges for dominant real or uniform-modulus spectra. When
    the estimate stalls (complex dominant pairs, close moduli) the exact
    value is read off a real Schur form instead.
    """
    a = as_matrix(m)
    _require_square(a, "spectral_radius input")
    _require_finite(a, "spectral_radius input")
    n = a.shape[0]
    if n == 0:
        return 0.0
    amax = float(np.abs(a).max())
    if amax == 0.0:
        return 0.0

    rng = np.random.default_rng(0x5EED)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    est = 0.0
    stable = 0
    for _ in range(max_iter):
        y = a @ x
        ny = float(np.linalg.norm(y))
        if ny == 0.0:
            return 0.0  # iterate hit the kernel: nilpotent-like direction
        new_est = ny
        if abs(new_est - est) <= 0.1 * tol * max(1.0, new_est):
            stable += 1
            if stable >= 4:
                # confirm with an eigen-residual so complex pairs don't fool us
                z = a @ (y / ny)
                r_pos = float(np.linalg.norm(z - new_est * (y / ny)))
                r_neg = float(np.linalg.norm(z + new_est * (y / ny)))
                if min(r_pos, r_neg) <= 1e-6 * max(1.0, new_est) or _uniform_growth(a, y / ny, new_est):
                    return new_est
                break
        else:
            stable = 0
        est = new_est
        x = y / ny

    eigs = schur_eigenvalues(real_schur(a).t)
    return float(np.abs(eigs).max())


def _uniform_growth(a: np.ndarray, x: np.ndarray, est: float) -> bool:
    """True when repeated application scales norms uniformly by est (e.g. orthogonal)."""
    y = x
    for _ in range(3):
        y = a @ y
        ny = float(np.linalg.norm(y))
        if ny == 0.0 or abs(ny - est * 1.0) > 1e-9 * max(1.0, est):
            return False
        y /= ny
    return True


def kronecker(a, b) -> np.ndarray:
    """Kronecker product with the standard block layout."""
    am = as_matrix(a)
    bm = as_matrix(b)
    return np.kron(am, bm)


def _eliminate(am: np.ndarray, x: np.ndarray, tol: Tolerances) -> np.ndarray:
    """In-place partial-pivot elimination on (am | x); x may hold many columns."""
    n = am.shape[0]
    scale = max(float(np.abs(am).max()), 1e-300)
    for k in range(n):
        piv = k + int(np.argmax(np.abs(am[k:, k])))
        if abs(am[piv, k]) <= tol.singular_pivot * scale:
            raise SingularMatrixError("matrix is singular to working precision", k)
        if piv != k:
            am[[k, piv], :] = am[[piv, k], :]
            x[[k, piv]] = x[[piv, k]]
        if k + 1 < n:
            mult = am[k + 1 :, k] / am[k, k]
            am[k + 1 :, k + 1 :] -= np.outer(mult, am[k, k + 1 :])
            x[k + 1 :] -= np.outer(mult, x[k]) if x.ndim == 2 else mult * x[k]
            am[k + 1 :, k] = 0.0
    for k in range(n - 1, -1, -1):
        if k + 1 < n:
            x[k] -= am[k, k + 1 :] @ x[k + 1 :]
        x[k] /= am[k, k]
    return x


def solve_dense(a, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve a x = b by Gaussian elimination with partial pivoting.

    Raises :class:`SingularMatrixError` carrying the pivot index when the
    best available pivot is zero to working precision.
    """
    am = as_matrix(a).copy()
    _require_square(am, "solve_dense matrix")
    bv = np.asarray(b, dtype=np.float64)
    if bv.ndim == 2 and bv.shape[1] == 1:
        bv = bv[:, 0]
    if bv.ndim != 1 or bv.shape[0] != am.shape[0]:
        raise ValueError(
            f"right-hand side shape {bv.shape} does not match matrix {am.shape}"
        )
    _require_finite(am, "solve_dense matrix")
    _require_finite(bv, "solve_dense rhs")
    if am.shape[0] == 0:
        return np.zeros(0)
    return _eliminate(am, bv.copy(), tol)


def solve_dense_multi(a, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve a X = B for a matrix right-hand side in one elimination pass."""
    am = as_matrix(a).copy()
    _require_square(am, "solve_dense matrix")
    bm = as_matrix(b).copy()
    if bm.shape[0] != am.shape[0]:
        raise ValueError(
            f"right-hand side shape {bm.shape} does not match matrix {am.shape}"
        )
    _require_finite(am, "solve_dense matrix")
    _require_finite(bm, "solve_dense rhs")
    return _eliminate(am, bm, tol)
