"""Three interchangeable solvers for the fixed point P = mu P A + C.

This is a discrete Sylvester (Stein-type) equation. The solvers are

* ``solve_kronecker`` -- the vec-trick oracle: one dense solve of the
  (kn x kn) system (I - A^T (x) mu) vec P = vec C. Exact but cubic in kn,
  so it is guarded to small instances and used as the reference the other
  two are validated against.
* ``solve_fixed_point`` -- iterates P <- mu P A + C, a contraction when
  rho(mu) * rho(A) < 1 (that product equals the spectral radius of
  A^T (x) mu). Also exact in finitely many steps on nilpotent A.
* ``solve_schur`` -- a Bartels-Stewart style direct method adapted to the
  Stein form: bring mu and A to real Schur form, back-substitute over the
  quasi-triangular block grid (each step a dense system of size <= 4),
  transform back. O(n^3 + k^3) instead of O(k^3 n^3).

Every solver returns the solution together with a :class:`SolveReport`
carrying the residual max-norm, iteration count and the well-posedness
product rho(mu) * rho(A).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gape_kit.numerics import (
    DEFAULT_TOL,
    NumericsError,
    SingularMatrixError,
    Tolerances,
    as_matrix,
    kronecker,
    real_schur,
    schur_blocks,
    schur_eigenvalues,
    solve_dense,
    spectral_radius,
)

__all__ = [
    "SolverError",
    "SolveReport",
    "residual_max",
    "solve_kronecker",
    "solve_fixed_point",
    "solve_schur",
    "solve_gape_system",
    "STRATEGIES",
]

STRATEGIES = ("auto", "kronecker", "fixed_point", "schur")

KRONECKER_GUARD = 10_000   # largest k*n the vec-trick oracle will build
AUTO_KRONECKER_LIMIT = 2_500  # auto strategy switches to schur above this


class SolverError(NumericsError):
    """A Sylvester solve failed; carries diagnostic context when known."""

    def __init__(self, message: str, rho_product: float | None = None,
                 block: tuple[int, int] | None = None):
        detail = message
        if rho_product is not None:
            detail += f" [rho(mu)*rho(A) = {rho_product:.6g}]"
        if block is not None:
            detail += f" [schur block ({block[0]}, {block[1]})]"
        super().__init__(detail)
        self.rho_product = rho_product
        self.block = block


@dataclass(frozen=True)
class SolveReport:
    method: str
    residual: float
    iterations: int
    rho_product: float


def _check_shapes(mu: np.ndarray, a: np.ndarray, c: np.ndarray) -> tuple[int, int]:
    k = mu.shape[0]
    n = a.shape[0]
    if mu.shape != (k, k):
        raise ValueError(f"mu must be square, got {mu.shape}")
    if a.shape != (n, n):
        raise ValueError(f"a must be square, got {a.shape}")
    if c.shape != (k, n):
        raise ValueError(f"c must be {k}x{n} to conform with mu and a, got {c.shape}")
    return k, n


def residual_max(p: np.ndarray, mu: np.ndarray, a: np.ndarray, c: np.ndarray) -> float:
    """Max-norm residual ||P - mu P A - C||_max of a candidate solution."""
    return float(np.abs(p - mu @ p @ a - c).max())


def _rho_product(mu: np.ndarray, a: np.ndarray) -> float:
    return spectral_radius(mu) * spectral_radius(a)


def _accept(p: np.ndarray, mu: np.ndarray, a: np.ndarray, c: np.ndarray,
            method: str, iterations: int, rho_prod: float,
            tol: Tolerances) -> tuple[np.ndarray, SolveReport]:
    res = residual_max(p, mu, a, c)
    bound = tol.residual_accept * max(1.0, float(np.abs(c).max()))
    if not np.isfinite(res) or res > bound:
        raise SolverError(
            f"{method} solve residual {res:.3g} exceeds acceptance bound {bound:.3g}",
            rho_product=rho_prod,
        )
    return p, SolveReport(method=method, residual=res, iterations=iterations,
                          rho_product=rho_prod)


def solve_kronecker(mu, a, c, tol: Tolerances = DEFAULT_TOL,
                    rho_product: float | None = None) -> tuple[np.ndarray, SolveReport]:
    """Reference solve via (I - A^T (x) mu) vec P = vec C.

    Guarded to k*n <= 10_000; this is the oracle the other solvers are
    cross-checked against, not the scalable path.
    """
    mu_m, a_m, c_m = as_matrix(mu), as_matrix(a), as_matrix(c)
    k, n = _check_shapes(mu_m, a_m, c_m)
    if k * n > KRONECKER_GUARD:
        raise SolverError(
            f"kronecker oracle limited to k*n <= {KRONECKER_GUARD}, got {k * n}"
        )
    system = np.eye(k * n) - kronecker(a_m.T, mu_m)
    try:
        x = solve_dense(system, c_m.flatten(order="F"), tol)
    except SingularMatrixError as e:
        rho = rho_product if rho_product is not None else _rho_product(mu_m, a_m)
        raise SolverError(
            f"vec-trick system is singular to working precision: {e}",
            rho_product=rho,
        ) from e
    p = x.reshape((k, n), order="F")
    rho = rho_product if rho_product is not None else _rho_product(mu_m, a_m)
    return _accept(p, mu_m, a_m, c_m, "kronecker", 0, rho, tol)


def solve_fixed_point(mu, a, c, tol: float | None = None,
                      max_iter: int | None = None,
                      tolerances: Tolerances = DEFAULT_TOL,
                      rho_product: float | None = None) -> tuple[np.ndarray, SolveReport]:
    """Iterate P <- mu P A + C from P = C until the update stalls below tol.

    Requires rho(mu) * rho(A) < 1 (checked before iterating); nilpotent A
    terminates exactly regardless of rho(mu) because the Neumann series is
    finite, and rho(A) = 0 keeps the product below 1 in that case.
    """
    mu_m, a_m, c_m = as_matrix(mu), as_matrix(a), as_matrix(c)
    _check_shapes(mu_m, a_m, c_m)
    if tol is None:
        tol = tolerances.fixed_point_tol
    if max_iter is None:
        max_iter = tolerances.fixed_point_max_iter
    rho = rho_product if rho_product is not None else _rho_product(mu_m, a_m)
    if rho >= 1.0 - tolerances.wellposed_margin:
        raise SolverError(
            "fixed-point iteration requires rho(mu)*rho(A) < 1", rho_product=rho
        )
    p = c_m.copy()
    delta = np.inf
    for it in range(1, max_iter + 1):
        p_next = mu_m @ p @ a_m + c_m
        delta = float(np.abs(p_next - p).max())
        p = p_next
        if delta <= tol:
            return _accept(p, mu_m, a_m, c_m, "fixed_point", it, rho, tolerances)
    raise SolverError(
        f"fixed-point iteration did not converge in {max_iter} steps "
        f"(last delta {delta:.3g})",
        rho_product=rho,
    )


def solve_schur(mu, a, c, tol: Tolerances = DEFAULT_TOL,
                rho_product: float | None = None) -> tuple[np.ndarray, SolveReport]:
    """Bartels-Stewart style direct solve in Schur coordinates.

    With mu = U T_mu U^T and A = V T_A V^T the equation becomes
    Z = T_mu Z T_A + U^T C V for Z = U^T P V. Column blocks of T_A are
    processed left to right and row blocks of T_mu bottom to top; each
    (I, J) block yields a dense system of size at most 4.
    """
    mu_m, a_m, c_m = as_matrix(mu), as_matrix(a), as_matrix(c)
    k, n = _check_shapes(mu_m, a_m, c_m)
    smu = real_schur(mu_m, tol=tol)
    sa = real_schur(a_m, tol=tol)
    u, t_mu = smu.q, smu.t
    v, t_a = sa.q, sa.t
    rho = rho_product
    if rho is None:
        rho = float(np.abs(schur_eigenvalues(t_mu)).max(initial=0.0)
                    * np.abs(schur_eigenvalues(t_a)).max(initial=0.0))

    c_t = u.T @ c_m @ v
    z = np.zeros((k, n))
    mu_blocks = schur_blocks(t_mu)
    a_blocks = schur_blocks(t_a)

    for bj, (js, jq) in enumerate(a_blocks):
        jsl = slice(js, js + jq)
        # contributions of already-solved column blocks, pushed through T_mu
        f = c_t[:, jsl]
        if js > 0:
            f = f + t_mu @ (z[:, :js] @ t_a[:js, jsl])
        tjj = t_a[jsl, jsl]
        for bi in range(len(mu_blocks) - 1, -1, -1):
            istart, ip = mu_blocks[bi]
            isl = slice(istart, istart + ip)
            rhs = f[isl].copy()
            if istart + ip < k:
                rhs += (t_mu[isl, istart + ip :] @ z[istart + ip :, jsl]) @ tjj
            small = np.eye(ip * jq) - np.kron(tjj.T, t_mu[isl, isl])
            try:
                sol = solve_dense(small, rhs.flatten(order="F"), tol)
            except SingularMatrixError as e:
                raise SolverError(
                    "singular diagonal block system in Schur back-substitution",
                    rho_product=rho,
                    block=(bi, bj),
                ) from e
            z[isl, jsl] = sol.reshape((ip, jq), order="F")

    p = u @ z @ v.T
    return _accept(p, mu_m, a_m, c_m, "schur", 0, rho, tol)


def solve_gape_system(mu, a, c, strategy: str = "auto",
                      tol: Tolerances = DEFAULT_TOL,
                      rho_product: float | None = None) -> tuple[np.ndarray, SolveReport]:
    """Dispatch to a solver.

    ``auto`` uses the kronecker oracle while k*n <= 2500 and the Schur
    method above that, falling back to fixed-point iteration if the Schur
    path fails.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    mu_m, a_m, c_m = as_matrix(mu), as_matrix(a), as_matrix(c)
    k, n = _check_shapes(mu_m, a_m, c_m)

    if strategy == "kronecker":
        return solve_kronecker(mu_m, a_m, c_m, tol, rho_product)
    if strategy == "fixed_point":
        return solve_fixed_point(mu_m, a_m, c_m, tolerances=tol,
                                 rho_product=rho_product)
    if strategy == "schur":
        return solve_schur(mu_m, a_m, c_m, tol, rho_product)

    failures = []
    if k * n <= AUTO_KRONECKER_LIMIT:
        try:
            return solve_kronecker(mu_m, a_m, c_m, tol, rho_product)
        except (SolverError, NumericsError) as e:
            failures.append(f"kronecker: {e}")
    else:
        try:
            return solve_schur(mu_m, a_m, c_m, tol, rho_product)
        except (SolverError, NumericsError) as e:
            failures.append(f"schur: {e}")
    try:
        return solve_fixed_point(mu_m, a_m, c_m, tolerances=tol,
                                 rho_product=rho_product)
    except (SolverError, NumericsError) as e:
        failures.append(f"fixed_point: {e}")
    raise SolverError("all solve strategies failed: " + "; ".join(failures))
