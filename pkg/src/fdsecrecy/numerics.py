"""Dense complex linear algebra: null spaces, Hermitian-definite eigenproblems, log-det rates.

Matrices are plain ``numpy`` complex arrays. Everything here is small
(tens of rows at most), so no attempt is made at blocking or reuse.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

RANK_TOL = 1e-10
PD_TOL = 1e-12


class NumericalError(ArithmeticError):
    """Raised on pathological inputs: non-convergent SVD, indefinite matrices, NaNs."""


@dataclass(frozen=True)
class NullBasis:
    basis: np.ndarray
    tol_used: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("matrix has non-finite entries")
    return m


def _svd(m: np.ndarray):
    try:
        return np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc


def _rank(s: np.ndarray, tol: float) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def left_null_basis(m, tol: float = RANK_TOL) -> NullBasis:
    """Orthonormal basis ``U`` with ``m^H U = 0``.

    A matrix with zero columns has the whole row space as its left null
    space, which is what the channel reduction needs when nobody jams.
    """
    m = _as_matrix(m)
    rows, cols = m.shape
    if rows == 0:
        return NullBasis(np.zeros((0, 0), dtype=complex), tol)
    if cols == 0:
        return NullBasis(np.eye(rows, dtype=complex), tol)
    u, s, _ = _svd(m)
    r = _rank(s, tol)
    return NullBasis(np.ascontiguousarray(u[:, r:]), tol)


def null_basis(m, tol: float = RANK_TOL) -> NullBasis:
    """Orthonormal basis ``V`` with ``m V = 0``."""
    m = _as_matrix(m)
    rows, cols = m.shape
    if cols == 0:
        return NullBasis(np.zeros((0, 0), dtype=complex), tol)
    if rows == 0:
        return NullBasis(np.eye(cols, dtype=complex), tol)
    _, s, vh = _svd(m)
    r = _rank(s, tol)
    return NullBasis(np.ascontiguousarray(vh[r:].conj().T), tol)


def orth_basis(m, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the column space of ``m``."""
    m = _as_matrix(m)
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    u, s, _ = _svd(m)
    return u[:, : _rank(s, tol)]


def _hermitian(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def _cholesky(a: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, rejecting matrices that are not safely positive definite."""
    n = a.shape[0]
    scale = max(np.trace(a).real / n, 0.0)
    try:
        low = sla.cholesky(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("matrix is not positive definite") from exc
    if np.min(np.diag(low).real) ** 2 <= PD_TOL * scale:
        raise NumericalError("matrix is not positive definite within tolerance")
    return low


def gen_eig_hermitian(a, b, k: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Top-``k`` eigenpairs of the pencil ``a v = lam b v``, largest first.

    Returns ``(lam, V)`` with eigenvectors as the columns of ``V``,
    normalised so that ``V^H b V = I``.
    """
    a = _hermitian(_as_matrix(a))
    b = _hermitian(_as_matrix(b))
    n = a.shape[0]
    if a.shape != (n, n) or b.shape != (n, n):
        raise ValueError("a and b must be square and of equal size")
    k = n if k is None else k
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    if k == 0:
        return np.zeros(0), np.zeros((n, 0), dtype=complex)
    _cholesky(b)
    try:
        lam, vecs = sla.eigh(a, b, subset_by_index=[n - k, n - 1], check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"generalized eigensolver failed: {exc}") from exc
    return lam[::-1].copy(), vecs[:, ::-1].copy()


def rate_logdet(h, q, w, sigma2: float) -> float:
    """``log2 det(I + (sigma2 I + W)^-1 H Q H^H)`` in bits.

    Both determinants are evaluated through Cholesky factors: the noise
    plus interference covariance is whitened first, so the signal term is
    never inverted.
    """
    h = _as_matrix(h)
    if h.shape[0] == 0 or h.shape[1] == 0:
        return 0.0
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    q = _as_matrix(q)
    w = _as_matrix(w)
    n = h.shape[0]
    low = _cholesky(_hermitian(w + sigma2 * np.eye(n)))
    f = sla.solve_triangular(low, h, lower=True, check_finite=False)
    s = _hermitian(f @ q @ f.conj().T)
    try:
        c = sla.cholesky(np.eye(n) + s, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("signal covariance is not positive semidefinite") from exc
    return max(2.0 * float(np.sum(np.log2(np.diag(c).real))), 0.0)
