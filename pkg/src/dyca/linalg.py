"""
Dense real linear algebra used by the DyCA pipeline.

Factorizations and the symmetric eigensolver are thin wrappers over LAPACK
(via numpy/scipy); the symmetric-definite generalized eigenproblem is
reduced to a standard one by Cholesky factorization of the right-hand
matrix.  All routines return fresh arrays and never modify their inputs.
"""
from typing import NamedTuple, Tuple

import numpy as np
import scipy.linalg

from dyca.exceptions import (
    DimensionMismatch,
    EmptyInput,
    NoConvergence,
    NotPositiveDefinite,
)

SYMMETRY_RTOL = 1e-10


class SymEigResult(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


class GenEigResult(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray
    ridge_used: float


def _as_matrix(M, name="M"):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-d array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def _as_square(M, name="M"):
    M = _as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {M.shape}")
    return M


def symmetrize(M):
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + M.T)


def add_ridge(M, ridge):
    """Return ``M + ridge * (trace(M)/dim) * I``; ``M`` itself when ridge is 0."""
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    M = np.asarray(M, dtype=float)
    if ridge == 0:
        return M
    scale = np.trace(M) / M.shape[0]
    if scale <= 0:
        return M
    return M + ridge * scale * np.eye(M.shape[0])


def _fix_signs(vectors):
    # largest-magnitude entry of every column made positive
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def cholesky(M):
    """Lower-triangular Cholesky factor ``L`` with ``L @ L.T == M``.

    Raises
    ------
    NotPositiveDefinite
        If a pivot is not strictly positive.
    """
    M = _as_square(M)
    scale = max(np.abs(M).max(), np.finfo(float).tiny)
    if np.abs(M - M.T).max() > SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    try:
        return np.linalg.cholesky(symmetrize(M))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None


def solve_spd(M, B):
    """Solve ``M X = B`` for symmetric positive definite ``M``."""
    M = _as_square(M)
    B = np.asarray(B, dtype=float)
    vector_rhs = B.ndim == 1
    if vector_rhs:
        B = B[:, None]
    if B.shape[0] != M.shape[0]:
        raise DimensionMismatch(f"rhs has {B.shape[0]} rows, matrix has {M.shape[0]}")
    L = cholesky(symmetrize(M))
    X = scipy.linalg.cho_solve((L, True), B)
    return X[:, 0] if vector_rhs else X


def sym_eig(M):
    """Full eigendecomposition of a symmetric matrix, eigenvalues descending.

    The input is symmetrized first. Each eigenvector has its
    largest-magnitude entry positive.
    """
    M = symmetrize(_as_square(M))
    try:
        values, vectors = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    order = np.argsort(values, kind="stable")[::-1]
    return SymEigResult(values[order], _fix_signs(vectors[:, order]))


def gen_sym_eig(A, B, ridge=0.0):
    """Solve ``A u = lambda B u`` for symmetric ``A`` and SPD ``B``.

    ``B`` is factored as ``L L^T`` (after adding a relative ridge when
    ``ridge > 0``), the standard problem ``L^{-1} A L^{-T} y = lambda y``
    is solved, and ``u = L^{-T} y``.  The returned eigenvectors satisfy
    ``u^T B u = 1`` and are sorted by descending eigenvalue.

    Parameters
    ----------
    A : (n, n) array_like
        Symmetric (typically PSD) left-hand matrix.
    B : (n, n) array_like
        Symmetric positive definite right-hand matrix.
    ridge : float
        Relative Tikhonov shift, in units of ``trace(B)/n``.

    Returns
    -------
    GenEigResult
    """
    A = symmetrize(_as_square(A, "A"))
    B = symmetrize(_as_square(B, "B"))
    if A.shape != B.shape:
        raise DimensionMismatch(f"A is {A.shape}, B is {B.shape}")
    L = cholesky(add_ridge(B, ridge))
    tmp = scipy.linalg.solve_triangular(L, A, lower=True)
    reduced = scipy.linalg.solve_triangular(L, tmp.T, lower=True).T
    values, Y = sym_eig(reduced)
    U = scipy.linalg.solve_triangular(L.T, Y, lower=False)
    return GenEigResult(values, _fix_signs(U), float(ridge))


def reduced_matrix(A, B, ridge=0.0):
    """``L^{-1} A L^{-T}`` for ``B + ridge = L L^T`` (symmetrized)."""
    A = symmetrize(_as_square(A, "A"))
    L = cholesky(add_ridge(symmetrize(_as_square(B, "B")), ridge))
    tmp = scipy.linalg.solve_triangular(L, A, lower=True)
    return symmetrize(scipy.linalg.solve_triangular(L, tmp.T, lower=True).T)


def orthonormal_basis(columns, rel_tol=1e-8) -> Tuple[np.ndarray, int]:
    """Orthonormal basis of the numerical column span.

    The rank counts singular values that are at least ``rel_tol`` times
    the largest one.  Returns ``(basis, rank)`` with ``basis`` of shape
    ``(rows, rank)``.
    """
    if not 0 < rel_tol < 1:
        raise ValueError("rel_tol must lie in (0, 1)")
    columns = np.asarray(columns, dtype=float)
    if columns.ndim == 1:
        columns = columns[:, None]
    if columns.ndim != 2 or columns.size == 0:
        raise EmptyInput("no columns to orthonormalize")
    U, s, _ = np.linalg.svd(columns, full_matrices=False)
    if s[0] == 0:
        return np.zeros((columns.shape[0], 0)), 0
    rank = int(np.count_nonzero(s >= rel_tol * s[0]))
    return _fix_signs(U[:, :rank]), rank


def principal_angles(U, V):
    """Principal angles (radians, ascending) between two orthonormal bases."""
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    if U.ndim == 1:
        U = U[:, None]
    if V.ndim == 1:
        V = V[:, None]
    if U.shape[0] != V.shape[0]:
        raise DimensionMismatch(f"bases live in R^{U.shape[0]} and R^{V.shape[0]}")
    if U.shape[1] == 0 or V.shape[1] == 0:
        return np.zeros(0)
    if U.shape[1] < V.shape[1]:
        U, V = V, U
    M = U.T @ V
    cos = np.linalg.svd(M, compute_uv=False)
    # arccos loses accuracy near 0; small angles come from the sines instead
    sin = np.linalg.svd(V - U @ M, compute_uv=False)[::-1]
    angles = np.where(cos ** 2 >= 0.5, np.arcsin(np.clip(sin, 0.0, 1.0)),
                      np.arccos(np.clip(cos, 0.0, 1.0)))
    return np.sort(angles)


def subspace_angles(X, Y, rel_tol=1e-8):
    """Principal angles between the column spans of arbitrary ``X`` and ``Y``."""
    return principal_angles(orthonormal_basis(X, rel_tol)[0], orthonormal_basis(Y, rel_tol)[0])


def canonical_correlations(X, Y, center=True):
    """Canonical correlations between two multichannel signals.

    ``X`` is ``(p, T)`` and ``Y`` is ``(q, T)``; returns ``min(p, q)``
    correlations in descending order.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape[1] != Y.shape[1]:
        raise DimensionMismatch(f"signals have {X.shape[1]} and {Y.shape[1]} samples")
    if center:
        X = X - X.mean(axis=1, keepdims=True)
        Y = Y - Y.mean(axis=1, keepdims=True)
    qx = orthonormal_basis(X.T, 1e-12)[0]
    qy = orthonormal_basis(Y.T, 1e-12)[0]
    k = min(X.shape[0], Y.shape[0])
    s = np.linalg.svd(qx.T @ qy, compute_uv=False)
    out = np.zeros(k)
    out[: min(k, s.size)] = np.clip(s[:k], 0.0, 1.0)
    return out
