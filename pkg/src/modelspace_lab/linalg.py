"""Rank decisions and dense solves used across modules.

Every rank decision goes through :func:`numerical_rank` so that dimension
counts in different operations agree.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from . import tolerances
from .errors import NearPoleError


def singular_values(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    if A.size == 0:
        return np.zeros(0)
    return scipy.linalg.svdvals(A)


def numerical_rank(A: np.ndarray, tol_rank: float | None = None, scale: float | None = None) -> int:
    """Number of singular values above ``tol_rank * scale``.

    ``scale`` defaults to the largest singular value of ``A``.
    """
    tol = tolerances.get("tol_rank", tol_rank)
    s = singular_values(A)
    if s.size == 0:
        return 0
    ref = s[0] if scale is None else scale
    if ref == 0:
        return 0
    return int(np.sum(s > tol * ref))


def null_space(A: np.ndarray, tol_rank: float | None = None, scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of A.

    Singular values count as zero below ``tol_rank * max(sigma_max, scale)``;
    ``scale`` keeps a matrix that is pure rounding noise from looking full rank.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[1]
    if A.shape[0] == 0 or n == 0:
        return np.eye(n, dtype=complex)
    if A.shape[0] > A.shape[1]:
        # thin QR keeps the SVD at n x n for tall stacks
        A = np.linalg.qr(A, mode="r")
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    tol = tolerances.get("tol_rank", tol_rank)
    ref = max(s[0] if s.size else 0.0, scale)
    r = int(np.sum(s > tol * ref)) if ref > 0 else 0
    return vh[r:].conj().T


def numerical_rank_from_sv(s: np.ndarray, tol: float) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def orth(A: np.ndarray, tol_rank: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical range of A."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    r = numerical_rank_from_sv(s, tolerances.get("tol_rank", tol_rank))
    return u[:, :r]


def solve(A: np.ndarray, B: np.ndarray, max_residual: float = 1e-6) -> np.ndarray:
    """Solve AX = B by partial-pivot LU with one step of residual refinement."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape[0] == 0:
        return B.copy()
    s = singular_values(A)
    if s[0] == 0 or s[-1] < 64 * np.finfo(float).eps * s[0]:
        raise NearPoleError(f"matrix is numerically singular (sigma ratio {s[-1] / max(s[0], 1e-300):.2e})")
    lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    if np.any(np.abs(np.diag(lu)) == 0):
        raise NearPoleError("matrix is exactly singular")
    X = scipy.linalg.lu_solve((lu, piv), B)
    X = X + scipy.linalg.lu_solve((lu, piv), B - A @ X)
    denom = np.linalg.norm(A) * np.linalg.norm(X) + np.linalg.norm(B)
    res = np.linalg.norm(A @ X - B) / denom if denom else 0.0
    if not np.all(np.isfinite(X)) or res > max_residual:
        raise NearPoleError(f"solve residual {res:.3e} exceeds {max_residual:.1e}")
    return X
