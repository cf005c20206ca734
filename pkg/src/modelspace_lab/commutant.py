"""Commutants, bicommutants and intertwiner spaces as null spaces of Sylvester maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerances
from .calculus import poly_of
from .errors import InvalidInputError, MatchFailure
from .inner import InnerFunction
from .linalg import null_space, numerical_rank
from .modelspace import Operator, as_matrix
from .ratfun import Polynomial


@dataclass(frozen=True, eq=False)
class OperatorSpaceBasis:
    """Frobenius-orthonormal basis of a space of operators."""

    basis: tuple[Operator, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def matrices(self) -> np.ndarray:
        """Basis stacked as an array of shape (dimension, rows, cols)."""
        if not self.basis:
            return np.zeros((0, 0, 0), dtype=complex)
        return np.stack([b.matrix for b in self.basis])

    def contains(self, A, tol: float | None = None) -> tuple[bool, float]:
        """Whether A lies in the span, with the residual relative to max(1, ||A||_F)."""
        tol = tolerances.get("tol_match", tol)
        A = as_matrix(A)
        if self.basis:
            B = self.matrices().reshape(self.dimension, -1)
            coeffs = B.conj() @ A.ravel()
            resid = np.linalg.norm(A.ravel() - B.T @ coeffs)
        else:
            resid = np.linalg.norm(A)
        rel = float(resid / max(1.0, np.linalg.norm(A)))
        return rel <= tol, rel

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "basis": [b.to_json() for b in self.basis]}


def _sylvester_matrix(T1: np.ndarray, T2: np.ndarray) -> np.ndarray:
    """Matrix of X -> T2 X - X T1 acting on column-major vec(X)."""
    n1, n2 = T1.shape[0], T2.shape[0]
    return np.kron(np.eye(n1), T2) - np.kron(T1.T, np.eye(n2))


def _basis_from_null(N: np.ndarray, rows: int, cols: int, source, target) -> OperatorSpaceBasis:
    ops = tuple(
        Operator(N[:, k].reshape((rows, cols), order="F"), source, target)
        for k in range(N.shape[1])
    )
    return OperatorSpaceBasis(ops)


def _spaces(T):
    return (T.source, T.target) if isinstance(T, Operator) else (None, None)


def intertwiner_space(T1, T2, tol_rank: float | None = None) -> OperatorSpaceBasis:
    """Orthonormal basis of {X : T2 X = X T1} (X maps the space of T1 into that of T2)."""
    A1, A2 = as_matrix(T1), as_matrix(T2)
    for A in (A1, A2):
        if A.shape[0] != A.shape[1]:
            raise InvalidInputError("intertwined operators must be square")
    L = _sylvester_matrix(A1, A2)
    scale = np.linalg.norm(A1, 2) + np.linalg.norm(A2, 2) if L.size else 0.0
    N = null_space(L, tol_rank, scale)
    src = _spaces(T1)[0]
    tgt = _spaces(T2)[0]
    return _basis_from_null(N, A2.shape[0], A1.shape[0], src, tgt)


def commutant_basis(T, tol_rank: float | None = None) -> OperatorSpaceBasis:
    return intertwiner_space(T, T, tol_rank)


def bicommutant_basis(T, commutant: OperatorSpaceBasis | None = None,
                      tol_rank: float | None = None) -> OperatorSpaceBasis:
    """Operators commuting with every element of the commutant of T."""
    A = as_matrix(T)
    n = A.shape[0]
    if commutant is None:
        commutant = commutant_basis(T, tol_rank)
    if commutant.dimension == 0:
        blocks = [np.zeros((0, n * n))]
    else:
        blocks = [_sylvester_matrix(W.matrix, W.matrix) for W in commutant.basis]
    N = null_space(np.vstack(blocks), tol_rank)
    src, _ = _spaces(T)
    return _basis_from_null(N, n, n, src, src)


def commutes_with_all(A, ops: OperatorSpaceBasis) -> float:
    """max ||A W - W A||_F over the basis elements W."""
    A = as_matrix(A)
    return max((float(np.linalg.norm(A @ W.matrix - W.matrix @ A)) for W in ops.basis), default=0.0)


def match_calculus(A, T, m: InnerFunction, commutant: OperatorSpaceBasis | None = None,
                   tol_match: float | None = None, tol_op: float | None = None) -> Polynomial:
    """Least-squares polynomial p with deg p < deg m and A = p(T).

    Raises MatchFailure if the Frobenius residual exceeds ``tol_match`` or if A
    does not commute with the commutant of T.
    """
    tol_match = tolerances.get("tol_match", tol_match)
    tol_op = tolerances.get("tol_op", tol_op)
    A_ = as_matrix(A)
    T_ = as_matrix(T)
    if commutant is None:
        commutant = commutant_basis(T)
    off = commutes_with_all(A_, commutant)
    if off > tol_op * max(1.0, np.linalg.norm(A_)):
        raise MatchFailure(f"A is not in the bicommutant (commutator {off:.3e})", residual=off)
    d = m.degree
    n = T_.shape[0]
    if d == 0:
        resid = float(np.linalg.norm(A_))
        if resid > tol_match:
            raise MatchFailure(f"nonzero A on a space annihilated by a constant: {resid:.3e}", resid)
        return Polynomial([0.0])
    powers = [np.eye(n, dtype=complex)]
    for _ in range(d - 1):
        powers.append(powers[-1] @ T_)
    M = np.stack([P.ravel() for P in powers], axis=1)
    coeffs, *_ = np.linalg.lstsq(M, A_.ravel(), rcond=None)
    resid = float(np.linalg.norm(M @ coeffs - A_.ravel()))
    if resid > tol_match:
        raise MatchFailure(f"no polynomial in T matches A: residual {resid:.3e}", residual=resid)
    return Polynomial(coeffs)


def match_residual(A, T, p: Polynomial) -> float:
    return float(np.linalg.norm(as_matrix(A) - poly_of(T, p)))


def quasi_affinity_check(X, tol_rank: float | None = None) -> bool:
    """Injective with dense range; in finite dimensions, invertible."""
    M = as_matrix(X)
    r = numerical_rank(M, tol_rank)
    return r == M.shape[0] == M.shape[1]
