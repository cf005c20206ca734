"""Model spaces K^2_u for finite Blaschke products u, and operators on them.

Functions in K^2_u are represented by coefficient vectors in the
Takenaka-Malmquist basis

    e_j(z) = sqrt(1 - |a_j|^2) / (1 - conj(a_j) z) * prod_{i<j} (z - a_i) / (1 - conj(a_i) z)

built from the ordered zeros a_0, a_1, ... of u (repeated by multiplicity).
Indices are 0-based.  All inner products are computed with a uniform
trapezoidal rule on the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import tolerances
from .errors import InvalidInputError, NotInH2Error, OutOfDiskError
from .inner import InnerFunction, inner_mul
from .ratfun import RationalFunction, circle_points

QUAD_POINTS = 2048


def quad_grid(n: int = QUAD_POINTS) -> np.ndarray:
    return circle_points(n)


def quad_inner(f_vals: np.ndarray, g_vals: np.ndarray) -> complex:
    """<f, g> in L^2 of the circle from samples on a uniform grid."""
    return complex(np.mean(f_vals * np.conj(g_vals)))


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class Euclidean:
    """Plain C^n with no function-space structure."""

    dimension: int

    def to_json(self) -> dict:
        return {"kind": "euclidean", "dimension": self.dimension}


class ModelSpace:
    """K^2_u = H^2 minus uH^2, with its Takenaka-Malmquist orthonormal basis."""

    def __init__(self, u: InnerFunction, order: Sequence[complex] | None = None):
        self.u = u
        zeros = list(u.zero_list()) if order is None else [complex(a) for a in order]
        if order is not None and not InnerFunction([(a, 1) for a in zeros]).same_zeros(u):
            raise InvalidInputError("basis ordering must list the zeros of u with multiplicity")
        self.basis_zeros: tuple[complex, ...] = tuple(zeros)

    @property
    def dimension(self) -> int:
        return len(self.basis_zeros)

    def __repr__(self):
        return f"ModelSpace({self.u!r})"

    def basis_values(self, z) -> np.ndarray:
        """Array of shape (dimension, *z.shape) with e_j(z)."""
        z = np.asarray(z, dtype=complex)
        out = np.empty((self.dimension,) + z.shape, dtype=complex)
        prefix = np.ones_like(z)
        for j, a in enumerate(self.basis_zeros):
            den = 1 - np.conj(a) * z
            out[j] = np.sqrt(1 - abs(a) ** 2) / den * prefix
            prefix = prefix * (z - a) / den
        return out

    def to_json(self) -> dict:
        return {
            "kind": "model_space",
            "u": self.u.to_json(),
            "order": [[a.real, a.imag] for a in self.basis_zeros],
        }


class DirectSumSpace:
    def __init__(self, summands: Sequence[Any]):
        self.summands = tuple(summands)

    @property
    def dimension(self) -> int:
        return sum(_dim(s) for s in self.summands)

    def to_json(self) -> dict:
        return {"kind": "direct_sum", "summands": [_space_json(s) for s in self.summands]}


def _dim(space) -> int:
    return space.dimension


def _space_json(space) -> dict:
    return space.to_json() if space is not None else None


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense matrix between two (described) spaces; column j is the image of basis vector j."""

    matrix: np.ndarray
    source: Any = None
    target: Any = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex, copy=True)
        if m.ndim != 2:
            raise ValueError("operator matrix must be two-dimensional")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.source is None:
            object.__setattr__(self, "source", Euclidean(m.shape[1]))
        if self.target is None:
            object.__setattr__(self, "target", Euclidean(m.shape[0]))
        if _dim(self.source) != m.shape[1] or _dim(self.target) != m.shape[0]:
            raise ValueError(
                f"matrix shape {m.shape} does not match spaces "
                f"({_dim(self.target)} x {_dim(self.source)})"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    @property
    def H(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.target, self.source)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return Operator(self.matrix @ other.matrix, other.source, self.target)
        return self.matrix @ other

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2)) if self.matrix.size else 0.0

    def to_json(self) -> dict:
        return {
            "rows": self.shape[0],
            "cols": self.shape[1],
            "data": [[[float(x.real), float(x.imag)] for x in row] for row in self.matrix],
            "source": _space_json(self.source),
            "target": _space_json(self.target),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Operator":
        m = np.array(
            [[complex(re, im) for re, im in row] for row in data["data"]], dtype=complex
        ).reshape(data["rows"], data["cols"])
        return cls(m)


def as_matrix(T) -> np.ndarray:
    return T.matrix if isinstance(T, Operator) else np.asarray(T, dtype=complex)


# ---------------------------------------------------------------------------
# operations


def tm_basis_eval(M: ModelSpace, j: int, z):
    if not 0 <= j < M.dimension:
        raise IndexError(f"basis index {j} out of range for dimension {M.dimension}")
    v = M.basis_values(z)[j]
    return v if np.ndim(v) else complex(v)


def project_values(M: ModelSpace, values: np.ndarray) -> np.ndarray:
    """Coefficients <f, e_j> for f sampled on the quadrature grid."""
    n = len(values)
    E = M.basis_values(quad_grid(n))
    return (E.conj() @ values) / n


def project(M: ModelSpace, f, n_points: int = QUAD_POINTS, tol_pair: float | None = None) -> np.ndarray:
    """Coefficient vector of P_u f for a rational f analytic on the closed disk."""
    f = RationalFunction.coerce(f)
    tol = tolerances.get("tol_pair", tol_pair)
    for r, _ in f.poles():
        if abs(r) <= 1 + tol:
            raise NotInH2Error(f"pole at {r} on or inside the unit circle")
    return project_values(M, f(quad_grid(n_points)))


def compressed_shift(M: ModelSpace) -> Operator:
    """Closed-form matrix of S_u in the Takenaka-Malmquist basis.

    Lower triangular: diagonal a_i, and for i > j the entry
    sqrt(1-|a_i|^2) sqrt(1-|a_j|^2) prod_{j<k<i} (-conj(a_k)).
    """
    a = np.array(M.basis_zeros, dtype=complex)
    n = len(a)
    S = np.zeros((n, n), dtype=complex)
    w = np.sqrt(1 - np.abs(a) ** 2)
    for j in range(n):
        S[j, j] = a[j]
        prod = 1.0 + 0j
        for i in range(j + 1, n):
            S[i, j] = w[i] * w[j] * prod
            prod *= -np.conj(a[i])
    return Operator(S, M, M)


def compressed_shift_quadrature(M: ModelSpace, n_points: int = QUAD_POINTS) -> Operator:
    """Independent oracle: columns P_u(z e_j) by circle quadrature."""
    zeta = quad_grid(n_points)
    E = M.basis_values(zeta)
    S = (E.conj() @ (zeta * E).T) / n_points
    return Operator(S, M, M)


def kernel_vector(M: ModelSpace, w: complex) -> np.ndarray:
    """Coefficients of the reproducing kernel k_w; by reproduction, c_j = conj(e_j(w))."""
    if not abs(w) < 1:
        raise OutOfDiskError(f"kernel point {w} is not in the open disk")
    return np.conj(M.basis_values(np.asarray(w, dtype=complex)))


def embed_R(m: InnerFunction, q: InnerFunction, n_points: int = QUAD_POINTS) -> Operator:
    """The isometry h -> q h from K^2_m into K^2_{mq}."""
    Mm = ModelSpace(m)
    Mp = ModelSpace(inner_mul(m, q))
    zeta = quad_grid(n_points)
    qe = q(zeta)[None, :] * Mm.basis_values(zeta)
    R = np.stack([project_values(Mp, col) for col in qe], axis=1) if Mm.dimension else \
        np.zeros((Mp.dimension, 0), dtype=complex)
    return Operator(R, Mm, Mp)


def quotient_Q(m: InnerFunction, q: InnerFunction) -> Operator:
    """Q = R^* q(S_{m'}) : K^2_{m'} -> K^2_m, with R from :func:`embed_R`."""
    from .calculus import inner_of

    R = embed_R(m, q)
    Sp = compressed_shift(R.target)
    qS = inner_of(Sp, q)
    return Operator(R.H.matrix @ qS.matrix, R.target, R.source)


def direct_sum(ops: Sequence[Operator]) -> Operator:
    for k, op in enumerate(ops):
        if not op.is_square:
            raise InvalidInputError(f"summand {k} is not square: {op.shape}")
    n = sum(op.shape[0] for op in ops)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for op in ops:
        d = op.shape[0]
        out[i : i + d, i : i + d] = op.matrix
        i += d
    space = DirectSumSpace([op.source for op in ops])
    return Operator(out, space, space)
