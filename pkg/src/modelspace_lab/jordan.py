"""Blaschke-Potapov matrix inner functions, model operators S(Theta), and Jordan models."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerances
from .calculus import chain_sizes, defect_classify, hint_others, nullity_sequence
from .commutant import intertwiner_space, quasi_affinity_check
from .errors import InvalidInputError, NumericalFailure, SpanningFailure, WitnessFailure
from .inner import InnerFunction, inner_div
from .linalg import numerical_rank_from_sv
from .modelspace import ModelSpace, Operator, as_matrix, compressed_shift, direct_sum, quad_grid
from .ratfun import Polynomial, RationalFunction, RootSet


@dataclass(frozen=True, eq=False)
class PotapovFactor:
    """Elementary factor B(z) = I - P + b_a(z) P for the rank-one projection P = v v^*."""

    zero: complex
    vector: np.ndarray

    def __post_init__(self):
        if not abs(self.zero) < 1:
            raise ValueError(f"Potapov zero {self.zero} is not inside the disk")
        v = np.asarray(self.vector, dtype=complex).ravel()
        nv = np.linalg.norm(v)
        if nv == 0:
            raise ValueError("projection vector must be nonzero")
        v = v / nv
        v.setflags(write=False)
        object.__setattr__(self, "zero", complex(self.zero))
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_projection(cls, zero: complex, projection: np.ndarray, tol: float | None = None) -> "PotapovFactor":
        """Build from a rank-one orthogonal projection matrix."""
        tol = tolerances.get("tol_op", tol)
        P = np.asarray(projection, dtype=complex)
        if (np.linalg.norm(P @ P - P) > tol or np.linalg.norm(P - P.conj().T) > tol
                or abs(np.trace(P) - 1) > tol):
            raise InvalidInputError("not a rank-one orthogonal projection")
        return cls(zero, P[:, int(np.argmax(np.abs(np.diag(P))))])

    @property
    def size(self) -> int:
        return len(self.vector)

    @property
    def projection(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def numerator(self) -> np.ndarray:
        """Coefficients (2, N, N) of (I - P)(1 - conj(a) z) + P (z - a)."""
        P = self.projection
        I = np.eye(self.size)
        a = self.zero
        return np.stack([(I - P) - a * P, -np.conj(a) * (I - P) + P])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        b = (z - self.zero) / (1 - np.conj(self.zero) * z)
        P = self.projection
        I = np.eye(self.size)
        return (I - P) + b[..., None, None] * P

    def to_json(self) -> dict:
        return {
            "zero": [self.zero.real, self.zero.imag],
            "projection_vector": [[x.real, x.imag] for x in self.vector],
        }


class MatrixInnerFunction:
    """Theta(z) = B_1(z) B_2(z) ... B_k(z) U for Potapov factors B_i and a unitary U."""

    def __init__(self, factors: Sequence[PotapovFactor], constant: np.ndarray | None = None,
                 size: int | None = None):
        self.factors = tuple(factors)
        if size is None:
            if not self.factors and constant is None:
                raise InvalidInputError("size is required for an empty product")
            size = self.factors[0].size if self.factors else np.asarray(constant).shape[0]
        for f in self.factors:
            if f.size != size:
                raise InvalidInputError(f"factor of size {f.size} in a product of size {size}")
        U = np.eye(size, dtype=complex) if constant is None else np.asarray(constant, dtype=complex)
        if U.shape != (size, size) or not np.allclose(U.conj().T @ U, np.eye(size), atol=1e-12):
            raise InvalidInputError("constant must be a unitary matrix of matching size")
        self.size = size
        self.constant = U

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.broadcast_to(np.eye(self.size, dtype=complex), z.shape + (self.size, self.size))
        for f in self.factors:
            out = out @ f(z)
        return out @ self.constant

    @property
    def zeros(self) -> list[complex]:
        return [f.zero for f in self.factors]

    def det_inner(self) -> InnerFunction:
        """det Theta up to a unimodular constant, known from the factors."""
        return InnerFunction([(a, 1) for a in self.zeros])

    def denominator(self) -> Polynomial:
        return Polynomial.from_roots(
            [1 / np.conj(a) for a in self.zeros if a != 0],
            np.prod([-np.conj(a) for a in self.zeros if a != 0]),
        )

    def numerator_coefficients(self) -> np.ndarray:
        """Matrix polynomial N(z), shape (k+1, N, N), with Theta = N(z) U / D(z)."""
        coeffs = np.eye(self.size, dtype=complex)[None]
        for f in self.factors:
            fc = f.numerator()
            out = np.zeros((len(coeffs) + 1, self.size, self.size), dtype=complex)
            for i, A in enumerate(coeffs):
                for j, B in enumerate(fc):
                    out[i + j] += A @ B
            coeffs = out
        return coeffs @ self.constant

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "constant": [[[x.real, x.imag] for x in row] for row in self.constant],
            "factors": [f.to_json() for f in self.factors],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MatrixInnerFunction":
        U = np.array([[complex(a, b) for a, b in row] for row in data["constant"]])
        factors = [
            PotapovFactor(complex(*f["zero"]), np.array([complex(a, b) for a, b in f["projection_vector"]]))
            for f in data["factors"]
        ]
        return cls(factors, U, size=data["size"])


def potapov_product(factors: Sequence[PotapovFactor], constant: np.ndarray | None = None,
                    size: int | None = None) -> MatrixInnerFunction:
    return MatrixInnerFunction(factors, constant, size)


def _chop(c: np.ndarray, rel: float = 1e-14) -> np.ndarray:
    c = c.copy()
    scale = np.max(np.abs(c)) if c.size else 0.0
    c[np.abs(c) < rel * scale] = 0
    return c


def minors_order(theta: MatrixInnerFunction, k: int) -> list[RationalFunction]:
    """All k x k minors of Theta (row subsets outer, column subsets inner, lexicographic)."""
    N = theta.size
    if not 1 <= k <= N:
        raise ValueError(f"minor order {k} outside 1..{N}")
    Nc = theta.numerator_coefficients()
    deg = len(Nc) - 1
    n_pts = k * deg + 1
    zeta = np.exp(2j * np.pi * np.arange(n_pts) / n_pts)
    vals = np.zeros((n_pts, N, N), dtype=complex)
    for j in range(deg, -1, -1):
        vals = vals * zeta[:, None, None] + Nc[j]
    den = theta.denominator() ** k
    out = []
    scale = max(1.0, float(np.max(np.abs(den.coefficients))))
    for rows in itertools.combinations(range(N), k):
        for cols in itertools.combinations(range(N), k):
            d = np.linalg.det(vals[:, rows][:, :, cols])
            coeffs = np.fft.fft(d) / n_pts
            if np.max(np.abs(coeffs)) <= 1e-12 * scale:
                out.append(RationalFunction.constant(0.0))
            else:
                out.append(RationalFunction(Polynomial(_chop(coeffs)), den))
    return out


def _minor_values(theta: MatrixInnerFunction, z: np.ndarray, rows, cols) -> np.ndarray:
    vals = theta(z)
    return np.linalg.det(vals[:, rows][:, :, cols])


def vanishing_order(f, center: complex, radius: float, n_nodes: int = 64,
                    tol: float | None = None) -> int:
    """Order of the zero of an analytic f at ``center``.

    Scaled Taylor coefficients t_j r^j come from an FFT of f on the circle of
    the given radius; the order is the first index above ``tol`` times the largest.
    """
    tol = tolerances.get("tol_rank", tol)
    z = center + radius * np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
    c = np.fft.fft(f(z)) / n_nodes
    big = np.abs(c) > tol * np.max(np.abs(c))
    return int(np.argmax(big)) if big.any() else n_nodes


def _local_radius(zero: complex, others) -> float:
    r = 0.5 * (1 - abs(zero))
    for w in others:
        if w != zero:
            r = min(r, 0.5 * abs(w - zero))
    return r


def minimal_function_from_theta(theta: MatrixInnerFunction) -> InnerFunction:
    """Inner part of det Theta divided by the gcd of the inner parts of the order N-1 minors.

    The gcd can only vanish where det Theta does, at the known Potapov zeros,
    so its multiplicity at each zero is the least vanishing order there over
    the nonzero order N-1 minors.
    """
    det_inner = theta.det_inner()
    N = theta.size
    if N == 1:
        return InnerFunction(det_inner.zeros)
    subsets = list(itertools.combinations(range(N), N - 1))
    pairs = [(r, c) for r in subsets for c in subsets]
    nonzero = [pc for pc, minor in zip(pairs, minors_order(theta, N - 1)) if not minor.is_zero]
    locs = [z for z, _ in det_inner.zeros]
    zeros = []
    for lam, k_det in det_inner.zeros:
        r = _local_radius(lam, locs)
        det_order = vanishing_order(lambda z: np.linalg.det(theta(z)), lam, r)
        if det_order != k_det:
            raise NumericalFailure(
                f"det Theta vanishes to order {det_order} at {lam}, expected {k_det}"
            )
        g = min(
            (vanishing_order(lambda z, rc=rc: _minor_values(theta, z, *rc), lam, r) for rc in nonzero),
            default=0,
        )
        if k_det - g > 0:
            zeros.append((lam, k_det - g))
    return InnerFunction(zeros)


@dataclass(frozen=True)
class VectorModelSpace:
    """K^2(Theta); only its dimension and the generating Theta are recorded."""

    dimension: int
    theta_json: dict

    def to_json(self) -> dict:
        return {"kind": "vector_model_space", "dimension": self.dimension, "theta": self.theta_json}


def _kernel_points() -> np.ndarray:
    ang = 2 * np.pi * np.arange(8) / 8
    return np.concatenate([0.3 * np.exp(1j * ang), 0.6 * np.exp(1j * (ang + np.pi / 8))])


def model_operator(theta: MatrixInnerFunction, n_points: int = 2048,
                   tol_rank: float | None = None) -> Operator:
    """Compressed shift on K^2(Theta), in an orthonormal basis spanned by kernel functions."""
    tol_rank = tolerances.get("tol_rank", tol_rank)
    d = len(theta.factors)
    if d > 12:
        raise InvalidInputError("deg det Theta must not exceed 12")
    space = VectorModelSpace(d, theta.to_json())
    if d == 0:
        return Operator(np.zeros((0, 0)), space, space)
    N = theta.size
    zeta = quad_grid(n_points)
    Tz = theta(zeta)                       # (M, N, N)
    W = _kernel_points()
    Tw = theta(W)                          # (K, N, N)
    cols = []
    for w, Thw in zip(W, Tw):
        # (I - Theta(z) Theta(w)^*) / (1 - conj(w) z), all coordinate vectors at once
        F = (np.eye(N) - Tz @ Thw.conj().T) / (1 - np.conj(w) * zeta)[:, None, None]
        for c in range(N):
            cols.append(F[:, :, c].ravel())
    A = np.stack(cols, axis=1) / np.sqrt(n_points)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size < d or s[d - 1] <= tol_rank * s[0]:
        raise SpanningFailure(f"kernel samples span only {numerical_rank_from_sv(s, tol_rank)} of {d} dimensions")
    if s.size > d and s[d] > tol_rank * s[0]:
        raise SpanningFailure(f"kernel samples span more than {d} dimensions")
    G = U[:, :d].reshape(n_points, N, d)
    zG = zeta[:, None, None] * G
    S = np.einsum("mci,mcj->ij", G.conj(), zG)
    return Operator(S, space, space)


@dataclass(frozen=True)
class JordanModel:
    """Inner functions m_1, ..., m_k with each m_i dividing m_{i-1}."""

    functions: tuple[InnerFunction, ...]

    def divisibility_holds(self) -> bool:
        from .errors import DivisibilityError

        for prev, cur in zip(self.functions, self.functions[1:]):
            try:
                inner_div(prev, cur)
            except DivisibilityError:
                return False
        return True

    @property
    def k(self) -> int:
        return len(self.functions)

    def operator(self) -> Operator:
        return jordan_operator(self.functions)

    def same_as(self, other: "JordanModel", tol_pair: float | None = None) -> bool:
        return self.k == other.k and all(
            a.same_zeros(b, tol_pair) for a, b in zip(self.functions, other.functions)
        )

    def to_json(self) -> list:
        return [f.to_json() for f in self.functions]


def jordan_operator(functions: Sequence[InnerFunction]) -> Operator:
    return direct_sum([compressed_shift(ModelSpace(u)) for u in functions])


def jordan_model(T, spectrum_hint: RootSet) -> JordanModel:
    """Jordan model from the chain sizes at each hinted eigenvalue."""
    _, is_c0n = defect_classify(T)
    if not is_c0n:
        raise InvalidInputError("operator is not of class C0(N)")
    n = as_matrix(T).shape[0]
    per_lambda = [(lam, chain_sizes(T, lam, n, hint_others(spectrum_hint, lam))) for lam, _ in spectrum_hint]
    covered = sum(sum(s) for _, s in per_lambda)
    if covered != n:
        raise InvalidInputError(
            f"hinted eigenvalues account for {covered} of {n} dimensions"
        )
    k = max((len(s) for _, s in per_lambda), default=0)
    functions = tuple(
        InnerFunction([(lam, s[i]) for lam, s in per_lambda if len(s) > i]) for i in range(k)
    )
    return JordanModel(functions)


def krylov_basis(T, X: np.ndarray, tol_rank: float | None = None) -> np.ndarray:
    """Orthonormal basis of the smallest T-invariant subspace containing the columns of X."""
    tol = tolerances.get("tol_rank", tol_rank)
    A = as_matrix(T)
    n = A.shape[0]
    scale = max(1.0, np.linalg.norm(A, 2)) * max(1.0, np.linalg.norm(X, 2))
    u, s, _ = np.linalg.svd(np.asarray(X, dtype=complex).reshape(n, -1), full_matrices=False)
    Q = u[:, : int(np.sum(s > tol * scale))]
    block = Q
    while Q.shape[1] < n and block.shape[1]:
        W = A @ block
        # two passes of Gram-Schmidt against the current basis
        W = W - Q @ (Q.conj().T @ W)
        W = W - Q @ (Q.conj().T @ W)
        u, s, _ = np.linalg.svd(W, full_matrices=False)
        block = u[:, : int(np.sum(s > tol * scale))]
        Q = np.hstack([Q, block])
    return Q


def krylov_rank(T, X: np.ndarray, tol_rank: float | None = None) -> int:
    """Dimension of the smallest T-invariant subspace containing the columns of X."""
    return krylov_basis(T, X, tol_rank).shape[1]


def generator_search(T, k: int, trials: int = 32, rng: np.random.Generator | None = None) -> tuple[bool, bool]:
    """(k random vectors always generate, k-1 random vectors never generate) over ``trials`` draws."""
    rng = np.random.default_rng(0) if rng is None else rng
    n = as_matrix(T).shape[0]
    k_ok, km1_fail = True, True
    for _ in range(trials):
        X = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        k_ok &= krylov_rank(T, X) == n
        if k > 1:
            km1_fail &= krylov_rank(T, X[:, : k - 1]) < n
    return bool(k_ok), bool(km1_fail)


def multiplicity(T, spectrum_hint: RootSet, cross_check: bool = True, trials: int = 32,
                 rng: np.random.Generator | None = None) -> int:
    """Multiplicity: the largest geometric multiplicity over the hinted eigenvalues."""
    k = jordan_model(T, spectrum_hint).k
    if cross_check and k > 0:
        k_ok, km1_fail = generator_search(T, k, trials, rng)
        if not (k_ok and km1_fail):
            raise NumericalFailure(
                f"generator search disagrees with multiplicity {k}: "
                f"k vectors generate={k_ok}, k-1 vectors fail={km1_fail}"
            )
    return k


def quasi_similarity_witness(T, J: JordanModel, draws: int = 64,
                             rng: np.random.Generator | None = None) -> tuple[Operator, Operator]:
    """Invertible X, Y with T X = X S and S Y = Y T, S the Jordan operator of J.

    Random combinations of intertwiner bases are drawn until both are
    quasi-affinities; raises WitnessFailure (inconclusive) otherwise.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    S = J.operator()
    Xs = intertwiner_space(S, T)
    Ys = intertwiner_space(T, S)

    def search(space):
        if space.dimension == 0:
            return None
        B = space.matrices()
        for _ in range(draws):
            c = rng.standard_normal(space.dimension) + 1j * rng.standard_normal(space.dimension)
            X = np.tensordot(c, B, axes=1)
            if quasi_affinity_check(X):
                return X
        return None

    X = search(Xs)
    Y = search(Ys)
    if X is None or Y is None:
        raise WitnessFailure("no invertible intertwiner found in the randomized search")
    src_T = T.source if isinstance(T, Operator) else None
    return Operator(X, S.source, src_T), Operator(Y, src_T, S.source)


def restrict(T, basis: np.ndarray) -> Operator:
    """Matrix of T restricted to the invariant subspace with orthonormal ``basis`` columns."""
    A = as_matrix(T)
    return Operator(basis.conj().T @ A @ basis)


def restricted_hint(T, hint: RootSet) -> RootSet:
    """Hint for an operator whose spectrum is a subset of ``hint``: algebraic multiplicities by rank."""
    roots = []
    for lam, mult in hint:
        nul = nullity_sequence(T, lam, mult, hint_others(hint, lam))
        if nul[-1]:
            roots.append((lam, nul[-1]))
    return RootSet(tuple(roots))
