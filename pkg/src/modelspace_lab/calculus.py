"""Functional calculus for rational H^infinity and Nevanlinna functions of a matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import tolerances
from .errors import (
    InterpolationError,
    InvalidInputError,
    NotApplicableError,
    NotC0Error,
    NumericalFailure,
)
from .inner import (
    InnerFunction,
    SmirnovTriple,
    inner_outer_factorize,
    relatively_prime,
    smirnov_canonical,
)
from .linalg import numerical_rank, singular_values, solve
from .modelspace import Operator, as_matrix
from .ratfun import Polynomial, RationalFunction, RootSet, circle_points


def _wrap(T, M: np.ndarray) -> Operator:
    if isinstance(T, Operator):
        return Operator(M, T.source, T.target)
    return Operator(M)


def _square(T) -> np.ndarray:
    A = as_matrix(T)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"square operator required, got shape {A.shape}")
    return A


def poly_of(T, p: Polynomial) -> np.ndarray:
    """p(T) by Horner's rule."""
    A = _square(T)
    n = A.shape[0]
    out = np.eye(n, dtype=complex) * p.coefficients[-1]
    for c in p.coefficients[-2::-1]:
        out = out @ A + c * np.eye(n)
    return out


def h_of(T, h, tol_pair: float | None = None) -> Operator:
    """h(T) = p(T) q(T)^{-1} for a rational h = p/q with poles outside the closed disk."""
    h = RationalFunction.coerce(h)
    tol = tolerances.get("tol_pair", tol_pair)
    for r, _ in h.poles():
        if abs(r) <= 1 + tol:
            raise InvalidInputError(f"h has a pole at {r} in the closed disk")
    num = poly_of(T, h.numerator)
    if h.is_polynomial:
        return _wrap(T, num / h.denominator.coefficients[0])
    den = poly_of(T, h.denominator)
    # p(T) and q(T) commute, so q(T)^{-1} p(T) = p(T) q(T)^{-1}
    return _wrap(T, solve(den, num))


def inner_of(T, u: InnerFunction) -> Operator:
    """u(T) as the product of (T - a)(I - conj(a) T)^{-1} over the zeros of u."""
    A = _square(T)
    n = A.shape[0]
    I = np.eye(n, dtype=complex)
    out = u.constant * I
    for a, m in u.zeros:
        factor = solve(I - np.conj(a) * A, A - a * I)
        for _ in range(m):
            out = out @ factor
    return _wrap(T, out)


def _taylor_series(h: RationalFunction, a: complex, order: int) -> np.ndarray:
    """First ``order`` Taylor coefficients of h at a."""
    pn = np.zeros(order, dtype=complex)
    qn = np.zeros(order, dtype=complex)
    tp = h.numerator.taylor(a)[:order]
    tq = h.denominator.taylor(a)[:order]
    pn[: len(tp)] = tp
    qn[: len(tq)] = tq
    if abs(qn[0]) <= 1e-14 * max(1.0, np.max(np.abs(h.denominator.coefficients))):
        raise InterpolationError(f"h has a pole at the node {a}")
    out = np.zeros(order, dtype=complex)
    for k in range(order):
        out[k] = (pn[k] - np.dot(out[:k], qn[k:0:-1])) / qn[0]
    return out


def hermite_interpolant(h, u: InnerFunction) -> Polynomial:
    """Polynomial of degree < deg u matching h and its derivatives at the zeros of u."""
    h = RationalFunction.coerce(h)
    n = u.degree
    if n == 0:
        return Polynomial([0.0])
    rows, rhs = [], []
    for a, m in u.zeros:
        t = _taylor_series(h, a, m)
        for k in range(m):
            row = np.zeros(n, dtype=complex)
            for j in range(k, n):
                row[j] = comb(j, k) * a ** (j - k)
            rows.append(row)
            rhs.append(t[k])
    coeffs = np.linalg.solve(np.array(rows), np.array(rhs))
    return Polynomial(coeffs)


def sup_norm(h, n_samples: int = 512) -> float:
    """max |h| over circle samples; bounds ||h(T)|| for contractions T (von Neumann)."""
    return float(np.max(np.abs(RationalFunction.coerce(h)(circle_points(n_samples)))))


def _invertible(C: np.ndarray, h, tol_rank: float | None = None) -> bool:
    # the scale floor keeps a tiny multiple of the identity from passing as full rank
    s = singular_values(C)
    scale = max(float(s[0]) if s.size else 0.0, sup_norm(h))
    return numerical_rank(C, tol_rank, scale=scale) == C.shape[0]


def k_infinity_member(chi, T, tol_rank: float | None = None) -> bool:
    """Whether chi(T) is injective with dense range (here: invertible)."""
    chi = RationalFunction.coerce(chi)
    C = h_of(T, chi).matrix
    return _invertible(C, chi, tol_rank)


@dataclass(frozen=True)
class NevanlinnaFunction:
    """phi = psi / chi with psi, chi rational and bounded on the disk."""

    psi: RationalFunction
    chi: RationalFunction
    canonical: SmirnovTriple = field(init=False, repr=False)

    def __post_init__(self):
        psi = RationalFunction.coerce(self.psi)
        chi = RationalFunction.coerce(self.chi)
        if chi.is_zero:
            raise InvalidInputError("chi must not be the zero function")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "canonical", smirnov_canonical(psi / chi))

    @classmethod
    def from_rational(cls, phi) -> "NevanlinnaFunction":
        """Split a rational function as numerator polynomial over denominator polynomial."""
        phi = RationalFunction.coerce(phi)
        return cls(RationalFunction(phi.numerator), RationalFunction(phi.denominator))

    def as_rational(self) -> RationalFunction:
        return self.psi / self.chi

    def reconstruction_error(self, n_samples: int = 64) -> float:
        zeta = circle_points(n_samples)
        return float(np.max(np.abs(self.canonical.reconstruct()(zeta) - self.as_rational()(zeta))))


def _offending_zeros(chi: RationalFunction, A: np.ndarray, m_T: InnerFunction | None):
    try:
        v, _ = inner_outer_factorize(chi)
    except Exception:
        return []
    if m_T is not None:
        from .inner import inner_gcd

        return [z for z, _ in inner_gcd(v, m_T).zeros]
    n = A.shape[0]
    return [z for z, _ in v.zeros if numerical_rank(A - z * np.eye(n), scale=1.0) < n]


def nevanlinna_apply(phi, T, m_T: InnerFunction | None = None) -> Operator:
    """phi(T) = chi(T)^{-1} psi(T).

    Raises NotApplicableError when chi is not in K^infinity_T, naming the zeros
    of chi that meet the spectrum of T.  With ``m_T`` given the test is
    relative primality of the inner part of chi and m_T; otherwise it is the
    numerical rank of chi(T).
    """
    if not isinstance(phi, NevanlinnaFunction):
        phi = NevanlinnaFunction.from_rational(phi)
    A = _square(T)
    C = h_of(T, phi.chi).matrix
    if m_T is not None:
        # with m_T known, membership of chi is decided by relative primality
        v, _ = inner_outer_factorize(phi.chi)
        applicable = relatively_prime(v, m_T)
    else:
        applicable = _invertible(C, phi.chi)
    if not applicable:
        common = _offending_zeros(phi.chi, A, m_T)
        raise NotApplicableError(
            f"chi(T) is not invertible; common zeros with the minimal function: {common}",
            common_zeros=common,
        )
    P = h_of(T, phi.psi).matrix
    return _wrap(T, solve(C, P))


def local_nilpotent(T, lam: complex, others=(), n_nodes: int = 64) -> np.ndarray:
    """T - lam restricted to the generalized eigenspace of lam.

    The Riesz projector is approximated by the trapezoidal rule on a circle
    around lam of half the distance to the nearest of ``others``; with no
    other eigenvalues the whole space is used.
    """
    A = _square(T)
    n = A.shape[0]
    others = [complex(mu) for mu in others if abs(complex(mu) - lam) > 0]
    if not others or n == 0:
        return A - lam * np.eye(n)
    r = 0.5 * min(abs(mu - lam) for mu in others)
    nodes = lam + r * np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
    P = np.zeros((n, n), dtype=complex)
    for z in nodes:
        P += (z - lam) * np.linalg.solve(z * np.eye(n) - A, np.eye(n))
    P /= n_nodes
    # a projector has singular values 0 or >= 1
    U, s, _ = np.linalg.svd(P)
    Q = U[:, : int(np.sum(s > 0.5))]
    return Q.conj().T @ (A - lam * np.eye(n)) @ Q


def nullity_sequence(T, lam: complex, kmax: int, others=(), tol_rank: float | None = None) -> list[int]:
    """[dim ker (T - lam)^k for k = 0..kmax], other eigenvalues ``others`` deflated first."""
    tol = tolerances.get("tol_rank", tol_rank)
    B = local_nilpotent(T, lam, others)
    n = B.shape[0]
    base = float(singular_values(B)[0]) if n else 0.0
    if base <= tol * max(1.0, float(singular_values(_square(T))[0]) if _square(T).size else 1.0):
        return [0] + [n] * kmax
    out = [0]
    P = np.eye(n, dtype=complex)
    for k in range(1, kmax + 1):
        P = P @ B
        out.append(n - numerical_rank(P, tol, scale=base ** k))
    return out


def chain_sizes(T, lam: complex, kmax: int | None = None, others=()) -> list[int]:
    """Jordan chain lengths at ``lam``, largest first, from the nullity sequence."""
    n = _square(T).shape[0]
    kmax = n if kmax is None else min(kmax, n)
    nul = nullity_sequence(T, lam, kmax + 1 if kmax < n else kmax, others)
    # number of chains of length >= k is nul[k] - nul[k-1]
    at_least = [nul[k] - nul[k - 1] for k in range(1, len(nul))] + [0]
    sizes = []
    for k in range(1, len(at_least)):
        exactly = at_least[k - 1] - at_least[k]
        sizes.extend([k] * max(exactly, 0))
    return sorted(sizes, reverse=True)


def hint_others(hint: RootSet, lam: complex) -> list[complex]:
    return [mu for mu, _ in hint if mu != lam]


def _check_hint(hint: RootSet):
    for lam, _ in hint:
        if abs(lam) >= 1:
            raise NotC0Error(f"hinted eigenvalue {lam} is not inside the open disk")


def minimal_function(T, spectrum_hint: RootSet, tol_op: float | None = None) -> InnerFunction:
    """Minimal inner annihilator of T, from rank sequences at the hinted eigenvalues."""
    tol_op = tolerances.get("tol_op", tol_op)
    _check_hint(spectrum_hint)
    zeros = []
    for lam, mult in spectrum_hint:
        sizes = chain_sizes(T, lam, mult, hint_others(spectrum_hint, lam))
        if sizes:
            zeros.append((lam, sizes[0]))
    m = InnerFunction(zeros)
    if np.linalg.norm(inner_of(T, m).matrix, 2) > tol_op:
        raise NumericalFailure(f"m_T(T) does not vanish for {m!r}", best=m)
    return m


def defect_classify(T, tol_op: float | None = None, tol_pair: float | None = None) -> tuple[int, bool]:
    """(N, is_c0n): defect index and whether T is of class C0(N)."""
    tol_op = tolerances.get("tol_op", tol_op)
    tol_pair = tolerances.get("tol_pair", tol_pair)
    A = _square(T)
    n = A.shape[0]
    if n == 0:
        return 0, True
    if np.linalg.norm(A, 2) > 1 + tol_op:
        raise InvalidInputError(f"not a contraction: norm {np.linalg.norm(A, 2):.6g}")
    I = np.eye(n)
    d_T = numerical_rank(I - A.conj().T @ A)
    d_Tstar = numerical_rank(I - A @ A.conj().T)
    rho = float(np.max(np.abs(np.linalg.eigvals(A))))
    return d_T, bool(d_T == d_Tstar and rho < 1 - tol_pair)
