"""Seeded random constructions of inner functions, operators and rational functions."""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from .inner import ZERO_MODULUS_CAP, InnerFunction, inner_mul
from .jordan import MatrixInnerFunction, PotapovFactor
from .modelspace import ModelSpace, Operator, compressed_shift, direct_sum
from .ratfun import Polynomial, RationalFunction, RootSet

MIN_SEPARATION = 0.05


def disk_point(rng: np.random.Generator, radius: float = ZERO_MODULUS_CAP) -> complex:
    """Uniform sample from the disk of the given radius."""
    r = radius * np.sqrt(rng.uniform())
    return complex(r * np.exp(2j * np.pi * rng.uniform()))


def separated_points(rng: np.random.Generator, k: int, avoid=(), sep: float = MIN_SEPARATION,
                     radius: float = ZERO_MODULUS_CAP) -> list[complex]:
    """k disk points pairwise (and from ``avoid``) at least ``sep`` apart."""
    pts: list[complex] = []
    while len(pts) < k:
        z = disk_point(rng, radius)
        if all(abs(z - w) >= sep for w in [*pts, *avoid]):
            pts.append(z)
    return pts


def unit_phase(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    if n == 1:
        return np.array([[unit_phase(rng)]])
    return unitary_group.rvs(n, random_state=rng)


def random_inner(rng: np.random.Generator, degree: int, avoid=()) -> InnerFunction:
    """Random Blaschke product of the given degree; repeated zeros occur with moderate probability."""
    if degree == 0:
        return InnerFunction((), unit_phase(rng))
    distinct = int(rng.integers(1, degree + 1))
    locs = separated_points(rng, distinct, avoid)
    mult = [1] * distinct
    for _ in range(degree - distinct):
        mult[int(rng.integers(distinct))] += 1
    return InnerFunction(list(zip(locs, mult)), unit_phase(rng))


def random_model_sum(rng: np.random.Generator, n_cap: int, degree_cap: int) -> list[InnerFunction]:
    """1..n_cap scalar inner functions, total degree <= degree_cap, drawing zeros from a shared pool."""
    k = int(rng.integers(1, min(n_cap, degree_cap) + 1))
    pool = separated_points(rng, int(rng.integers(1, 4)))
    budget = degree_cap
    out = []
    for i in range(k):
        remaining = k - i - 1
        deg = int(rng.integers(1, max(1, min(4, budget - remaining)) + 1))
        budget -= deg
        zeros = [(pool[int(rng.integers(len(pool)))], 1) for _ in range(deg)]
        out.append(InnerFunction(zeros, unit_phase(rng)))
    return out


def lcm_of(functions) -> InnerFunction:
    """Least common inner multiple, by maximal multiplicity per zero."""
    best: dict[complex, int] = {}
    for f in functions:
        for z, m in f.zeros:
            key = next((w for w in best if abs(w - z) <= 1e-12), z)
            best[key] = max(best.get(key, 0), m)
    return InnerFunction(list(best.items()))


def spectrum_hint(functions) -> RootSet:
    """Zeros of the product of the given inner functions, with summed multiplicity."""
    prod = InnerFunction.one()
    for f in functions:
        prod = inner_mul(prod, f)
    return RootSet(tuple(prod.zeros))


def conjugated_sum(functions, U: np.ndarray) -> Operator:
    """U (S_{u_1} + ... + S_{u_k}) U^*."""
    S = direct_sum([compressed_shift(ModelSpace(u)) for u in functions]).matrix
    return Operator(U @ S @ U.conj().T)


def random_polynomial(rng: np.random.Generator, degree: int) -> Polynomial:
    c = complex_normal(rng, degree + 1)
    c[-1] = c[-1] if abs(c[-1]) > 0.1 else 1.0
    return Polynomial(c)


def outer_root(rng: np.random.Generator) -> complex:
    return complex(rng.uniform(1.2, 3.0) * np.exp(2j * np.pi * rng.uniform()))


def random_local_smirnov(rng: np.random.Generator, m: InnerFunction) -> RationalFunction:
    """Random rational psi/chi whose denominator zeros in the disk avoid the zeros of m."""
    num = random_polynomial(rng, int(rng.integers(0, 4)))
    roots = []
    for _ in range(int(rng.integers(0, 3))):
        if rng.uniform() < 0.5:
            roots.append(outer_root(rng))
        else:
            roots.extend(separated_points(rng, 1, avoid=[z for z, _ in m.zeros] + roots))
    return RationalFunction(num, Polynomial.from_roots(roots))


def random_rational(rng: np.random.Generator) -> RationalFunction:
    """Random nonzero rational function with poles inside and outside the disk."""
    num_roots = []
    for _ in range(int(rng.integers(0, 4))):
        num_roots.append(disk_point(rng) if rng.uniform() < 0.5 else outer_root(rng))
    den_roots = []
    for _ in range(int(rng.integers(0, 4))):
        if rng.uniform() < 0.5:
            den_roots.extend(separated_points(rng, 1, avoid=num_roots + den_roots))
        else:
            den_roots.append(outer_root(rng))
    lead = complex_normal(rng, 1)[0] * 2
    return RationalFunction(Polynomial.from_roots(num_roots, lead), Polynomial.from_roots(den_roots))


def random_jordan_model(rng: np.random.Generator, n_cap: int, degree_cap: int) -> list[InnerFunction]:
    """Inner functions m_1, ..., m_k with m_i dividing m_{i-1} and total degree <= degree_cap."""
    while True:
        k = int(rng.integers(1, n_cap + 1))
        lams = separated_points(rng, int(rng.integers(1, 4)))
        # chain sizes per eigenvalue, nonincreasing along the model
        chains = []
        for _ in lams:
            sizes = sorted((int(rng.integers(0, 4)) for _ in range(k)), reverse=True)
            sizes[0] = max(sizes[0], 1)
            chains.append(sizes)
        total = sum(map(sum, chains))
        if total > degree_cap:
            continue
        funcs = [InnerFunction([(lam, c[i]) for lam, c in zip(lams, chains) if c[i] > 0])
                 for i in range(k)]
        funcs = [f for f in funcs if f.degree > 0]
        return funcs


def contractive_similarity(rng: np.random.Generator, S: np.ndarray) -> np.ndarray:
    """U P^{1/2} S P^{-1/2} U^* with P the Stein solution of P - S^* P S = Q, Q > 0.

    The result is a strict contraction similar to S.
    """
    n = S.shape[0]
    G = complex_normal(rng, (n, n))
    Q = G @ G.conj().T + 0.5 * np.eye(n)
    P = scipy.linalg.solve_discrete_lyapunov(S.conj().T, Q)
    P = (P + P.conj().T) / 2
    w, V = np.linalg.eigh(P)
    half = (V * np.sqrt(w)) @ V.conj().T
    inv_half = (V / np.sqrt(w)) @ V.conj().T
    U = random_unitary(rng, n)
    return U @ half @ S @ inv_half @ U.conj().T


def random_potapov(rng: np.random.Generator, n: int, degree: int) -> MatrixInnerFunction:
    """Pure Potapov product (defect index n) with ``degree`` factors, degree >= n."""
    while True:
        zeros = []
        for _ in range(degree):
            if zeros and rng.uniform() < 0.25:
                zeros.append(zeros[int(rng.integers(len(zeros)))])
            else:
                zeros.extend(separated_points(rng, 1, avoid=zeros))
        factors = []
        for a in zeros:
            r = rng.uniform()
            if factors and r < 0.2:
                v = factors[int(rng.integers(len(factors)))].vector
            elif factors and r < 0.3 and n > 1:
                # orthogonal to the previous factor's range
                u = factors[-1].vector
                w = complex_normal(rng, n)
                v = w - u * (u.conj() @ w)
            else:
                v = complex_normal(rng, n)
            factors.append(PotapovFactor(a, v))
        theta = MatrixInnerFunction(factors, random_unitary(rng, n))
        theta0 = theta(np.zeros(1))[0]
        if np.linalg.norm(theta0, 2) < 1 - 1e-6:
            return theta


def worked_theta() -> MatrixInnerFunction:
    """diag(z^2, z)."""
    e0, e1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    return MatrixInnerFunction([PotapovFactor(0, e0), PotapovFactor(0, e0), PotapovFactor(0, e1)])

