"""Seeded verification suites and canonical JSON reports.

Every instance is a JSON-ready dict produced by :func:`generate_instance`;
every check deserializes that dict, so a failure record replays exactly.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import tolerances
from .calculus import (
    NevanlinnaFunction,
    defect_classify,
    inner_of,
    k_infinity_member,
    minimal_function,
    nevanlinna_apply,
)
from .commutant import bicommutant_basis, commutant_basis, match_calculus
from .errors import MatchFailure, ModelSpaceLabError, SpanningFailure, WitnessFailure
from .generators import (
    complex_normal,
    conjugated_sum,
    contractive_similarity,
    lcm_of,
    outer_root,
    random_inner,
    random_jordan_model,
    random_local_smirnov,
    random_model_sum,
    random_potapov,
    random_rational,
    random_unitary,
    separated_points,
    spectrum_hint,
    worked_theta,
)
from .inner import (
    InnerFunction,
    inner_mul,
    inner_outer_factorize,
    relatively_prime,
    smirnov_canonical,
)
from .jordan import (
    JordanModel,
    MatrixInnerFunction,
    jordan_model,
    jordan_operator,
    krylov_basis,
    minimal_function_from_theta,
    model_operator,
    multiplicity,
    quasi_similarity_witness,
    restrict,
    restricted_hint,
)
from .linalg import null_space, numerical_rank
from .modelspace import (
    ModelSpace,
    Operator,
    compressed_shift,
    compressed_shift_quadrature,
    embed_R,
    kernel_vector,
    project_values,
    quad_grid,
    quotient_Q,
)
from .ratfun import Polynomial, RationalFunction, RootSet, circle_points

SCHEMA = "modelspace-lab/1"
SUITES = (
    "commutant",
    "bicommutant",
    "smirnov",
    "lemma-embed",
    "jordan",
    "theta-formula",
    "blowup",
    "membership",
)
BLOWUP_EPS = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class Scenario:
    suite: str
    seed: int = 0
    degree_cap: int = 8
    n_cap: int = 3
    instance_count: int = 20
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.degree_cap <= 12:
            raise ValueError("degree_cap must be between 1 and 12")
        if not 1 <= self.n_cap <= 3:
            raise ValueError("n_cap must be between 1 and 3")
        if self.instance_count < 1:
            raise ValueError("instance_count must be positive")
        tolerances.DEFAULT.replace(**self.tolerances)  # rejects unknown names

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "degree_cap": self.degree_cap,
            "n_cap": self.n_cap,
            "instance_count": self.instance_count,
            "tolerances": tolerances.DEFAULT.replace(**self.tolerances).as_dict(),
        }


@dataclass
class Report:
    scenario: Scenario
    records: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "inconclusive": 0, "rejected": 0}
        for r in self.records:
            counts[r["status"]] += 1
        counts["total"] = len(self.records)
        return counts

    @property
    def exit_status(self) -> int:
        return 1 if self.summary["fail"] else 0

    def check_values(self, name: str) -> list:
        """Values of one named check across all records that carry it."""
        return [r["checks"][name] for r in self.records if name in r["checks"]]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "scenario": self.scenario.to_json(),
            "records": self.records,
            "summary": self.summary,
            "notes": self.notes,
            "exit_status": self.exit_status,
        }


# ---------------------------------------------------------------------------
# serialization helpers


def _mat_json(A: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(A, dtype=complex)]


def _mat_from(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex).reshape(
        len(data), -1
    )


def _inner(data) -> InnerFunction:
    return InnerFunction.from_json(data)


def _rat(data) -> RationalFunction:
    return RationalFunction.from_json(data)


def _norm(A) -> float:
    A = np.asarray(A)
    return float(np.linalg.norm(A, 2)) if A.size else 0.0


def _oracle_gap(u: InnerFunction) -> float:
    M = ModelSpace(u)
    return float(np.linalg.norm(compressed_shift(M).matrix - compressed_shift_quadrature(M).matrix))


def _tol(name: str) -> float:
    return tolerances.get(name)


# ---------------------------------------------------------------------------
# instance generation


def _rng(seed: int, suite: str, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, SUITES.index(suite), index]))


def generate_instance(seed: int, suite: str, caps: tuple[int, int], index: int) -> dict:
    """Deterministic instance for (seed, suite, (degree_cap, n_cap), index), as JSON-ready data."""
    degree_cap, n_cap = caps
    rng = _rng(seed, suite, index)
    return _GENERATORS[suite](rng, degree_cap, n_cap, index)


def _gen_commutant(rng, degree_cap, n_cap, index):
    u = random_inner(rng, int(rng.integers(1, degree_cap + 1)))
    return {"u": u.to_json()}


def _gen_bicommutant(rng, degree_cap, n_cap, index):
    funcs = random_model_sum(rng, n_cap, degree_cap)
    n = sum(f.degree for f in funcs)
    m = lcm_of(funcs)
    return {
        "summands": [f.to_json() for f in funcs],
        "unitary": _mat_json(random_unitary(rng, n)),
        "phis": [random_local_smirnov(rng, m).to_json() for _ in range(10)],
    }


def _gen_smirnov(rng, degree_cap, n_cap, index):
    return {"phi": random_rational(rng).to_json()}


def _gen_lemma(rng, degree_cap, n_cap, index):
    total = min(10, degree_cap)
    dm = int(rng.integers(1, total + 1))
    dq = int(rng.integers(0, total - dm + 1))
    m = random_inner(rng, dm)
    if dq and rng.uniform() < 0.3:
        # q shares a zero with m
        shared = m.zeros[0][0]
        q = inner_mul(random_inner(rng, dq - 1, avoid=[shared]), InnerFunction.blaschke(shared))
    else:
        q = random_inner(rng, dq)
    return {"m": m.to_json(), "q": q.to_json()}


def _gen_jordan(rng, degree_cap, n_cap, index):
    funcs = random_jordan_model(rng, n_cap, degree_cap)
    S = jordan_operator(funcs).matrix
    T = contractive_similarity(rng, S)
    return {
        "model": [f.to_json() for f in funcs],
        "T": _mat_json(T),
        "aux_seed": int(rng.integers(2**31)),
    }


def _gen_theta(rng, degree_cap, n_cap, index):
    if index == 0 and n_cap >= 2 and degree_cap >= 3:
        return {"theta": worked_theta().to_json()}
    n = int(rng.integers(1, min(n_cap, degree_cap) + 1))
    deg = int(rng.integers(n, max(n, min(6, degree_cap)) + 1))
    return {"theta": random_potapov(rng, n, deg).to_json()}


def _gen_blowup(rng, degree_cap, n_cap, index):
    u = InnerFunction.z_power(1 if index % 2 == 0 or degree_cap < 2 else 2)
    return {"u": u.to_json(), "eps": list(BLOWUP_EPS)}


def _gen_membership(rng, degree_cap, n_cap, index):
    adversarial = index % 10 == 9
    while True:
        funcs = random_model_sum(rng, n_cap, degree_cap)
        m = lcm_of(funcs)
        simple = [z for z, k in m.zeros if k == 1]
        if simple or not adversarial:
            break
    n = sum(f.degree for f in funcs)
    U = random_unitary(rng, n)
    roots: list[complex] = []
    separation = None
    if adversarial:
        lam = simple[int(rng.integers(len(simple)))]
        sign = 1 if rng.uniform() < 0.5 else -1
        separation = 1e-7 * 10 ** (sign * rng.uniform(1, 2))
        roots.append(lam + separation * np.exp(2j * np.pi * rng.uniform()))
    else:
        if rng.uniform() < 0.5:
            roots.append(m.zeros[int(rng.integers(len(m.zeros)))][0])
        roots += separated_points(rng, int(rng.integers(0, 3)), avoid=[z for z, _ in m.zeros] + roots)
    roots += [outer_root(rng) for _ in range(int(rng.integers(0, 3)))]
    lead = complex_normal(rng, 1)[0] + 0.5
    chi = RationalFunction(Polynomial.from_roots(roots, lead))
    return {
        "summands": [f.to_json() for f in funcs],
        "unitary": _mat_json(U),
        "chi": chi.to_json(),
        "adversarial": adversarial,
        "separation": separation,
    }


_GENERATORS: dict[str, Callable] = {
    "commutant": _gen_commutant,
    "bicommutant": _gen_bicommutant,
    "smirnov": _gen_smirnov,
    "lemma-embed": _gen_lemma,
    "jordan": _gen_jordan,
    "theta-formula": _gen_theta,
    "blowup": _gen_blowup,
    "membership": _gen_membership,
}


# ---------------------------------------------------------------------------
# checks; each returns (measurements, checks, inconclusive reasons)


def _check_commutant(inst):
    u = _inner(inst["u"])
    M = ModelSpace(u)
    S = compressed_shift(M)
    C = commutant_basis(S)
    resid = []
    for W in C.basis:
        try:
            p = match_calculus(W, S, u, commutant=C)
            resid.append(float(np.linalg.norm(W.matrix - _poly(S.matrix, p))))
        except MatchFailure as e:
            resid.append(float(e.residual))
    zeta = quad_grid()
    E = M.basis_values(zeta)
    gram = float(np.linalg.norm(E.conj() @ E.T / len(zeta) - np.eye(M.dimension)))
    Sh = S.matrix.conj().T
    eig = max(
        float(np.linalg.norm(Sh @ kernel_vector(M, w) - np.conj(w) * kernel_vector(M, w)))
        for w, _ in u.zeros
    )
    meas = {
        "degree": u.degree,
        "commutant_dimension": C.dimension,
        "max_match_residual": max(resid, default=0.0),
        "oracle_gap": _oracle_gap(u),
        "annihilation": _norm(inner_of(S, u).matrix),
        "gram_error": gram,
        "adjoint_eigen_error": eig,
        "defects": list(defect_classify(S)),
        "norm": _norm(S.matrix),
    }
    checks = {
        "dimension": C.dimension == u.degree,
        "match": meas["max_match_residual"] <= _tol("tol_match"),
        "oracle": meas["oracle_gap"] <= _tol("tol_op"),
        "annihilation": meas["annihilation"] <= _tol("tol_eval"),
        "gram": gram <= _tol("tol_gram"),
        "adjoint_eigen": eig <= _tol("tol_op"),
        "defects": meas["defects"] == [1, True],
        "contraction": meas["norm"] <= 1 + _tol("tol_eval"),
    }
    return meas, checks, []


def _poly(A: np.ndarray, p: Polynomial) -> np.ndarray:
    out = np.zeros_like(A)
    P = np.eye(A.shape[0], dtype=complex)
    for c in p.coefficients:
        out = out + c * P
        P = P @ A
    return out


def _check_bicommutant(inst):
    funcs = [_inner(f) for f in inst["summands"]]
    U = _mat_from(inst["unitary"])
    T = conjugated_sum(funcs, U)
    A = T.matrix
    hint = spectrum_hint(funcs)
    expected = lcm_of(funcs)
    m = minimal_function(T, hint)
    C = commutant_basis(T)
    B = bicommutant_basis(T, C)
    resid = []
    for W in B.basis:
        try:
            p = match_calculus(W, T, m, commutant=C)
            resid.append(float(np.linalg.norm(W.matrix - _poly(A, p))))
        except MatchFailure as e:
            resid.append(float(e.residual))
    span, graph, local = [], [], []
    for data in inst["phis"]:
        phi = _rat(data)
        local.append(bool(_in_local(phi, m)))
        F = nevanlinna_apply(NevanlinnaFunction.from_rational(phi), T, m).matrix
        span.append(B.contains(F)[1])
        # graph {(x, Fx)} is invariant under T + T iff F commutes with T
        graph.append(float(np.linalg.norm(F @ A - A @ F) / max(1.0, np.linalg.norm(F))))
    meas = {
        "dimension": A.shape[0],
        "defects": list(defect_classify(T)),
        "minimal_degree": m.degree,
        "bicommutant_dimension": B.dimension,
        "commutant_dimension": C.dimension,
        "max_match_residual": max(resid, default=0.0),
        "max_span_residual": max(span, default=0.0),
        "max_graph_residual": max(graph, default=0.0),
        "annihilation": _norm(inner_of(T, m).matrix),
        "oracle_gap": max(_oracle_gap(u) for u in funcs),
    }
    checks = {
        "defects": meas["defects"] == [len(funcs), True],
        "minimal_function": m.same_zeros(expected),
        "annihilation": meas["annihilation"] <= _tol("tol_eval"),
        "dimension": B.dimension == m.degree,
        "match": meas["max_match_residual"] <= _tol("tol_match"),
        "local_smirnov": all(local),
        "span": meas["max_span_residual"] <= _tol("tol_match"),
        "graph": meas["max_graph_residual"] <= _tol("tol_op"),
        "oracle": meas["oracle_gap"] <= _tol("tol_op"),
    }
    return meas, checks, []


def _in_local(phi: RationalFunction, m: InnerFunction) -> bool:
    if phi.is_polynomial:
        return True
    v, _ = inner_outer_factorize(RationalFunction(phi.denominator))
    return relatively_prime(v, m)


def _check_smirnov(inst):
    phi = _rat(inst["phi"])
    t = smirnov_canonical(phi)
    zeta = circle_points(512)
    a0 = complex(t.a(0.0))
    a_zeros = [z for z, _ in t.a.zeros()] if t.a.numerator.degree > 0 else []
    outer = all(abs(z) > 1 + _tol("tol_pair") for z in a_zeros)
    phis = phi(zeta)
    recon = float(np.max(np.abs(t.reconstruct()(zeta) - phis)) / max(1.0, float(np.max(np.abs(phis)))))
    prime = True
    if not t.b.is_zero:
        vb, _ = inner_outer_factorize(RationalFunction(t.b.numerator))
        prime = relatively_prime(t.v, vb)
    meas = {
        "normalization_error": t.normalization_error(512),
        "a0": [a0.real, a0.imag],
        "reconstruction_error": recon,
        "v_degree": t.v.degree,
    }
    checks = {
        "normalization": meas["normalization_error"] <= _tol("tol_fr"),
        "a_outer": outer,
        "a0_positive": a0.real > 0 and abs(a0.imag) <= 1e-12 * abs(a0),
        "reconstruction": recon <= _tol("tol_eval"),
        "relatively_prime": prime,
    }
    return meas, checks, []


def _subspace_gap(X: np.ndarray, basis: np.ndarray) -> float:
    """Spectral norm of the part of X outside the span of the orthonormal ``basis``."""
    if X.shape[1] == 0:
        return 0.0
    return _norm(X - basis @ (basis.conj().T @ X))


def _check_lemma(inst):
    m, q = _inner(inst["m"]), _inner(inst["q"])
    R = embed_R(m, q)
    Q = quotient_Q(m, q)
    Mm, Mp, Mq = R.source, R.target, ModelSpace(q)
    Sm, Sp = compressed_shift(Mm).matrix, compressed_shift(Mp).matrix
    zeta = quad_grid()
    Eq = Mq.basis_values(zeta)
    Kq = np.stack([project_values(Mp, e) for e in Eq], axis=1) if q.degree else np.zeros((Mp.dimension, 0))
    mK = (
        np.stack([project_values(Mp, m(zeta) * e) for e in Eq], axis=1)
        if q.degree else np.zeros((Mp.dimension, 0))
    )
    ker = null_space(Q.matrix)
    H0 = R.matrix
    meas = {
        "m_degree": m.degree,
        "q_degree": q.degree,
        "isometry_error": _norm(R.matrix.conj().T @ R.matrix - np.eye(m.degree)),
        "embed_intertwining": _norm(Sp @ R.matrix - R.matrix @ Sm),
        "quotient_intertwining": _norm(Sm @ Q.matrix - Q.matrix @ Sp),
        "quotient_rank": numerical_rank(Q.matrix),
        "range_orthogonality": _norm(H0.conj().T @ Kq) if q.degree else 0.0,
        "kernel_dimension": ker.shape[1],
        "kernel_vs_mKq": _subspace_gap(mK, ker),
        "kernel_vs_Kq": _subspace_gap(Kq, ker),
        "oracle_gap": max(_oracle_gap(m), _oracle_gap(inner_mul(m, q))),
    }
    checks = {
        "isometry": meas["isometry_error"] <= _tol("tol_eval"),
        "embed_intertwining": meas["embed_intertwining"] <= _tol("tol_eval"),
        "quotient_intertwining": meas["quotient_intertwining"] <= _tol("tol_eval"),
        "surjective": meas["quotient_rank"] == m.degree,
        "range_complement": meas["range_orthogonality"] <= _tol("tol_op")
        and m.degree + q.degree == Mp.dimension,
        "kernel_is_mKq": ker.shape[1] == q.degree and meas["kernel_vs_mKq"] <= _tol("tol_gram"),
        "oracle": meas["oracle_gap"] <= _tol("tol_op"),
    }
    # informational: the quoted identification of the kernel with K^2_q
    meas["kernel_equals_Kq"] = ker.shape[1] == q.degree and meas["kernel_vs_Kq"] <= _tol("tol_gram")
    return meas, checks, []


def _check_jordan(inst):
    funcs = [_inner(f) for f in inst["model"]]
    J = JordanModel(tuple(funcs))
    T_mat = _mat_from(inst["T"])
    T = Operator(T_mat)
    n = T_mat.shape[0]
    hint = spectrum_hint(funcs)
    defects = defect_classify(T)
    m1 = minimal_function(T, hint)
    jm = jordan_model(T, hint)
    mu = multiplicity(T, hint, rng=np.random.default_rng(inst["aux_seed"]))
    S = jordan_operator(funcs).matrix
    inconclusive = []
    witness = None
    try:
        X, Y = quasi_similarity_witness(T, jm, rng=np.random.default_rng(inst["aux_seed"] + 1))
        witness = max(
            _norm(T_mat @ X.matrix - X.matrix @ S) / max(1.0, _norm(X.matrix)),
            _norm(S @ Y.matrix - Y.matrix @ T_mat) / max(1.0, _norm(Y.matrix)),
        )
    except WitnessFailure as e:
        inconclusive.append(f"witness search: {e}")
    # restriction to a proper invariant subspace: Krylov span of b_lambda(T) applied to random vectors
    rng = np.random.default_rng(inst["aux_seed"] + 2)
    lam = m1.zeros[0][0]
    b_T = inner_of(T, InnerFunction.blaschke(lam)).matrix
    V = b_T @ complex_normal(rng, (n, jm.k))
    basis = krylov_basis(T, V)
    restricted_differs = True
    if basis.shape[1]:
        Tr = restrict(T, basis)
        jr = jordan_model(Tr, restricted_hint(Tr, hint))
        restricted_differs = not jr.same_as(jm)
    meas = {
        "dimension": n,
        "defects": list(defects),
        "model_degrees": [f.degree for f in jm.functions],
        "multiplicity": mu,
        "annihilation": _norm(inner_of(T, m1).matrix),
        "witness_residual": witness,
        "restriction_dimension": int(basis.shape[1]),
        "oracle_gap": max(_oracle_gap(u) for u in funcs),
    }
    checks = {
        "defects": meas["defects"] == [n, True],
        "recovered": jm.same_as(J),
        "divisibility": jm.divisibility_holds(),
        "m1_is_minimal": jm.functions[0].same_zeros(m1),
        "annihilation": meas["annihilation"] <= _tol("tol_eval"),
        "multiplicity": mu == J.k,
        "multiplicity_bound": mu <= defects[0],
        "restriction_differs": restricted_differs and basis.shape[1] < n,
        "oracle": meas["oracle_gap"] <= _tol("tol_op"),
    }
    if witness is not None:
        checks["witness"] = witness <= _tol("tol_op")
    return meas, checks, inconclusive


def _check_theta(inst):
    theta = MatrixInnerFunction.from_json(inst["theta"])
    N = theta.size
    zeta = circle_points(64)
    vals = theta(zeta)
    unitary = float(max(np.linalg.norm(V.conj().T @ V - np.eye(N)) for V in vals))
    ratio = np.linalg.det(vals) / theta.det_inner()(zeta)
    det_gap = float(np.max(np.abs(ratio - ratio[0])) + abs(abs(ratio[0]) - 1))
    mf = minimal_function_from_theta(theta)
    T = model_operator(theta)
    hint = RootSet(tuple(theta.det_inner().zeros))
    mr = minimal_function(T, hint)
    meas = {
        "size": N,
        "degree": len(theta.factors),
        "unitarity_error": unitary,
        "determinant_gap": det_gap,
        "norm": _norm(T.matrix),
        "defects": list(defect_classify(T)),
        "formula_zeros": [[z.real, z.imag, k] for z, k in mf.zeros],
        "rank_zeros": [[z.real, z.imag, k] for z, k in mr.zeros],
        "annihilation": _norm(inner_of(T, mf).matrix),
    }
    checks = {
        "unitary": unitary <= _tol("tol_eval"),
        "determinant": det_gap <= _tol("tol_eval"),
        "contraction": meas["norm"] <= 1 + _tol("tol_op"),
        "defects": meas["defects"] == [N, True],
        "formula": mf.same_zeros(mr),
        "annihilation": meas["annihilation"] <= _tol("tol_eval"),
    }
    return meas, checks, []


def _check_blowup(inst):
    u = _inner(inst["u"])
    S = compressed_shift(ModelSpace(u))
    norms = []
    for eps in inst["eps"]:
        b = InnerFunction.blaschke(eps).to_rational()
        phi = NevanlinnaFunction(RationalFunction.constant(1.0), b)
        norms.append(_norm(nevanlinna_apply(phi, S, u).matrix))
    growth = [norms[i + 1] / norms[i] for i in range(len(norms) - 1)]
    meas = {"degree": u.degree, "eps": list(inst["eps"]), "norms": norms, "growth": growth}
    checks = {"monotone": all(g > 1 for g in growth)}
    if u.degree == 1:
        meas["relative_error"] = max(abs(nv * e - 1) for nv, e in zip(norms, inst["eps"]))
        checks["exact"] = meas["relative_error"] <= 64 * np.finfo(float).eps
    else:
        checks["growth"] = all(g >= 50 for g in growth)
    return meas, checks, []


def _check_membership(inst):
    funcs = [_inner(f) for f in inst["summands"]]
    T = conjugated_sum(funcs, _mat_from(inst["unitary"]))
    chi = _rat(inst["chi"])
    m = minimal_function(T, spectrum_hint(funcs))
    member = k_infinity_member(chi, T)
    v, _ = inner_outer_factorize(chi)
    prime = relatively_prime(v, m)
    meas = {
        "member": member,
        "relatively_prime": prime,
        "adversarial": inst["adversarial"],
        "separation": inst["separation"],
        "oracle_gap": max(_oracle_gap(u) for u in funcs),
    }
    checks = {"agreement": member == prime, "oracle": meas["oracle_gap"] <= _tol("tol_op")}
    return meas, checks, []


_CHECKS: dict[str, Callable] = {
    "commutant": _check_commutant,
    "bicommutant": _check_bicommutant,
    "smirnov": _check_smirnov,
    "lemma-embed": _check_lemma,
    "jordan": _check_jordan,
    "theta-formula": _check_theta,
    "blowup": _check_blowup,
    "membership": _check_membership,
}


# ---------------------------------------------------------------------------
# running


def check_instance(suite: str, instance: dict, index: int = 0) -> dict:
    """Run the suite's checks on one serialized instance and return its record."""
    record: dict[str, Any] = {"index": index, "instance": instance}
    try:
        meas, checks, inconclusive = _CHECKS[suite](instance)
    except SpanningFailure as e:
        record.update(measurements={}, checks={}, status="rejected", messages=[str(e)])
        return record
    except ModelSpaceLabError as e:
        record.update(
            measurements={}, checks={"completed": False}, status="fail",
            messages=[f"{type(e).__name__}: {e}"],
        )
        return record
    checks = {k: bool(v) for k, v in checks.items()}
    if not all(checks.values()):
        status = "fail"
    elif inconclusive:
        status = "inconclusive"
    else:
        status = "pass"
    record.update(measurements=meas, checks=checks, status=status, messages=inconclusive)
    return record


def replay(suite: str, record: dict, tol: dict | None = None) -> dict:
    """Re-run a record's serialized instance."""
    with tolerances.override(**(tol or {})):
        return check_instance(suite, record["instance"], record["index"])


def _run_one(args) -> dict:
    scenario, index = args
    with tolerances.override(**scenario.tolerances):
        inst = generate_instance(
            scenario.seed, scenario.suite, (scenario.degree_cap, scenario.n_cap), index
        )
        record = check_instance(scenario.suite, inst, index)
    # records keep the instance only when it is needed for replay
    if record["status"] == "pass":
        record.pop("instance")
    return record


def _notes(suite: str, records: list) -> list:
    if suite == "smirnov":
        a0 = [r["measurements"]["a0"][0] for r in records if r["measurements"]]
        return [{
            "kind": "erratum-candidate",
            "topic": "canonical-normalization",
            "claim": "a(0) = 0",
            "adopted": "a(0) > 0",
            "finding": "a is outer, hence zero-free in the disk; every computed a(0) is real and positive",
            "instances": len(a0),
            "min_a0": min(a0, default=None),
        }]
    if suite == "lemma-embed":
        done = [r["measurements"] for r in records if r["measurements"]]
        holds = sum(bool(d["kernel_equals_Kq"]) for d in done)
        return [{
            "kind": "erratum-candidate",
            "topic": "quotient-kernel",
            "claim": "ker Q = K^2_q, so K^2_{mq} = H0 + ker Q",
            "computed": "ker Q = m K^2_q and K^2_{mq} = K^2_q + H0 (orthogonal)",
            "instances": len(done),
            "claim_holds": holds,
            "claim_fails": len(done) - holds,
            "max_kernel_vs_Kq": max((d["kernel_vs_Kq"] for d in done), default=None),
        }]
    if suite == "bicommutant":
        return [{
            "kind": "note",
            "topic": "unbounded-bicommutant",
            "finding": "in finite dimension every operator is bounded, so the bicommutant and its "
                       "unbounded variant coincide; both are checked as one suite",
        }]
    return []


def run_suite(s: Scenario, jobs: int = 1) -> Report:
    tasks = [(s, i) for i in range(s.instance_count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_one, tasks))
    else:
        records = [_run_one(t) for t in tasks]
    records.sort(key=lambda r: r["index"])
    return Report(s, records, _notes(s.suite, records))


# ---------------------------------------------------------------------------
# canonical JSON


def _canon(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return json.dumps(repr(x))
        return format(x, ".17g")
    if isinstance(x, (complex, np.complexfloating)):
        return _canon([x.real, x.imag])
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, dict):
        items = sorted((str(k), v) for k, v in x.items())
        return "{" + ",".join(f"{json.dumps(k)}:{_canon(v)}" for k, v in items) + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ",".join(_canon(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def canonical_json(obj) -> str:
    return _canon(obj)


def emit_report(r: Report, path) -> None:
    """Write the report as canonical JSON (sorted keys, 17 significant digits)."""
    text = canonical_json(r.to_json()) + "\n"
    if path in (None, "-"):
        import sys

        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
