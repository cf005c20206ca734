import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelspace_lab.calculus import inner_of
from modelspace_lab.errors import InvalidInputError, NotInH2Error, OutOfDiskError
from modelspace_lab.generators import random_inner
from modelspace_lab.inner import InnerFunction, inner_mul
from modelspace_lab.modelspace import (
    ModelSpace,
    Operator,
    compressed_shift,
    compressed_shift_quadrature,
    direct_sum,
    embed_R,
    kernel_vector,
    project,
    quad_grid,
    quad_inner,
    quotient_Q,
    tm_basis_eval,
)
from modelspace_lab.ratfun import Polynomial, RationalFunction

seeds = st.integers(0, 2**32 - 1)


def test_dimension_one_shift_is_the_zero():
    S = compressed_shift(ModelSpace(InnerFunction.blaschke(0.3 + 0.2j)))
    assert S.shape == (1, 1) and abs(S.matrix[0, 0] - (0.3 + 0.2j)) < 1e-15


def test_z_power_gives_jordan_block():
    S = compressed_shift(ModelSpace(InnerFunction.z_power(3))).matrix
    assert np.allclose(S, np.diag([1, 1], -1))


def test_basis_index_bounds():
    M = ModelSpace(InnerFunction.z_power(2))
    assert abs(tm_basis_eval(M, 1, 0.5) - 0.5) < 1e-15
    with pytest.raises(IndexError):
        tm_basis_eval(M, 2, 0.5)


def test_basis_order_must_match_zeros():
    u = InnerFunction([(0.1, 1), (0.2, 1)])
    assert ModelSpace(u, order=[0.2, 0.1]).basis_zeros == (0.2, 0.1)
    with pytest.raises(InvalidInputError):
        ModelSpace(u, order=[0.2, 0.3])


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8))
def test_basis_is_orthonormal_and_orthogonal_to_u_h2(seed, degree):
    rng = np.random.default_rng(seed)
    u = random_inner(rng, degree)
    M = ModelSpace(u)
    zeta = quad_grid(2048)
    E = M.basis_values(zeta)
    G = (E @ E.conj().T) / len(zeta)
    assert np.max(np.abs(G - np.eye(degree))) < 1e-10
    # <e_j, u z^k> = 0 for k >= 0
    uz = u(zeta)[None, :] * zeta[None, :] ** np.arange(4)[:, None]
    assert np.max(np.abs(E @ uz.conj().T / len(zeta))) < 1e-10


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8))
def test_closed_form_shift_matches_quadrature(seed, degree):
    rng = np.random.default_rng(seed)
    M = ModelSpace(random_inner(rng, degree))
    S = compressed_shift(M).matrix
    Sq = compressed_shift_quadrature(M).matrix
    assert np.max(np.abs(S - Sq)) < 1e-10
    assert np.allclose(np.triu(S, 1), 0)
    assert np.allclose(np.diag(S), M.basis_zeros)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8))
def test_shift_structure(seed, degree):
    rng = np.random.default_rng(seed)
    u = random_inner(rng, degree)
    S = compressed_shift(ModelSpace(u)).matrix
    n = degree
    s = np.linalg.svd(S, compute_uv=False)
    assert s[0] <= 1 + 1e-12
    # both defect operators have rank one with trace 1 - |u(0)|^2
    for D in (np.eye(n) - S.conj().T @ S, np.eye(n) - S @ S.conj().T):
        w = np.linalg.eigvalsh(D)
        assert np.all(w > -1e-12)
        assert np.sum(w > 1e-9) == 1
        assert abs(np.trace(D) - (1 - abs(u(0)) ** 2)) < 1e-10
    assert np.max(np.abs(inner_of(S, u).matrix)) < 1e-9


def test_kernel_vector_reproduces_values():
    rng = np.random.default_rng(5)
    M = ModelSpace(random_inner(rng, 5))
    w = 0.4 - 0.2j
    k = kernel_vector(M, w)
    # <f, k_w> = f(w) for f = sum c_j e_j
    c = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    assert abs(np.vdot(k, c) - c @ M.basis_values(w)) < 1e-12
    # ||k_w||^2 = (1 - |u(w)|^2) / (1 - |w|^2)
    assert abs(np.vdot(k, k).real - (1 - abs(M.u(w)) ** 2) / (1 - abs(w) ** 2)) < 1e-12
    with pytest.raises(OutOfDiskError):
        kernel_vector(M, 1.0)


def test_project_constant_function():
    # P_u 1 = 1 - conj(u(0)) u, whose norm squared is 1 - |u(0)|^2
    u = InnerFunction([(0.5, 1), (-0.2j, 2)])
    M = ModelSpace(u)
    c = project(M, RationalFunction.constant(1))
    assert abs(np.vdot(c, c).real - (1 - abs(u(0)) ** 2)) < 1e-12
    with pytest.raises(NotInH2Error):
        project(M, RationalFunction(1, Polynomial([-0.5, 1])))


def test_quad_inner():
    zeta = quad_grid(64)
    assert abs(quad_inner(zeta, zeta) - 1) < 1e-14
    assert abs(quad_inner(zeta, np.ones_like(zeta))) < 1e-14


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_embedding_and_quotient(seed):
    rng = np.random.default_rng(seed)
    m = random_inner(rng, int(rng.integers(1, 5)))
    q = random_inner(rng, int(rng.integers(1, 5)))
    R = embed_R(m, q).matrix
    Q = quotient_Q(m, q).matrix
    Sm = compressed_shift(ModelSpace(m)).matrix
    Smq = compressed_shift(ModelSpace(inner_mul(m, q))).matrix
    assert np.max(np.abs(R.conj().T @ R - np.eye(m.degree))) < 1e-9
    assert np.max(np.abs(Smq @ R - R @ Sm)) < 1e-9
    assert np.max(np.abs(Q @ Smq - Sm @ Q)) < 1e-9
    assert np.linalg.matrix_rank(Q, 1e-8) == m.degree


def test_direct_sum_and_json():
    a = compressed_shift(ModelSpace(InnerFunction.blaschke(0.1)))
    b = compressed_shift(ModelSpace(InnerFunction.z_power(2)))
    s = direct_sum([a, b])
    assert s.shape == (3, 3)
    assert np.allclose(s.matrix[1:, 1:], b.matrix) and s.matrix[0, 1] == 0
    data = s.to_json()
    assert data["source"]["kind"] == "direct_sum"
    assert np.allclose(Operator.from_json(data).matrix, s.matrix)
    with pytest.raises(InvalidInputError):
        direct_sum([Operator(np.ones((2, 3)))])
