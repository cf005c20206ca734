import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelspace_lab.errors import DivisibilityError, NotInH2Error
from modelspace_lab.generators import random_inner, random_rational
from modelspace_lab.inner import (
    InnerFunction,
    in_local_smirnov,
    inner_div,
    inner_gcd,
    inner_mul,
    inner_outer_factorize,
    relatively_prime,
    smirnov_canonical,
)
from modelspace_lab.ratfun import Polynomial, RationalFunction, poly_roots

seeds = st.integers(0, 2**32 - 1)
zeta = np.exp(2j * np.pi * np.arange(256) / 256)


def blaschke_direct(zeros, c, z):
    out = c * np.ones_like(z)
    for a in zeros:
        out = out * (z - a) / (1 - np.conj(a) * z)
    return out


def test_single_factor_values():
    b = InnerFunction.blaschke(0.5)
    assert abs(b(0) + 0.5) < 1e-15
    assert abs(b(0.5)) < 1e-15
    assert np.allclose(np.abs(b(zeta)), 1)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        InnerFunction([(1.0, 1)])
    with pytest.raises(ValueError):
        InnerFunction([(0.1, 1)], constant=2.0)
    with pytest.raises(ValueError):
        InnerFunction([(0.1, 0)])


def test_nearby_zeros_merge():
    u = InnerFunction([(0.3, 1), (0.3 + 1e-10, 2)])
    assert u.zeros == ((0.3, 3),)


def test_json_round_trip():
    u = InnerFunction([(0.1 + 0.2j, 2), (-0.4, 1)], constant=1j)
    v = InnerFunction.from_json(u.to_json())
    assert v.zeros == u.zeros and v.constant == u.constant


def test_rational_form_matches_evaluation():
    u = InnerFunction([(0.1 + 0.2j, 2), (0, 1), (-0.4, 1)], constant=1j)
    z = np.array([0.3, -0.2 + 0.5j, 0.7j])
    assert np.allclose(u.to_rational()(z), u(z))


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(0, 8))
def test_unimodular_on_circle_and_direct_product(seed, degree):
    rng = np.random.default_rng(seed)
    u = random_inner(rng, degree)
    assert u.degree == degree and u.within_cap()
    assert np.max(np.abs(np.abs(u(zeta)) - 1)) < 1e-12
    z = 0.9 * np.sqrt(rng.uniform(size=20)) * np.exp(2j * np.pi * rng.uniform(size=20))
    assert np.allclose(u(z), blaschke_direct(u.zero_list(), u.constant, z), atol=1e-13)
    assert np.all(np.abs(u(z)) <= 1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_mul_div_gcd_laws(seed):
    rng = np.random.default_rng(seed)
    u = random_inner(rng, int(rng.integers(0, 5)))
    v = random_inner(rng, int(rng.integers(0, 5)), avoid=[z for z, _ in u.zeros])
    uv = inner_mul(u, v)
    z = np.array([0.2, -0.3j, 0.5 + 0.1j])
    assert np.allclose(uv(z), u(z) * v(z))
    assert inner_div(uv, v).same_zeros(u)
    assert np.allclose(inner_div(uv, v)(z) * v(z), uv(z))
    g = inner_gcd(uv, u)
    assert g.same_zeros(u)
    assert relatively_prime(u, v) == (u.degree == 0 or v.degree == 0 or
                                      min(abs(a - b) for a, _ in u.zeros for b, _ in v.zeros) > 1e-7)


def test_div_not_dividing():
    with pytest.raises(DivisibilityError):
        inner_div(InnerFunction.blaschke(0.1), InnerFunction.blaschke(0.2))
    with pytest.raises(DivisibilityError):
        inner_div(InnerFunction.blaschke(0.1), InnerFunction.blaschke(0.1, 2))


def test_gcd_of_z2_and_zb():
    u = InnerFunction.z_power(2)
    v = InnerFunction([(0, 1), (0.5, 1)])
    assert inner_gcd(u, v).zeros == ((0j, 1),)


# --- inner-outer ----------------------------------------------------------------


def test_inner_outer_of_z_minus_half():
    inner, outer = inner_outer_factorize(RationalFunction(Polynomial([-0.5, 1])))
    assert inner.same_zeros(InnerFunction.blaschke(0.5))
    # the outer factor is 1 - z/2 up to a unimodular constant absorbed into the inner part
    assert np.allclose(outer.numerator.coefficients / outer.denominator.coefficients[0], [1, -0.5])
    z = np.array([0.1, 0.3j])
    assert np.allclose(inner(z) * outer(z), z - 0.5)


def test_inner_outer_rejects_poles_in_disk():
    with pytest.raises(NotInH2Error):
        inner_outer_factorize(RationalFunction(1, Polynomial([-0.5, 1])))


# --- Smirnov canonical triple ---------------------------------------------------


def test_smirnov_of_zero_and_one():
    t = smirnov_canonical(RationalFunction.constant(0))
    assert t.b.is_zero and t.v.degree == 0 and abs(t.a(0.3) - 1) < 1e-15
    t = smirnov_canonical(RationalFunction.constant(1))
    assert abs(t.a(0) - 1 / np.sqrt(2)) < 1e-12 and abs(t.b(0) - 1 / np.sqrt(2)) < 1e-12


def test_smirnov_of_inverse_blaschke_factor():
    # phi = 1 / b_{1/2}: v is the factor itself, a and b are constants
    phi = InnerFunction.blaschke(0.5).to_rational()
    phi = RationalFunction(phi.denominator, phi.numerator)
    t = smirnov_canonical(phi)
    assert t.v.same_zeros(InnerFunction.blaschke(0.5))
    assert t.normalization_error() < 1e-10
    assert t.a(0).real > 0 and abs(t.a(0).imag) < 1e-12


def check_triple(phi, t, tol=1e-8):
    z = 0.5 * np.exp(2j * np.pi * np.arange(7) / 7 + 0.3j)
    poles = poly_roots(phi.denominator).locations if phi.denominator.degree else []
    z = np.array([w for w in z if all(abs(w - p) > 1e-3 for p in poles)])
    assert np.allclose(t.reconstruct()(z), phi(z), rtol=tol, atol=tol)
    assert t.normalization_error() <= tol
    a0 = t.a(0)
    assert a0.real > 0 and abs(a0.imag) <= tol * abs(a0)
    # a is outer: no zeros and no poles in the closed disk
    for poly in (t.a.numerator, t.a.denominator):
        if poly.degree:
            assert all(abs(r) > 1 for r in poly_roots(poly).locations)
    # b and v share no zeros
    if t.v.degree and not t.b.is_zero:
        assert np.min(np.abs(t.b(np.array([a for a, _ in t.v.zeros])))) > 1e-9


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_smirnov_triple_invariants(seed):
    rng = np.random.default_rng(seed)
    phi = random_rational(rng)
    check_triple(phi, smirnov_canonical(phi))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_local_smirnov_membership(seed):
    rng = np.random.default_rng(seed)
    u = random_inner(rng, int(rng.integers(1, 4)))
    a = u.zeros[0][0]
    good = RationalFunction(1, Polynomial([-0.5 * np.conj(a) - 2, 1]))
    bad = RationalFunction(1, Polynomial([-a, 1]))
    assert in_local_smirnov(good, u)
    assert not in_local_smirnov(bad, u)
