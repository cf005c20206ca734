import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelspace_lab.errors import (
    BoundaryZeroError,
    DegenerateInputError,
    NotFactorableError,
    PoleError,
)
from modelspace_lab.ratfun import (
    Polynomial,
    RationalFunction,
    RootSet,
    circle_points,
    fejer_riesz,
    laurent_eval,
    modulus_squared_laurent,
    poly_roots,
    rat_arith,
)

seeds = st.integers(0, 2**32 - 1)


def roots_dict(rs: RootSet):
    return sorted((round(z.real, 9), round(z.imag, 9), m) for z, m in rs)


# --- Polynomial ---------------------------------------------------------------


def test_polynomial_trims_and_degree():
    p = Polynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert np.allclose(p.coefficients, [1, 2])
    assert Polynomial([0, 0]).is_zero
    assert Polynomial([0]).degree == 0


def test_polynomial_arithmetic_matches_numpy():
    a = Polynomial([1, -2, 3j])
    b = Polynomial([0.5, 1])
    assert np.allclose((a * b).coefficients, np.convolve([1, -2, 3j], [0.5, 1]))
    assert np.allclose((a + b).coefficients, [1.5, -1, 3j])
    q, r = divmod(a, b)
    assert np.allclose((q * b + r).coefficients, a.coefficients)
    assert np.allclose((b**3).coefficients, np.convolve(np.convolve([0.5, 1], [0.5, 1]), [0.5, 1]))


def test_polynomial_deflate_both_directions():
    p = Polynomial.from_roots([0.3, 2.5, -4j])
    for r in (0.3, 2.5, -4j):
        q = p.deflate(r)
        assert np.allclose((q * Polynomial([-r, 1])).coefficients, p.coefficients)


def test_polynomial_taylor_and_derivative():
    p = Polynomial([1, 2, 3])
    # p(z) = 1 + 2z + 3z^2 around 1: 6 + 8h + 3h^2
    assert np.allclose(p.taylor(1.0), [6, 8, 3])
    assert np.allclose(p.derivative().coefficients, [2, 6])


def test_polynomial_json_round_trip():
    p = Polynomial([1 + 2j, -0.5, 3])
    data = p.to_json()
    assert data == [[1.0, 2.0], [-0.5, 0.0], [3.0, 0.0]]
    assert Polynomial.from_json(data).allclose(p)


# --- poly_roots -----------------------------------------------------------------


def test_roots_of_z2_plus_1():
    assert roots_dict(poly_roots(Polynomial([1, 0, 1]))) == [(0.0, -1.0, 1), (0.0, 1.0, 1)]


def test_roots_of_perfect_square():
    rs = poly_roots(Polynomial([1, -2, 1]))
    assert len(rs) == 1
    (z, m), = rs
    assert m == 2 and abs(z - 1) < 1e-9


def test_roots_of_z3_minus_half_z2():
    p = Polynomial([0, 0, -0.5, 1])
    rs = poly_roots(p)
    assert roots_dict(rs) == [(0.0, 0.0, 2), (0.5, 0.0, 1)]
    # expanding the claimed factorization reproduces the coefficients
    assert Polynomial.from_roots(rs.expanded()).allclose(p)


def test_triple_root_located_to_high_accuracy():
    rs = poly_roots(Polynomial.from_roots([0.3, 0.3, 0.3]))
    assert list(rs.multiplicities) == [3]
    assert abs(rs.locations[0] - 0.3) < 1e-12


def test_zero_polynomial_is_degenerate():
    with pytest.raises(DegenerateInputError):
        poly_roots(Polynomial([0]))


def test_constant_polynomial_has_no_roots():
    assert len(poly_roots(Polynomial([3.0]))) == 0


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 10))
def test_roots_reconstruct_random_polynomials(seed, degree):
    rng = np.random.default_rng(seed)
    c = rng.uniform(-1, 1, degree + 1) + 1j * rng.uniform(-1, 1, degree + 1)
    c[-1] = c[-1] if abs(c[-1]) > 0.05 else 1.0
    p = Polynomial(c)
    rs = poly_roots(p)
    assert rs.degree == degree
    rebuilt = Polynomial.from_roots(rs.expanded(), p.leading)
    assert np.max(np.abs(rebuilt.coefficients - c)) <= 1e-7 * np.max(np.abs(c))
    # residual bound and agreement with an eigenvalue-based oracle
    for z in rs.locations:
        assert abs(p(z)) <= 1e-9 * max(np.max(np.abs(c)), np.sum(np.abs(c) * abs(z) ** np.arange(degree + 1)))
    oracle = np.roots(c[::-1])
    for z in oracle:
        assert np.min(np.abs(np.array(rs.locations) - z)) < 1e-6


# --- RationalFunction and rat_arith --------------------------------------------


def test_rational_reduces_common_roots():
    f = RationalFunction(Polynomial.from_roots([0.5, 2]), Polynomial.from_roots([0.5, -3]))
    assert f.numerator.degree == 1 and f.denominator.degree == 1
    assert abs(f(0.1) - (0.1 - 2) / (0.1 + 3)) < 1e-12


def test_mul_inverse_pair_is_one():
    z = RationalFunction.identity()
    inv = RationalFunction(1, Polynomial([0, 1]))
    out = rat_arith("mul", inv, z)
    assert out.is_polynomial and out.numerator.degree == 0
    assert abs(out(0.3) - 1) < 1e-12


def test_add_z_and_one():
    out = rat_arith("add", RationalFunction.identity(), RationalFunction.constant(1))
    assert np.allclose(out.numerator.coefficients, [1, 1])


def test_div_by_linear_factor():
    out = rat_arith("div", RationalFunction(Polynomial([-0.25, 0, 1])), RationalFunction(Polynomial([-0.5, 1])))
    assert out.is_polynomial
    assert np.allclose(out.numerator.coefficients, [0.5, 1])


def test_div_by_zero_function():
    with pytest.raises(DegenerateInputError):
        rat_arith("div", RationalFunction.identity(), RationalFunction.constant(0))


def test_compose_with_moebius():
    b = RationalFunction(Polynomial([-0.5, 1]), Polynomial([1, -0.5]))
    f = RationalFunction(Polynomial([1, 2, 1]))
    out = rat_arith("compose_with_moebius", f, b)
    z = np.array([0.2 + 0.1j, -0.4j])
    assert np.allclose(out(z), f(b(z)))


def test_evaluation_at_pole_raises():
    with pytest.raises(PoleError):
        RationalFunction(1, Polynomial([-0.5, 1]))(0.5)


def random_rational(rng, max_deg=3):
    num = Polynomial(rng.standard_normal(rng.integers(1, max_deg + 2)) + 1j * rng.standard_normal(1))
    den_roots = 1.5 * np.exp(2j * np.pi * rng.uniform(size=rng.integers(0, max_deg + 1)))
    return RationalFunction(num, Polynomial.from_roots(den_roots))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_arith_agrees_pointwise_and_laws(seed):
    rng = np.random.default_rng(seed)
    f, g, h = (random_rational(rng) for _ in range(3))
    zeta = np.exp(2j * np.pi * rng.uniform(size=16))
    fz, gz, hz = f(zeta), g(zeta), h(zeta)
    scale = 1 + np.abs(fz) + np.abs(gz) + np.abs(hz)
    tol = 1e-9
    assert np.all(np.abs(rat_arith("add", f, g)(zeta) - (fz + gz)) <= tol * scale**2)
    assert np.all(np.abs(rat_arith("mul", f, g)(zeta) - fz * gz) <= tol * scale**2)
    assert np.all(np.abs((f + g)(zeta) - (g + f)(zeta)) <= tol * scale**2)
    assert np.all(np.abs((f * g)(zeta) - (g * f)(zeta)) <= tol * scale**2)
    assert np.all(np.abs(((f + g) + h)(zeta) - (f + (g + h))(zeta)) <= tol * scale**3)
    assert np.all(np.abs(((f * g) * h)(zeta) - (f * (g * h))(zeta)) <= tol * scale**3)
    if not g.is_zero:
        assert np.all(np.abs(rat_arith("div", f, g)(zeta) * gz - fz) <= tol * scale**2)


def test_rational_json_round_trip():
    f = RationalFunction(Polynomial([1, 2j]), Polynomial([3, 1]))
    g = RationalFunction.from_json(f.to_json())
    assert g.numerator.allclose(f.numerator) and g.denominator.allclose(f.denominator)


# --- Fejer-Riesz ---------------------------------------------------------------


def test_fejer_riesz_5_plus_4cos():
    s = fejer_riesz([2, 5, 2])
    assert np.allclose(s.coefficients, [2, 1])


def test_fejer_riesz_constants():
    assert np.allclose(fejer_riesz([1]).coefficients, [1])
    assert np.allclose(fejer_riesz([2]).coefficients, [np.sqrt(2)])


def test_fejer_riesz_rejects_negative_values():
    # 1 + 2 cos(theta) is negative near theta = pi
    with pytest.raises(NotFactorableError) as info:
        fejer_riesz([1, 1, 1])
    assert info.value.angle is not None and np.cos(info.value.angle) < -0.5 + 1e-9


def test_fejer_riesz_rejects_asymmetric_input():
    with pytest.raises(Exception):
        fejer_riesz([1, 5, 2])


def test_fejer_riesz_rejects_boundary_zero():
    # |1 + z|^2 vanishes at z = -1
    with pytest.raises((NotFactorableError, BoundaryZeroError)):
        fejer_riesz(modulus_squared_laurent(Polynomial([1, 1])))


def test_modulus_squared_laurent():
    assert np.allclose(modulus_squared_laurent(Polynomial([2, 1])), [2, 5, 2])


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 5))
def test_fejer_riesz_reproduces_positive_input(seed, degree):
    rng = np.random.default_rng(seed)
    # strictly positive: |p|^2 + c with c >= 1e-2
    p = Polynomial(rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))
    L = modulus_squared_laurent(p)
    L[len(L) // 2] += rng.uniform(1e-2, 1)
    s = fejer_riesz(L)
    theta = 2 * np.pi * np.arange(512) / 512
    target = laurent_eval(L, theta).real
    got = np.abs(s(np.exp(1j * theta))) ** 2
    assert np.max(np.abs(got - target)) <= 1e-8 * max(1.0, np.max(target))
    assert abs(s.coefficients[0].imag) < 1e-12 and s.coefficients[0].real > 0
    assert all(abs(z) > 1 for z in poly_roots(s).locations) if s.degree else True


def test_circle_points():
    z = circle_points(8)
    assert np.allclose(np.abs(z), 1) and np.isclose(z[0], 1)
