"""Finite Blaschke products and the canonical Smirnov decomposition b/(va)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import tolerances
from .errors import (
    BoundaryZeroError,
    DegenerateInputError,
    DivisibilityError,
    NotInH2Error,
    PoleError,
)
from .ratfun import (
    Polynomial,
    RationalFunction,
    _pair_greedy,
    fejer_riesz,
    modulus_squared_laurent,
    poly_roots,
)

ZERO_MODULUS_CAP = 0.95


def _merge(zeros: Iterable[tuple[complex, int]], tol: float) -> list[tuple[complex, int]]:
    """Combine zeros closer than ``tol``, keeping first-seen order."""
    out: list[list] = []
    for z, m in zeros:
        z = complex(z)
        for entry in out:
            if abs(entry[0] - z) <= tol:
                entry[1] += int(m)
                break
        else:
            out.append([z, int(m)])
    return [(z, m) for z, m in out]


class InnerFunction:
    """Finite Blaschke product ``c * prod_i ((z - a_i)/(1 - conj(a_i) z))^{m_i}``.

    Zeros keep their insertion order; that order fixes the Takenaka-Malmquist
    basis of the associated model space.
    """

    __slots__ = ("constant", "zeros")

    def __init__(self, zeros: Iterable[tuple[complex, int]] = (), constant: complex = 1.0,
                 tol_pair: float | None = None):
        constant = complex(constant)
        if abs(abs(constant) - 1) > 1e-12:
            raise ValueError(f"unimodular constant required, got modulus {abs(constant)}")
        zs = _merge(zeros, tolerances.get("tol_pair", tol_pair))
        for z, m in zs:
            if not abs(z) < 1:
                raise ValueError(f"zero {z} is not inside the open unit disk")
            if m < 1:
                raise ValueError("multiplicities must be positive")
        self.constant = constant / abs(constant)
        self.zeros: tuple[tuple[complex, int], ...] = tuple(zs)

    @classmethod
    def blaschke(cls, a: complex, multiplicity: int = 1) -> "InnerFunction":
        return cls([(a, multiplicity)])

    @classmethod
    def z_power(cls, k: int) -> "InnerFunction":
        return cls([(0j, k)] if k else [])

    @classmethod
    def one(cls) -> "InnerFunction":
        return cls()

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    def zero_list(self) -> list[complex]:
        """Zeros repeated by multiplicity, in stored order."""
        return [z for z, m in self.zeros for _ in range(m)]

    def within_cap(self, cap: float = ZERO_MODULUS_CAP) -> bool:
        return all(abs(z) <= cap for z, _ in self.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.constant, dtype=complex)
        for a, m in self.zeros:
            den = 1 - np.conj(a) * z
            if np.any(np.abs(den) < 1e-14):
                raise PoleError(f"evaluation at the pole 1/conj({a})")
            out = out * ((z - a) / den) ** m
        return out if out.ndim else complex(out)

    def __mul__(self, other: "InnerFunction") -> "InnerFunction":
        return inner_mul(self, other)

    def __repr__(self):
        zs = ", ".join(f"{z:.6g}^{m}" if m > 1 else f"{z:.6g}" for z, m in self.zeros)
        return f"InnerFunction([{zs}], constant={self.constant:.6g})"

    def to_rational(self) -> RationalFunction:
        num = Polynomial.from_roots(self.zero_list(), self.constant)
        den = Polynomial.from_roots([1 / np.conj(a) for a in self.zero_list() if a != 0],
                                    np.prod([-np.conj(a) for a in self.zero_list() if a != 0]))
        return RationalFunction(num, den, reduce=False)

    def same_zeros(self, other: "InnerFunction", tol: float | None = None) -> bool:
        """Equality up to the unimodular constant, zeros paired within ``tol``."""
        tol = tolerances.get("tol_pair", tol)
        common, ra, rb = _pair_greedy(list(self.zeros), list(other.zeros), tol)
        return not ra and not rb

    def to_json(self) -> dict:
        return {
            "constant": [self.constant.real, self.constant.imag],
            "zeros": [[z.real, z.imag, m] for z, m in self.zeros],
        }

    @classmethod
    def from_json(cls, data: dict) -> "InnerFunction":
        re, im = data["constant"]
        return cls([(complex(a, b), int(m)) for a, b, m in data["zeros"]], complex(re, im))


def inner_eval(u: InnerFunction, z):
    return u(z)


def inner_mul(u: InnerFunction, v: InnerFunction) -> InnerFunction:
    return InnerFunction(list(u.zeros) + list(v.zeros), u.constant * v.constant)


def inner_div(u: InnerFunction, d: InnerFunction, tol_pair: float | None = None) -> InnerFunction:
    """Quotient ``u / d``; raises DivisibilityError when ``d`` does not divide ``u``."""
    tol = tolerances.get("tol_pair", tol_pair)
    _, rest_u, rest_d = _pair_greedy(list(u.zeros), list(d.zeros), tol)
    if rest_d:
        raise DivisibilityError(
            f"{d!r} does not divide {u!r}: unmatched zeros {rest_d}", unmatched=rest_d
        )
    # keep u's ordering for the surviving zeros
    remaining = dict()
    for z, m in rest_u:
        remaining[z] = remaining.get(z, 0) + m
    ordered = [(z, remaining[z]) for z, _ in u.zeros if z in remaining]
    return InnerFunction(ordered, u.constant / d.constant)


def inner_gcd(u: InnerFunction, v: InnerFunction, tol_pair: float | None = None) -> InnerFunction:
    tol = tolerances.get("tol_pair", tol_pair)
    common, _, _ = _pair_greedy(list(u.zeros), list(v.zeros), tol)
    # report common zeros at u's locations so that gcd(u, v) divides u exactly
    located = []
    for z, m in common:
        nearest = min(u.zeros, key=lambda t: abs(t[0] - z))[0]
        located.append((nearest, m))
    return InnerFunction(located)


def relatively_prime(u: InnerFunction, v: InnerFunction, tol_pair: float | None = None) -> bool:
    return inner_gcd(u, v, tol_pair).degree == 0


def _split_roots(p: Polynomial, tol_pair: float):
    """Roots of p split into (inside, outside); boundary roots raise."""
    inside, outside = [], []
    if p.degree == 0:
        return inside, outside
    for r, m in poly_roots(p):
        if abs(abs(r) - 1) <= tol_pair:
            raise BoundaryZeroError(f"root {r} lies on the unit circle")
        (inside if abs(r) < 1 else outside).append((r, m))
    return inside, outside


def _strip_inner(p: Polynomial, inside: Sequence[tuple[complex, int]]) -> Polynomial:
    """p / B for the Blaschke product B over ``inside``: divide out (z - a), multiply in (1 - conj(a) z)."""
    zs = [z for z, m in inside for _ in range(m)]
    if not zs:
        return p
    q = p // Polynomial.from_roots(zs)
    for a in zs:
        q = q * Polynomial([1.0, -np.conj(a)])
    return q


def inner_outer_factorize(f: RationalFunction, tol_pair: float | None = None):
    """Split ``f`` (no poles in the closed disk) into ``(inner, outer)``.

    The outer factor is normalised to be positive at the origin; the phase
    goes into the inner factor's constant.
    """
    tol = tolerances.get("tol_pair", tol_pair)
    f = RationalFunction.coerce(f)
    if f.is_zero:
        raise DegenerateInputError("the zero function has no inner-outer factorization")
    pin, _ = _split_roots(f.denominator, tol)
    if pin:
        raise NotInH2Error(f"poles {pin} inside the unit disk")
    inside, _ = _split_roots(f.numerator, tol)
    outer_num = _strip_inner(f.numerator, inside)
    f0 = outer_num(0) / f.denominator(0)
    phase = f0 / abs(f0)
    outer = RationalFunction(outer_num * (1 / phase), f.denominator, reduce=False)
    return InnerFunction(inside, phase), outer


@dataclass(frozen=True)
class SmirnovTriple:
    """Canonical representation phi = b / (v a), with a outer, a(0) > 0, |a|^2 + |b|^2 = 1."""

    b: RationalFunction
    v: InnerFunction
    a: RationalFunction

    def reconstruct(self) -> RationalFunction:
        return self.b / (self.v.to_rational() * self.a)

    def normalization_error(self, n_samples: int = 512) -> float:
        zeta = np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
        return float(np.max(np.abs(np.abs(self.a(zeta)) ** 2 + np.abs(self.b(zeta)) ** 2 - 1)))

    def to_json(self) -> dict:
        return {"b": self.b.to_json(), "v": self.v.to_json(), "a": self.a.to_json()}


def _pad_sum(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = max(len(x), len(y))
    out = np.zeros(n, dtype=complex)
    out[(n - len(x)) // 2 : (n + len(x)) // 2] += x
    out[(n - len(y)) // 2 : (n + len(y)) // 2] += y
    return out


def smirnov_canonical(phi, tol_pair: float | None = None) -> SmirnovTriple:
    """Canonical triple (b, v, a) of a rational Nevanlinna function.

    ``v`` is the inner part of the denominator; with ``q_out`` the remaining
    outer polynomial and ``s`` the outer spectral factor of ``|p|^2 + |q_out|^2``,
    ``a = q_out / s`` and ``b = p / s``.
    """
    tol = tolerances.get("tol_pair", tol_pair)
    phi = RationalFunction.coerce(phi)
    if phi.is_zero:
        one = RationalFunction.constant(1.0)
        return SmirnovTriple(RationalFunction.constant(0.0), InnerFunction.one(), one)
    p, q = phi.numerator, phi.denominator
    inside, _ = _split_roots(q, tol)
    q_out = _strip_inner(q, inside)
    rot = np.conj(q_out(0)) / abs(q_out(0))
    p, q_out = p * rot, q_out * rot
    L = _pad_sum(modulus_squared_laurent(p), modulus_squared_laurent(q_out))
    s = fejer_riesz(L)
    return SmirnovTriple(
        b=RationalFunction(p, s),
        v=InnerFunction(inside),
        a=RationalFunction(q_out, s),
    )


def in_local_smirnov(phi, u: InnerFunction, tol_pair: float | None = None) -> bool:
    """Whether phi lies in the local Smirnov class of ``u``."""
    return relatively_prime(smirnov_canonical(phi, tol_pair).v, u, tol_pair)
