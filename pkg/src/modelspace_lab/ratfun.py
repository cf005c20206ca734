"""Complex polynomials, rational functions, root finding and Fejer-Riesz factorization.

Coefficient arrays are stored lowest degree first throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import tolerances
from .errors import DegenerateInputError, NotFactorableError, NumericalFailure, PoleError

_EPS = np.finfo(float).eps


class Polynomial:
    """Immutable complex polynomial, coefficients lowest degree first."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable[complex] | complex):
        c = np.atleast_1d(np.asarray(coefficients, dtype=complex)).ravel().copy()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        # trailing (high-order) exact zeros carry no information
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        c.setflags(write=False)
        self._c = c

    @classmethod
    def from_roots(cls, roots: Iterable[complex], leading: complex = 1.0) -> "Polynomial":
        c = np.array([leading], dtype=complex)
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c)

    @classmethod
    def monomial(cls, k: int, coefficient: complex = 1.0) -> "Polynomial":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = coefficient
        return cls(c)

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def is_zero(self) -> bool:
        return len(self._c) == 1 and self._c[0] == 0

    @property
    def leading(self) -> complex:
        return complex(self._c[-1])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z) + self._c[-1]
        for a in self._c[-2::-1]:
            out = out * z + a
        return out if out.ndim else complex(out)

    def __repr__(self):
        return f"Polynomial({np.array2string(self._c, precision=6)})"

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if np.isscalar(other):
            return Polynomial([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self._c), len(other._c))
        c = np.zeros(n, dtype=complex)
        c[: len(self._c)] += self._c
        c[: len(other._c)] += other._c
        return Polynomial(c)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero:
            raise DegenerateInputError("polynomial division by zero polynomial")
        num = self._c.copy()
        den = other._c
        dn = len(den) - 1
        if len(num) - 1 < dn:
            return Polynomial([0.0]), self
        q = np.zeros(len(num) - dn, dtype=complex)
        for k in range(len(q) - 1, -1, -1):
            q[k] = num[k + dn] / den[-1]
            num[k : k + dn + 1] -= q[k] * den
        return Polynomial(q), Polynomial(num[:dn] if dn else [0.0])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def deflate(self, root: complex) -> "Polynomial":
        """Quotient by (z - root), remainder discarded.

        Runs from the top for |root| <= 1 and from the constant term otherwise,
        which keeps the recurrence stable in both cases.
        """
        a = self._c
        n = len(a) - 1
        if n < 1:
            raise DegenerateInputError("cannot deflate a constant polynomial")
        q = np.zeros(n, dtype=complex)
        if abs(root) <= 1:
            q[-1] = a[-1]
            for k in range(n - 2, -1, -1):
                q[k] = a[k + 1] + root * q[k + 1]
        else:
            q[0] = -a[0] / root
            for k in range(1, n):
                q[k] = (q[k - 1] - a[k]) / root
        return Polynomial(q)

    def derivative(self, order: int = 1) -> "Polynomial":
        c = self._c
        for _ in range(order):
            if len(c) == 1:
                return Polynomial([0.0])
            c = c[1:] * np.arange(1, len(c))
        return Polynomial(c)

    def conj_coefficients(self) -> "Polynomial":
        """The polynomial z -> conj(p(conj z))."""
        return Polynomial(self._c.conj())

    def taylor(self, center: complex) -> np.ndarray:
        """Coefficients of p(center + w) in powers of w (repeated synthetic division)."""
        c = self._c.copy()
        n = len(c)
        for i in range(n - 1):
            for k in range(n - 2, i - 1, -1):
                c[k] += center * c[k + 1]
        return c

    def allclose(self, other: "Polynomial", atol: float = 1e-10) -> bool:
        n = max(len(self._c), len(other._c))
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: len(self._c)] = self._c
        b[: len(other._c)] = other._c
        return bool(np.max(np.abs(a - b)) <= atol)

    def to_json(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self._c]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[float]]) -> "Polynomial":
        return cls([complex(re, im) for re, im in data])


@dataclass(frozen=True)
class RootSet:
    """Distinct root locations with multiplicities."""

    roots: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "roots", tuple((complex(z), int(m)) for z, m in self.roots)
        )
        if any(m < 1 for _, m in self.roots):
            raise ValueError("multiplicities must be positive")

    @property
    def locations(self) -> np.ndarray:
        return np.array([z for z, _ in self.roots], dtype=complex)

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.roots]

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> list[complex]:
        return [z for z, m in self.roots for _ in range(m)]

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


# ---------------------------------------------------------------------------
# root finding


def _aberth(a: np.ndarray, rng: np.random.Generator, max_iter: int):
    """Aberth-Ehrlich iteration on monic-normalised coefficients ``a`` (low first)."""
    n = len(a) - 1
    a = a / a[-1]
    da = a[1:] * np.arange(1, n + 1)
    absa = np.abs(a)

    def horner(c, z):
        out = np.full_like(z, c[-1])
        for coef in c[-2::-1]:
            out = out * z + coef
        return out

    radius = max(
        np.max(np.abs(a[:-1]) ** (1.0 / (n - np.arange(n)))) if n else 1.0, 1e-3
    )
    offset = rng.uniform(0, 2 * np.pi)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + offset + 0.4))
    z *= 1 + 0.01 * rng.standard_normal(n)

    done = np.zeros(n, dtype=bool)
    best, best_res = z.copy(), np.inf
    for _ in range(max_iter):
        pz = horner(a, z)
        bound = 8 * n * _EPS * horner(absa, np.abs(z)).real
        done = np.abs(pz) <= bound
        res = float(np.max(np.abs(pz) / np.maximum(bound, 1e-300)))
        if res < best_res:
            best, best_res = z.copy(), res
        if done.all():
            return z, True
        dpz = horner(da, z) if n > 1 else np.full_like(z, da[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1 - ratio * s)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = 1e-3 * radius * rng.standard_normal(int(bad.sum()))
        w[done] = 0
        z = z - w
    return best, False


def _union_clusters(z: np.ndarray, radius: np.ndarray) -> list[list[int]]:
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= max(radius[i], radius[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _is_multiple_root(p: Polynomial, c: complex, m: int, tol_pair: float) -> bool:
    """Whether p is consistent with an m-fold root cluster of radius tol_pair at c."""
    t = p.taylor(c)
    if len(t) <= m:
        return False
    scale = np.max(np.abs(p.coefficients))
    n = p.degree
    for j in range(m):
        ks = np.arange(j, n + 1)
        spread = sum(comb(int(k), j) * abs(c) ** (k - j) for k in ks)
        noise = 64 * n * _EPS * scale * spread
        if abs(t[j]) > comb(m, j) * tol_pair ** (m - j) * abs(t[m]) + noise:
            return False
    return True


def _refine_multiple(p: Polynomial, z: complex, m: int, steps: int = 4) -> complex:
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    q = p.derivative(m - 1)
    dq = q.derivative()
    for _ in range(steps):
        d = dq(z)
        if d == 0:
            break
        step = q(z) / d
        if not np.isfinite(step) or abs(step) > 1e-3 * max(1.0, abs(z)):
            break
        z = z - step
    return complex(z)


def _merge_close(roots: list[tuple[complex, int]], tol_pair: float):
    roots = list(roots)
    merged = True
    while merged:
        merged = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                (zi, mi), (zj, mj) = roots[i], roots[j]
                if abs(zi - zj) <= tol_pair:
                    roots[i] = ((mi * zi + mj * zj) / (mi + mj), mi + mj)
                    del roots[j]
                    merged = True
                    break
            if merged:
                break
    return roots


def poly_roots(p: Polynomial, tol_pair: float | None = None, tol_root: float | None = None,
               max_iter: int = 500, restarts: int = 4) -> RootSet:
    """Roots of ``p`` with multiplicities.

    Simultaneous Aberth-Ehrlich iteration followed by cluster detection: groups
    of approximations are collapsed to one multiple root when the Taylor
    coefficients of ``p`` at their centroid are consistent with all roots of
    the group lying within ``tol_pair`` of it.  Remaining approximations closer
    than ``tol_pair`` are merged unconditionally.

    Raises
    ------
    DegenerateInputError
        If ``p`` is the zero polynomial.
    NumericalFailure
        If the iteration does not converge; ``best`` holds the last iterate.
    """
    tol_pair = tolerances.get("tol_pair", tol_pair)
    tol_root = tolerances.get("tol_root", tol_root)
    if p.is_zero:
        raise DegenerateInputError("roots of the zero polynomial are undefined")
    c = p.coefficients
    k0 = int(np.flatnonzero(c)[0])
    found: list[tuple[complex, int]] = [(0j, k0)] if k0 else []
    c = c[k0:]
    n = len(c) - 1
    if n == 1:
        found.append((-c[0] / c[1], 1))
    elif n > 1:
        rng = np.random.default_rng(0x5EED)
        for attempt in range(restarts + 1):
            z, ok = _aberth(c, rng, max_iter)
            if ok:
                break
        else:
            raise NumericalFailure(f"Aberth iteration did not converge (degree {n})", best=z)
        reduced = Polynomial(c)
        cand_radius = 1e-3 * np.maximum(1.0, np.abs(z))
        for group in _union_clusters(z, cand_radius):
            pts = z[group]
            centroid = complex(np.mean(pts))
            if len(group) == 1:
                found.append((centroid, 1))
            elif _is_multiple_root(reduced, centroid, len(group), tol_pair):
                found.append((_refine_multiple(reduced, centroid, len(group)), len(group)))
            else:
                found.extend(_merge_close([(complex(w), 1) for w in pts], tol_pair))
    roots = _merge_close(found, tol_pair)

    scale = float(np.max(np.abs(p.coefficients)))
    absc = Polynomial(np.abs(p.coefficients))
    for r, _ in roots:
        allowed = tol_root * max(scale, absc(abs(r)).real)
        if abs(p(r)) > allowed:
            raise NumericalFailure(
                f"root {r} has residual {abs(p(r)):.3e} > {allowed:.3e}", best=roots
            )
    roots.sort(key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))
    return RootSet(tuple(roots))


def _pair_greedy(a: list[tuple[complex, int]], b: list[tuple[complex, int]], tol: float):
    """Greedy nearest matching of two root multisets.

    Returns (common, rest_a, rest_b) as lists of (location, multiplicity).
    """
    a = [list(t) for t in a]
    b = [list(t) for t in b]
    pairs = sorted(
        ((abs(za - zb), i, j) for i, (za, _) in enumerate(a) for j, (zb, _) in enumerate(b)),
        key=lambda t: t[0],
    )
    common = []
    for d, i, j in pairs:
        if d > tol:
            break
        k = min(a[i][1], b[j][1])
        if k <= 0:
            continue
        common.append(((a[i][0] + b[j][0]) / 2, k))
        a[i][1] -= k
        b[j][1] -= k
    rest = lambda lst: [(z, m) for z, m in lst if m > 0]
    return common, rest(a), rest(b)


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Quotient of polynomials, kept in reduced form with a monic denominator.

    Numerator and denominator roots that pair within ``tol_pair`` are
    cancelled on construction (pass ``reduce=False`` to skip).
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1.0, reduce: bool = True, tol_pair: float | None = None):
        num = numerator if isinstance(numerator, Polynomial) else Polynomial(numerator)
        den = denominator if isinstance(denominator, Polynomial) else Polynomial(denominator)
        if den.is_zero:
            raise DegenerateInputError("denominator is identically zero")
        if num.is_zero:
            num, den = Polynomial([0.0]), Polynomial([1.0])
        elif reduce and num.degree > 0 and den.degree > 0:
            tol = tolerances.get("tol_pair", tol_pair)
            common, _, _ = _pair_greedy(list(poly_roots(num)), list(poly_roots(den)), tol)
            for z, m in common:
                for _ in range(m):
                    num, den = num.deflate(z), den.deflate(z)
        lead = den.leading
        self.numerator = Polynomial(num.coefficients / lead)
        self.denominator = Polynomial(den.coefficients / lead)

    @classmethod
    def constant(cls, c: complex) -> "RationalFunction":
        return cls(Polynomial([c]))

    @classmethod
    def identity(cls) -> "RationalFunction":
        return cls(Polynomial([0.0, 1.0]))

    @classmethod
    def coerce(cls, f) -> "RationalFunction":
        if isinstance(f, RationalFunction):
            return f
        if isinstance(f, Polynomial):
            return cls(f)
        if np.isscalar(f):
            return cls.constant(f)
        raise TypeError(f"cannot interpret {type(f).__name__} as a rational function")

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        d = self.denominator(z)
        if np.any(d == 0):
            raise PoleError("evaluation at a pole")
        return self.numerator(z) / d

    def __repr__(self):
        return f"RationalFunction({self.numerator!r} / {self.denominator!r})"

    def poles(self) -> RootSet:
        if self.denominator.degree == 0:
            return RootSet(())
        return poly_roots(self.denominator)

    def zeros(self) -> RootSet:
        if self.numerator.degree == 0:
            return RootSet(())
        return poly_roots(self.numerator)

    def __add__(self, other):
        return rat_arith("add", self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return rat_arith("add", self, rat_arith("mul", RationalFunction.constant(-1), other))

    def __rsub__(self, other):
        return rat_arith("add", other, rat_arith("mul", RationalFunction.constant(-1), self))

    def __mul__(self, other):
        return rat_arith("mul", self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return rat_arith("div", self, other)

    def __rtruediv__(self, other):
        return rat_arith("div", other, self)

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator, reduce=False)

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        return cls(Polynomial.from_json(data["numerator"]), Polynomial.from_json(data["denominator"]))


def _compose_moebius(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    if g.numerator.degree > 1 or g.denominator.degree > 1:
        raise DegenerateInputError("compose_with_moebius needs g of degree at most 1")
    alpha_z_beta, gamma_z_delta = g.numerator, g.denominator
    n = max(f.numerator.degree, f.denominator.degree)

    def lift(p: Polynomial) -> Polynomial:
        out = Polynomial([0.0])
        for k, coef in enumerate(p.coefficients):
            out = out + coef * (alpha_z_beta ** k) * (gamma_z_delta ** (n - k))
        return out

    return RationalFunction(lift(f.numerator), lift(f.denominator))


def rat_arith(op: str, f, g) -> RationalFunction:
    """Apply ``op`` in {add, mul, div, compose_with_moebius} to two rational functions."""
    f = RationalFunction.coerce(f)
    g = RationalFunction.coerce(g)
    if op == "add":
        return RationalFunction(
            f.numerator * g.denominator + g.numerator * f.denominator,
            f.denominator * g.denominator,
        )
    if op == "mul":
        return RationalFunction(f.numerator * g.numerator, f.denominator * g.denominator)
    if op == "div":
        if g.is_zero:
            raise DegenerateInputError("division by the zero function")
        return RationalFunction(f.numerator * g.denominator, f.denominator * g.numerator)
    if op == "compose_with_moebius":
        return _compose_moebius(f, g)
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# spectral factorization


def circle_points(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def laurent_eval(L: Sequence[complex], theta) -> np.ndarray:
    """Evaluate sum_k c_k e^{ik theta}, with L = (c_{-n}, ..., c_n)."""
    L = np.asarray(L, dtype=complex)
    n = (len(L) - 1) // 2
    theta = np.asarray(theta, dtype=float)
    k = np.arange(-n, n + 1)
    return np.exp(1j * np.multiply.outer(theta, k)) @ L


def modulus_squared_laurent(p: Polynomial) -> np.ndarray:
    """Laurent coefficients (c_{-d}..c_d) of |p(e^{i theta})|^2."""
    c = p.coefficients
    return np.convolve(c, c[::-1].conj())


def fejer_riesz(L: Sequence[complex], n_samples: int = 512, tol_fr: float | None = None,
                tol_pair: float | None = None) -> Polynomial:
    """Outer polynomial ``s`` with ``|s|^2 = L`` on the unit circle and ``s(0) > 0``.

    ``L`` lists the Laurent coefficients c_{-n}, ..., c_n of a strictly positive
    trigonometric polynomial.
    """
    tol_fr = tolerances.get("tol_fr", tol_fr)
    tol_pair = tolerances.get("tol_pair", tol_pair)
    L = np.asarray(L, dtype=complex)
    if L.ndim != 1 or len(L) % 2 == 0:
        raise ValueError("Laurent coefficient list must have odd length 2n+1")
    if not np.allclose(L, L[::-1].conj(), rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(L)))):
        raise ValueError("Laurent coefficients are not conjugate-symmetric")
    L = 0.5 * (L + L[::-1].conj())
    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    vals = laurent_eval(L, theta).real
    i_min = int(np.argmin(vals))
    if vals[i_min] <= 0:
        raise NotFactorableError(
            f"not strictly positive: value {vals[i_min]:.3e} at angle {theta[i_min]:.6f}",
            angle=float(theta[i_min]),
        )
    # strip vanishing outer Laurent coefficients
    n = (len(L) - 1) // 2
    while n > 0 and L[0] == 0:
        L = L[1:-1]
        n -= 1
    if n == 0:
        return Polynomial([np.sqrt(L[0].real)])

    roots = poly_roots(Polynomial(L))
    outside = []
    for r, m in roots:
        if abs(abs(r) - 1) <= tol_pair:
            raise NotFactorableError(f"root {r} on the unit circle", angle=float(np.angle(r)))
        if abs(r) > 1:
            outside.extend([r] * m)
    if len(outside) != n:
        raise NumericalFailure(
            f"expected {n} roots outside the disk, found {len(outside)}", best=roots
        )
    g = Polynomial.from_roots(outside, leading=np.prod([-1 / r for r in outside]))
    gz = np.abs(g(np.exp(1j * theta))) ** 2
    K2 = float(np.dot(vals, gz) / np.dot(gz, gz))
    s = Polynomial(g.coefficients * np.sqrt(K2))
    err = np.max(np.abs(np.abs(s(np.exp(1j * theta))) ** 2 - vals))
    if err > tol_fr * max(1.0, float(np.max(vals))):
        raise NumericalFailure(f"|s|^2 mismatch {err:.3e} exceeds tolerance", best=s)
    return s
