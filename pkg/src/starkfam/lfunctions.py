"""Dirichlet L-values: exact at non-positive integers, floating elsewhere.

The exact channel goes through generalized Bernoulli numbers,
``L(chi, 1 - k) = -B_{k,chi} / k``, with imprimitive characters handled by
multiplying Euler factors onto the value of the primitive core. The float
channel evaluates Hurwitz zeta by Euler-Maclaurin summation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable

import numpy as np

from . import kernels
from .cyclotomic import CyclotomicNumber, embed_complex, polylog_d
from .gring import (
    QQ,
    DirichletCharacter,
    GroupRingElement,
    characters,
    unit_group,
)

__all__ = [
    "bernoulli",
    "bernoulli_poly",
    "GeneralizedBernoulli",
    "gen_bernoulli",
    "parity_forced_zero",
    "l_value",
    "l_value_truncated",
    "ThetaElement",
    "theta",
    "delta_T",
    "euler_factor_group",
    "hurwitz_zeta",
    "digamma",
    "l_float",
    "l_derivative_at_zero",
    "classical_formula_check",
    "prime_factors",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, k) * B[k] for k in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n < 0:
        raise ValueError("bernoulli needs n >= 0")
    return _bernoulli_table(max(n, 16))[n]


def bernoulli_poly(n: int, x) -> Fraction:
    """B_n(x) = sum_k C(n, k) B_k x^(n - k)."""
    x = Fraction(x)
    B = _bernoulli_table(n)
    return sum((comb(n, k) * B[k] * x ** (n - k) for k in range(n + 1)), Fraction(0))


@dataclass(frozen=True)
class GeneralizedBernoulli:
    character: DirichletCharacter
    k: int
    value: CyclotomicNumber


@lru_cache(maxsize=None)
def _gen_bernoulli_value(chi: DirichletCharacter, k: int) -> CyclotomicNumber:
    f = chi.modulus
    bins = [Fraction(0)] * chi.level
    for a in chi.group.labels:
        # label f = 1 stands for a = 1; B_k(1) carries the B_1 = +1/2 convention
        bins[chi.log(a)] += bernoulli_poly(k, Fraction(a, f))
    scale = Fraction(f) ** (k - 1)
    return CyclotomicNumber.from_exponent_sums(chi.level, [b * scale for b in bins])


def gen_bernoulli(chi: DirichletCharacter, k: int) -> GeneralizedBernoulli:
    """B_{k,chi} = f^(k-1) sum_{a=1}^{f} chi(a) B_k(a/f) for primitive chi.

    For the trivial character mod 1 this is B_k, except B_{1,chi} = +1/2.
    """
    if k < 1:
        raise ValueError("gen_bernoulli needs k >= 1")
    if not chi.is_primitive():
        raise ValueError("primitive character required")
    return GeneralizedBernoulli(chi, k, _gen_bernoulli_value(chi, k))


# ---------------------------------------------------------------------------
# exact L-values


def parity_forced_zero(chi: DirichletCharacter, j: int) -> bool:
    """Whether L(chi, j) = 0 for parity reasons, j <= 0, chi primitive.

    L(chi, j) vanishes when chi(-1) = (-1)^j, except at j = 0 for the
    trivial character, where zeta(0) = -1/2.
    """
    if j == 0 and chi.is_trivial():
        return False
    return chi.parity() == (-1) ** (j % 2)


def l_value(chi: DirichletCharacter, j: int) -> CyclotomicNumber:
    """L(chi, j) for primitive chi and j <= 0, via -B_{1-j,chi}/(1-j).

    Zeros forced by parity (see :func:`parity_forced_zero`) come out as
    exact zeros of the Bernoulli sum; no special casing is applied.
    """
    if j > 0:
        raise ValueError("exact channel is non-positive only")
    k = 1 - j
    return -gen_bernoulli(chi, k).value / k


def _character_at(chi: DirichletCharacter, ell: int) -> CyclotomicNumber:
    if gcd(ell, chi.modulus) != 1:
        return CyclotomicNumber.rational(chi.level, 0)
    return chi.value(ell)


def l_value_truncated(chi: DirichletCharacter, j: int, S: Iterable[int] = (), T: Iterable[int] = ()) -> CyclotomicNumber:
    """L_{S,T}(chi, j) for any chi mod f.

    The value of the primitive core, times (1 - chi*(l) l^-j) for finite l in
    S, times (1 - chi(l) l^(1-j)) for l in T.
    """
    core = chi.primitive()
    val = l_value(core, j)
    for ell in sorted(set(S)):
        val = val * (1 - _character_at(core, ell) * ell ** (-j))
    for ell in sorted(set(T)):
        val = val * (1 - _character_at(chi, ell) * Fraction(ell) ** (1 - j))
    return val


# ---------------------------------------------------------------------------
# theta elements


@dataclass(frozen=True)
class ThetaElement:
    """theta_{S,T}(j) in Q[G] with its provenance; S lists finite primes (infinity implicit)."""

    value: GroupRingElement
    f: int
    S: tuple[int, ...]
    T: tuple[int, ...]
    j: int

    @property
    def group(self):
        return self.value.group

    def coeff(self, label: int) -> Fraction:
        return self.value.coeff(label)

    def items(self):
        return self.value.items()


def _normalize_places(S) -> tuple[int, ...]:
    out = set()
    for v in S:
        if isinstance(v, str):
            if v.strip().lower() in ("inf", "infinity", "oo", "∞"):
                continue
            v = int(v)
        if not is_prime(int(v)):
            raise ValueError(f"{v} is not a prime")
        out.add(int(v))
    return tuple(sorted(out))


def _check_places(f: int, S: tuple[int, ...], T: tuple[int, ...]) -> None:
    missing = [ell for ell in prime_factors(f) if ell not in S]
    if missing:
        raise ValueError(f"S must contain every prime dividing f={f}; missing {missing}")
    clash = set(S) & set(T)
    if clash:
        raise ValueError(f"S and T must be disjoint; both contain {sorted(clash)}")


def theta(f: int, S=None, T=(), j: int = 0) -> ThetaElement:
    """theta_{S,T}(j) = sum_chi L_{S,T}(chi^-1, j) e_chi in Q[G], G = (Z/f)^x.

    ``S`` defaults to the primes dividing ``f``. The sum is formed in
    Q(zeta_e)[G] and each coefficient must descend to Q.
    """
    S = _normalize_places(prime_factors(f) if S is None else S)
    T = _normalize_places(T)
    if j > 0:
        raise ValueError("exact channel is non-positive only")
    _check_places(f, S, T)
    return _theta_cached(f, S, T, j)


@lru_cache(maxsize=4096)
def _theta_cached(f: int, S: tuple[int, ...], T: tuple[int, ...], j: int) -> ThetaElement:
    G = unit_group(f)
    chis = characters(G)
    # coefficient of sigma_b is (1/#G) sum_psi L_{S,T}(psi, j) psi(b)
    lvals = [l_value_truncated(psi, j, S, T) for psi in chis]
    coeffs = []
    for b in G.labels:
        total = CyclotomicNumber.rational(chis[0].level, 0)
        for psi, L in zip(chis, lvals):
            if L:
                total = total + L * psi.value(b)
        if not total.is_rational():
            raise ArithmeticError(f"theta coefficient at sigma_{b} is not rational: {total!r}")
        coeffs.append(total.to_fraction() / G.order)
    return ThetaElement(GroupRingElement(G, QQ, coeffs), f, S, T, j)


def delta_T(f: int, T: Iterable[int], j: int) -> GroupRingElement:
    """prod_{l in T} (1 - l^(1-j) sigma_l^-1) in Q[G]."""
    G = unit_group(f)
    out = GroupRingElement.one(G, QQ)
    for ell in sorted(set(T)):
        if gcd(ell, f) != 1:
            raise ValueError(f"T-prime {ell} divides f={f}")
        term = GroupRingElement.basis(G, G.inv(ell), QQ).scale(Fraction(ell) ** (1 - j))
        out = out * (GroupRingElement.one(G, QQ) - term)
    return out


def euler_factor_group(f: int, ell: int, j: int) -> GroupRingElement:
    """1 - l^(-j) sigma_l^-1 in Q[G]."""
    if gcd(ell, f) != 1:
        raise ValueError(f"{ell} divides f={f}")
    G = unit_group(f)
    term = GroupRingElement.basis(G, G.inv(ell), QQ).scale(Fraction(ell) ** (-j))
    return GroupRingElement.one(G, QQ) - term


# ---------------------------------------------------------------------------
# float channel

_EM_TERMS = 40
_EM_SHIFT = 12


@lru_cache(maxsize=None)
def _em_coefficients() -> np.ndarray:
    """B_{2m}/(2m)! for m < _EM_TERMS (entry 0 unused)."""
    out = np.zeros(_EM_TERMS, dtype=np.float64)
    for m in range(1, _EM_TERMS):
        out[m] = float(bernoulli(2 * m) / math.factorial(2 * m))
    return out


def hurwitz_zeta(s: float, x: float) -> float:
    """zeta(s, x) = sum_{k >= 0} (x + k)^-s for real s != 1 and 0 < x <= 1.

    At non-positive integers the Euler-Maclaurin tail terminates, so no shift
    is used and the value is exact up to rounding. Elsewhere the first
    ``_EM_SHIFT`` terms are summed directly.
    """
    s = float(s)
    x = float(x)
    if s == 1.0:
        raise ValueError("hurwitz_zeta has a pole at s=1")
    if not 0.0 < x <= 1.0:
        raise ValueError("hurwitz_zeta needs 0 < x <= 1")
    if s <= 0 and s == int(s):
        return float(kernels.hurwitz_em(s, x, 0, _em_coefficients(), True))
    if s < _REFLECT_BELOW:
        return float(_hurwitz_reflected(s, x))
    return float(kernels.hurwitz_em(s, x, _EM_SHIFT, _em_coefficients(), False))


# Below this the shifted Euler-Maclaurin sum cancels catastrophically
# (direct terms of size 12^(1-s)), so negative non-integer s goes through
# Hurwitz's formula, which only needs polylogarithms of order 1 - s > 2.
_REFLECT_BELOW = -1.0


def _riemann_zeta(s: float) -> float:
    if s >= 0.5:
        return float(kernels.hurwitz_em(s, 1.0, _EM_SHIFT, _em_coefficients(), False))
    return (
        2.0**s
        * math.pi ** (s - 1.0)
        * math.sin(math.pi * s / 2.0)
        * math.gamma(1.0 - s)
        * _riemann_zeta(1.0 - s)
    )


def _polylog_on_circle(order: float, x: float) -> complex:
    """Li_order(exp(2 pi i x)) for non-integer order and |x| <= 1/2.

    Uses Li_q(e^w) = Gamma(1-q) (-w)^(q-1) + sum_k zeta(q-k) w^k / k!,
    convergent for |w| < 2 pi; here |w| <= pi so terms shrink like 2^-k.
    """
    w = 2j * math.pi * x
    total = math.gamma(1.0 - order) * (-w) ** (order - 1.0) if x else 0j
    power = 1 + 0j
    for k in range(200):
        term = _riemann_zeta(order - k) * power
        total += term
        if k > 4 and abs(term) <= 1e-18 * max(abs(total), 1e-300):
            break
        power *= w / (k + 1)
    return total


def _hurwitz_reflected(s: float, x: float) -> float:
    q = 1.0 - s
    y = x - round(x)
    phase = cmath.exp(-0.5j * math.pi * q)
    val = phase * _polylog_on_circle(q, y) + phase.conjugate() * _polylog_on_circle(q, -y)
    return (math.gamma(q) / (2 * math.pi) ** q * val).real


def digamma(x: float) -> float:
    """psi(x) for x > 0 by shifting and the asymptotic series."""
    if x <= 0:
        raise ValueError("digamma needs x > 0")
    total = 0.0
    while x < _EM_SHIFT:
        total -= 1.0 / x
        x += 1.0
    total += math.log(x) - 0.5 / x
    x2 = x * x
    xp = x2
    for m in range(1, 12):
        total -= float(bernoulli(2 * m)) / (2 * m * xp)
        xp *= x2
    return total


def l_float(chi: DirichletCharacter, s: float) -> complex:
    """L(chi, s) = f^-s sum_a chi(a) zeta(s, a/f) for primitive chi."""
    if not chi.is_primitive():
        raise ValueError("primitive character required")
    f = chi.modulus
    if f == 1:
        return complex(hurwitz_zeta(s, 1.0))
    total = 0j
    for a in chi.group.labels:
        total += embed_complex(chi.value(a), 1) * hurwitz_zeta(s, a / f)
    return total * f ** (-s)


_RICHARDSON_H0 = 0.1
_RICHARDSON_LEVELS = 5


def l_derivative_at_zero(chi: DirichletCharacter) -> float | complex:
    """L'(chi, 0) by central differences with Richardson extrapolation.

    Steps h0 / 2^i for i < 5 with h0 = 0.1; the central difference has an
    even error expansion, so each column removes one power of h^2. Real
    characters return a ``float``.
    """
    if chi.is_trivial() and chi.modulus == 1:
        raise ValueError("use a nontrivial character")
    table: list[list[complex]] = []
    h = _RICHARDSON_H0
    for i in range(_RICHARDSON_LEVELS):
        row = [(l_float(chi, h) - l_float(chi, -h)) / (2 * h)]
        for k in range(1, i + 1):
            w = 4.0**k
            row.append((w * row[k - 1] - table[i - 1][k - 1]) / (w - 1))
        table.append(row)
        h /= 2
    val = table[-1][-1]
    return val.real if chi.is_real() else val


def classical_formula_check(f: int, j: int) -> list[tuple[int, float, float, float]]:
    """Compare the plus part of theta(j) with the polylogarithm side, j in {1, 2}.

    For each unit ``a`` mod ``f`` returns ``(a, lhs, rhs, |lhs - rhs|)`` where
    ``lhs`` is the coefficient of sigma_a^-1 in e_j^+ theta(j), computed from
    Hurwitz zeta (j = 2) or digamma (j = 1), and
    ``rhs = (1/4) (2 pi i / f)^j (d_j(z^a) + (-1)^j d_j(z^-a))`` with
    ``z = exp(2 pi i / f)``.
    """
    if j not in (1, 2):
        raise ValueError("classical formula check covers j in {1, 2} only")
    if f < 3:
        raise ValueError("need f >= 3")
    d = polylog_d(j)
    period = (2j * math.pi / f) ** j
    rows = []
    for a in unit_group(f).labels:
        x = a / f
        if j == 1:
            lhs = (digamma(1 - x) - digamma(x)) / (2 * f)
        else:
            lhs = (hurwitz_zeta(2.0, x) + hurwitz_zeta(2.0, 1 - x)) / (2 * f * f)
        t = cmath.exp(2j * math.pi * a / f)
        rhs_c = 0.25 * period * (d(t) + (-1) ** j * d(1 / t))
        rows.append((a, lhs, rhs_c.real, abs(lhs - rhs_c)))
    return rows
