"""Exact arithmetic in Q(zeta_m) and the polylogarithmic functions d_j.

Elements of ``Q(zeta_m)`` are stored as rational coefficient vectors of length
``phi(m)``, always reduced modulo the cyclotomic polynomial. There is no
implicit common field: numbers of different level only combine after an
explicit :meth:`CyclotomicNumber.raise_level`.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

__all__ = [
    "CyclotomicNumber",
    "RationalFunction",
    "cyclotomic_polynomial",
    "galois_apply",
    "embed_complex",
    "cyclotomic_unit_log_sum",
    "polylog_d",
    "euler_phi",
]


def euler_phi(m: int) -> int:
    return sum(1 for a in range(1, m + 1) if gcd(a, m) == 1)


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # integer polynomials, low degree first; den monic
    num = list(num)
    dq = len(den) - 1
    if len(num) - 1 < dq:
        return [0], num
    quot = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            quot[i - dq] = c
            for k in range(dq + 1):
                num[i - dq + k] -= c * den[k]
    rem = num[:dq] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, constant term first.

    Built by dividing ``x^m - 1`` by ``Phi_d`` for every proper divisor ``d``.
    """
    if m < 1:
        raise ValueError("cyclotomic_polynomial needs m >= 1")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of x^k mod Phi_m for 0 <= k < m."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg > 0 else []
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by x and reduce
        top = cur[-1] if deg else 0
        nxt = [0] + cur[:-1] if deg else []
        for k in range(deg):
            nxt[k] -= top * phi[k]
        cur = nxt
    return tuple(rows)


class CyclotomicNumber:
    """An element of ``Q(zeta_m)``."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: Sequence = ()):
        self.level = level
        deg = len(cyclotomic_polynomial(level)) - 1
        vec = [Fraction(0)] * deg
        table = _power_table(level)
        for k, c in enumerate(coeffs):
            if not c:
                continue
            c = Fraction(c)
            if k < deg:
                vec[k] += c
            else:
                row = table[k % level]
                for i, t in enumerate(row):
                    if t:
                        vec[i] += c * t
        self.coeffs = tuple(vec)

    @classmethod
    def _raw(cls, level, coeffs):
        obj = cls.__new__(cls)
        obj.level = level
        obj.coeffs = coeffs
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zeta(cls, level: int, k: int = 1) -> "CyclotomicNumber":
        """``zeta_level ** k``."""
        row = _power_table(level)[k % level]
        return cls._raw(level, tuple(Fraction(t) for t in row))

    @classmethod
    def rational(cls, level: int, q) -> "CyclotomicNumber":
        deg = len(cyclotomic_polynomial(level)) - 1
        return cls._raw(level, (Fraction(q),) + (Fraction(0),) * (deg - 1))

    @classmethod
    def from_exponent_sums(cls, level: int, bins: Sequence) -> "CyclotomicNumber":
        """``sum_k bins[k] * zeta^k`` for ``k < level``."""
        return cls(level, bins)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.level != self.level:
                raise ValueError(
                    f"level mismatch: Q(zeta_{self.level}) vs Q(zeta_{other.level}); "
                    "use raise_level"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.rational(self.level, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber._raw(
            self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.level, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber._raw(self.level, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # integer numerators over a common denominator keep Fraction work linear
        da, na = _common_denominator(self.coeffs)
        db, nb = _common_denominator(other.coeffs)
        deg = len(na)
        prod = [0] * (2 * deg - 1)
        for i, a in enumerate(na):
            if a:
                for j, b in enumerate(nb):
                    if b:
                        prod[i + j] += a * b
        table = _power_table(self.level)
        for k in range(deg, len(prod)):
            c = prod[k]
            if c:
                for i, t in enumerate(table[k % self.level]):
                    if t:
                        prod[i] += c * t
        den = da * db
        return CyclotomicNumber._raw(self.level, tuple(Fraction(v, den) for v in prod[:deg]))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber._raw(self.level, tuple(a / other for a in self.coeffs))
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.rational(self.level, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "CyclotomicNumber":
        """Inverse as (product of the other conjugates) / norm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        m = self.level
        others = CyclotomicNumber.rational(m, 1)
        for a in range(2, m + 1):
            if gcd(a, m) == 1 and a % m != 1:
                others = others * galois_apply(a, self)
        nrm = self * others
        assert nrm.is_rational()
        return others / nrm.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.level, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.is_rational():
            return f"CyclotomicNumber({self.level}, {self.coeffs[0]})"
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"CyclotomicNumber({self.level}: {' + '.join(terms)})"

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def conjugate(self) -> "CyclotomicNumber":
        return galois_apply(-1, self)

    def norm(self) -> Fraction:
        m = self.level
        prod = CyclotomicNumber.rational(m, 1)
        for a in range(1, m + 1):
            if gcd(a, m) == 1:
                prod = prod * galois_apply(a, self)
        return prod.to_fraction()

    def raise_level(self, new_level: int) -> "CyclotomicNumber":
        """Image under Q(zeta_m) -> Q(zeta_m'), zeta_m -> zeta_m'^(m'/m)."""
        if new_level % self.level:
            raise ValueError(f"{self.level} does not divide {new_level}")
        step = new_level // self.level
        bins = [Fraction(0)] * new_level
        for k, c in enumerate(self.coeffs):
            bins[(k * step) % new_level] += c
        return CyclotomicNumber(new_level, bins)

    def __complex__(self):
        return embed_complex(self, 1)


def _common_denominator(coeffs) -> tuple[int, list[int]]:
    den = 1
    for c in coeffs:
        d = c.denominator
        if d != 1:
            den = den * d // math.gcd(den, d)
    return den, [c.numerator * (den // c.denominator) for c in coeffs]


def galois_apply(a: int, z: CyclotomicNumber) -> CyclotomicNumber:
    """sigma_a: zeta_m -> zeta_m^a."""
    m = z.level
    if gcd(a, m) != 1:
        raise ValueError(f"galois_apply: gcd({a}, {m}) != 1")
    bins = [Fraction(0)] * m
    for k, c in enumerate(z.coeffs):
        if c:
            bins[(k * a) % m] += c
    return CyclotomicNumber(m, bins)


def embed_complex(z: CyclotomicNumber, a: int = 1) -> complex:
    """Evaluate ``z`` at ``zeta_m -> exp(2 pi i a / m)``."""
    m = z.level
    if gcd(a, m) != 1:
        raise ValueError(f"embed_complex: gcd({a}, {m}) != 1")
    total = 0j
    for k, c in enumerate(z.coeffs):
        if c:
            total += float(c) * cmath.exp(2j * math.pi * ((a * k) % m) / m)
    return total


def cyclotomic_unit_log_sum(f: int, chi) -> float | complex:
    """Regulator side of the weight-0 Stark identity for an even character.

    Returns ``R(chi) = sum_a conj(chi(a)) * log|1 - exp(2 pi i a / f)|`` over
    units ``a`` mod ``f``. For an even primitive nontrivial ``chi`` one has
    ``L'(conj chi, 0) = -R(chi) / 2``. Real characters give a ``float``.
    """
    if chi.modulus != f:
        raise ValueError(f"character has modulus {chi.modulus}, expected {f}")
    if chi.is_trivial() or not chi.is_even() or not chi.is_primitive():
        raise ValueError("outside verified regime: need chi even, nontrivial, primitive")
    total = 0j
    for a in chi.group.labels:
        w = complex(embed_complex(chi.value(a), 1)).conjugate()
        total += w * math.log(abs(1 - cmath.exp(2j * math.pi * a / f)))
    if chi.is_real():
        return total.real
    return total


# ---------------------------------------------------------------------------
# rational functions and the polylogarithmic d_j


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _ptrim(a: list[Fraction]) -> tuple[Fraction, ...]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return tuple(a)


class RationalFunction:
    """``numer(t) / (1 - t)**power`` with exact rational coefficients.

    This is the only shape the polylogarithms ``Li_{-k}`` take, so the
    denominator is kept implicit.
    """

    __slots__ = ("numer", "power")

    def __init__(self, numer: Sequence, power: int):
        self.numer = _ptrim([Fraction(c) for c in numer] or [Fraction(0)])
        self.power = power

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        # cross-multiply to compare at a common power
        p = max(self.power, other.power)
        a = _pmul(self.numer, _one_minus_t_pow(p - self.power))
        b = _pmul(other.numer, _one_minus_t_pow(p - other.power))
        return _ptrim(a) == _ptrim(b)

    def __repr__(self):
        return f"RationalFunction({list(map(str, self.numer))} / (1-t)^{self.power})"

    def scale(self, c) -> "RationalFunction":
        return RationalFunction([x * Fraction(c) for x in self.numer], self.power)

    def theta_derivative(self) -> "RationalFunction":
        """Apply ``t d/dt``.

        ``t d/dt [P/(1-t)^k] = t (P'(1-t) + k P) / (1-t)^(k+1)``.
        """
        P = self.numer
        k = self.power
        dP = [i * c for i, c in enumerate(P)][1:] or [Fraction(0)]
        inner = _pmul(dP, [Fraction(1), Fraction(-1)])
        kp = [k * c for c in P]
        size = max(len(inner), len(kp))
        inner = [
            (inner[i] if i < len(inner) else 0) + (kp[i] if i < len(kp) else 0)
            for i in range(size)
        ]
        return RationalFunction([Fraction(0)] + inner, k + 1)

    def __call__(self, t):
        num = 0
        for c in reversed(self.numer):
            num = num * t + c
        den = (1 - t) ** self.power
        if isinstance(t, (int, Fraction)):
            return Fraction(num) / den
        return num / den

    def evaluate_at_root(self, m: int, a: int = 1) -> CyclotomicNumber:
        """Exact value at ``zeta_m^a``; ``m > 1`` so ``1 - zeta_m^a`` is invertible."""
        if m <= 1 or gcd(a, m) != 1:
            raise ValueError("need a primitive m-th root of unity with m > 1")
        z = CyclotomicNumber.zeta(m, a)
        num = CyclotomicNumber.rational(m, 0)
        for c in reversed(self.numer):
            num = num * z + c
        return num * ((1 - z) ** self.power).inverse()


def _one_minus_t_pow(k: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(k):
        out = _pmul(out, [Fraction(1), Fraction(-1)])
    return out


@lru_cache(maxsize=None)
def polylog_d(j: int) -> RationalFunction:
    """d_j(t) = (-1)^j / (j-1)! * (t d/dt)^(j-1) (t / (1-t)), as P_j(t)/(1-t)^j."""
    if j < 1:
        raise ValueError("polylog_d is defined for j >= 1 only")
    li = RationalFunction([0, 1], 1)  # Li_0(t) = t/(1-t)
    for _ in range(j - 1):
        li = li.theta_derivative()
    return li.scale(Fraction((-1) ** j, math.factorial(j - 1)))
