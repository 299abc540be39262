"""Group rings of (Z/f)^x and its quotients.

``unit_group(f)`` realizes Gal(Q(mu_f)/Q); the element ``sigma_a`` is labelled
by the least positive residue ``a``. Group ring elements carry their
coefficient ring explicitly (exact rationals, a cyclotomic field, ``Z/p^n`` or
complex floats) and never change it silently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .cyclotomic import CyclotomicNumber, _common_denominator, _power_table, embed_complex

__all__ = [
    "RationalField",
    "CyclotomicField",
    "ResidueRing",
    "ComplexField",
    "QQ",
    "CC",
    "FiniteAbelianGroup",
    "GroupRingElement",
    "DirichletCharacter",
    "unit_group",
    "characters",
    "idempotent",
    "parity_idempotent",
    "twist",
    "cyclotomic_character",
    "project",
    "reduce_level",
]

# ---------------------------------------------------------------------------
# coefficient rings


@dataclass(frozen=True)
class RationalField:
    tag = "ExactRational"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        return Fraction(x)


@dataclass(frozen=True)
class CyclotomicField:
    level: int
    tag = "Cyclotomic"

    def zero(self):
        return CyclotomicNumber.rational(self.level, 0)

    def one(self):
        return CyclotomicNumber.rational(self.level, 1)

    def coerce(self, x):
        if isinstance(x, CyclotomicNumber):
            if x.level != self.level:
                raise ValueError(f"level {x.level} is not {self.level}")
            return x
        return CyclotomicNumber.rational(self.level, x)


@dataclass(frozen=True)
class ResidueRing:
    """``Z/p^n``; ``n`` is the working precision."""

    p: int
    n: int
    tag = "ResidueModPN"

    @property
    def modulus(self) -> int:
        return self.p**self.n

    def zero(self):
        return 0

    def one(self):
        return 1 % self.modulus

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValueError(f"{x} is not {self.p}-integral")
            return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
        return int(x) % self.modulus


@dataclass(frozen=True)
class ComplexField:
    tag = "ComplexFloat"

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def coerce(self, x):
        if isinstance(x, CyclotomicNumber):
            return embed_complex(x, 1)
        return complex(x)


QQ = RationalField()
CC = ComplexField()

# ---------------------------------------------------------------------------
# groups


class FiniteAbelianGroup:
    """A finite abelian group given by labels and a multiplication table.

    ``lookup`` maps every residue mod ``modulus`` that represents an element
    to its index; for a quotient group several residues share an index.
    """

    def __init__(self, modulus: int, labels, lookup: Mapping[int, int], name: str):
        self.modulus = modulus
        self.labels = tuple(labels)
        self.lookup = dict(lookup)
        self.name = name
        self.order = len(self.labels)
        k = self.order
        table = np.empty((k, k), dtype=np.int64)
        for i, a in enumerate(self.labels):
            for j, b in enumerate(self.labels):
                table[i, j] = self.lookup[(a * b) % modulus]
        self.table = table
        self.identity = self.lookup[1 % modulus]
        inv = np.empty(k, dtype=np.int64)
        for i in range(k):
            inv[i] = int(np.flatnonzero(table[i] == self.identity)[0])
        self.inverse = inv
        self.key = (modulus, frozenset(frozenset(r for r, t in self.lookup.items() if t == i) for i in range(k)))
        self.gens, self.orders = _decompose(self)
        self._dlog = _discrete_logs(self)

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        dec = " x ".join(f"C{n}" for n in self.orders) or "1"
        return f"<{self.name}: order {self.order} = {dec}>"

    def __len__(self):
        return self.order

    def index(self, a: int) -> int:
        try:
            return self.lookup[a % self.modulus]
        except KeyError:
            raise ValueError(f"{a} does not represent an element of {self.name}") from None

    def mul(self, a: int, b: int) -> int:
        """Label of sigma_a * sigma_b."""
        return self.labels[self.table[self.index(a), self.index(b)]]

    def inv(self, a: int) -> int:
        return self.labels[self.inverse[self.index(a)]]

    def element_order(self, a: int) -> int:
        i = self.index(a)
        k, cur = 1, i
        while cur != self.identity:
            cur = self.table[cur, i]
            k += 1
        return k

    @property
    def exponent(self) -> int:
        e = 1
        for n in self.orders:
            e = e * n // gcd(e, n)
        return e

    @property
    def conjugation(self) -> int:
        """Label of complex conjugation sigma_{f-1}."""
        if self.modulus <= 2:
            raise ValueError("no complex conjugation: modulus must exceed 2")
        return self.labels[self.index(self.modulus - 1)]

    def dlog(self, a: int) -> tuple[int, ...]:
        """Exponent vector of sigma_a on the cyclic generators."""
        return self._dlog[self.index(a)]

    def subgroup(self, generators: Iterable[int]) -> frozenset[int]:
        """Labels of the subgroup generated by ``generators``."""
        members = {self.identity}
        frontier = [self.identity]
        gens = [self.index(g) for g in generators]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = int(self.table[cur, g])
                if nxt not in members:
                    members.add(nxt)
                    frontier.append(nxt)
        return frozenset(self.labels[i] for i in members)

    def quotient(self, H: Iterable[int]) -> "FiniteAbelianGroup":
        H = self.subgroup(H)
        h_idx = [self.index(h) for h in H]
        coset_of: dict[int, int] = {}
        reps: list[int] = []
        for i, a in enumerate(self.labels):
            if i in coset_of:
                continue
            coset = {int(self.table[i, h]) for h in h_idx}
            rep = min(self.labels[c] for c in coset)
            reps.append(rep)
            for c in coset:
                coset_of[c] = len(reps) - 1
        order = sorted(range(len(reps)), key=lambda t: reps[t])
        rank = {old: new for new, old in enumerate(order)}
        lookup = {r: rank[coset_of[self.lookup[r]]] for r in self.lookup}
        return FiniteAbelianGroup(
            self.modulus,
            [reps[t] for t in order],
            lookup,
            f"{self.name}/<{','.join(map(str, sorted(H)))}>",
        )


def _decompose(G: FiniteAbelianGroup) -> tuple[tuple[int, ...], tuple[int, ...]]:
    # Greedy: an element of maximal order in G/<chosen> with the same order
    # in G spans a direct summand complementary to <chosen>.
    chosen: list[int] = []
    orders: list[int] = []
    sub = {G.identity}
    k = G.order
    while len(sub) < k:
        best, best_q = None, 0
        for i in range(k):
            q, cur = 1, i
            while cur not in sub:
                cur = int(G.table[cur, i])
                q += 1
            if q > best_q:
                # actual order must equal the quotient order
                o, c2 = 1, i
                while c2 != G.identity:
                    c2 = int(G.table[c2, i])
                    o += 1
                if o == q:
                    best, best_q = i, q
        assert best is not None
        chosen.append(best)
        orders.append(best_q)
        new = set()
        cur = G.identity
        for _ in range(best_q):
            for s in sub:
                new.add(int(G.table[s, cur]))
            cur = int(G.table[cur, best])
        sub = new
    return tuple(G.labels[i] for i in chosen), tuple(orders)


def _discrete_logs(G: FiniteAbelianGroup) -> tuple[tuple[int, ...], ...]:
    logs: list = [None] * G.order
    gens = [G.index(g) for g in G.gens]
    for vec in itertools.product(*(range(n) for n in G.orders)):
        cur = G.identity
        for g, e in zip(gens, vec):
            for _ in range(e):
                cur = int(G.table[cur, g])
        logs[cur] = vec
    assert all(v is not None for v in logs)
    return tuple(logs)


@lru_cache(maxsize=None)
def unit_group(f: int) -> FiniteAbelianGroup:
    """(Z/f)^x with sigma_a labelled by the least positive residue a."""
    if f < 1:
        raise ValueError("unit_group needs f >= 1")
    labels = [a for a in range(1, f + 1) if gcd(a, f) == 1]
    lookup = {a % f: i for i, a in enumerate(labels)}
    return FiniteAbelianGroup(f, labels, lookup, f"(Z/{f})^x")


# ---------------------------------------------------------------------------
# group ring elements


class GroupRingElement:
    """``sum_sigma coeffs[sigma] * sigma`` in ``ring[group]``.

    Coefficients are a tuple indexed like ``group.labels``; over ``Z/p^n`` they
    are a read-only ``int64`` array so products go through the compiled kernel.
    """

    __slots__ = ("group", "ring", "coeffs")

    def __init__(self, group: FiniteAbelianGroup, ring, coeffs):
        self.group = group
        self.ring = ring
        if isinstance(ring, ResidueRing):
            arr = np.array([ring.coerce(c) for c in coeffs], dtype=np.int64)
            arr.setflags(write=False)
            self.coeffs = arr
        else:
            self.coeffs = tuple(ring.coerce(c) for c in coeffs)
        if len(self.coeffs) != group.order:
            raise ValueError("coefficient vector does not match the group order")

    @classmethod
    def _wrap(cls, group, ring, coeffs):
        obj = cls.__new__(cls)
        obj.group = group
        obj.ring = ring
        if isinstance(coeffs, np.ndarray):
            coeffs.setflags(write=False)
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, group, ring=QQ):
        return cls(group, ring, [ring.zero()] * group.order)

    @classmethod
    def one(cls, group, ring=QQ):
        return cls.basis(group, 1, ring)

    @classmethod
    def basis(cls, group, label: int, ring=QQ):
        """The group element sigma_label itself."""
        coeffs = [ring.zero()] * group.order
        coeffs[group.index(label)] = ring.one()
        return cls(group, ring, coeffs)

    @classmethod
    def from_dict(cls, group, data: Mapping[int, object], ring=QQ):
        coeffs = [ring.zero()] * group.order
        for label, c in data.items():
            i = group.index(label)
            coeffs[i] = coeffs[i] + ring.coerce(c)
        return cls(group, ring, coeffs)

    @classmethod
    def random(cls, group, ring, rng, bound: int = 5):
        """Random element; integer coefficients in ``[-bound, bound]`` (or all residues)."""
        if isinstance(ring, ResidueRing):
            vals = rng.integers(0, ring.modulus, size=group.order)
        else:
            vals = rng.integers(-bound, bound + 1, size=group.order)
        return cls(group, ring, [int(v) for v in vals])

    # -- helpers
    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            return False
        if other.group != self.group or other.ring != self.ring:
            raise ValueError(
                f"mismatched group rings: {self.ring.tag}[{self.group.name}] vs "
                f"{other.ring.tag}[{other.group.name}]"
            )
        return True

    @property
    def is_residue(self) -> bool:
        return isinstance(self.ring, ResidueRing)

    def coeff(self, label: int):
        c = self.coeffs[self.group.index(label)]
        return int(c) if self.is_residue else c

    def items(self):
        for a, c in zip(self.group.labels, self.coeffs):
            yield a, (int(c) if self.is_residue else c)

    def to_dict(self) -> dict:
        return {a: c for a, c in self.items() if c}

    # -- ring operations
    def __add__(self, other):
        if not isinstance(other, GroupRingElement):
            other = self.one(self.group, self.ring) * other
        self._check(other)
        if self.is_residue:
            return self._wrap(self.group, self.ring, (self.coeffs + other.coeffs) % self.ring.modulus)
        return self._wrap(self.group, self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        if self.is_residue:
            return self._wrap(self.group, self.ring, (-self.coeffs) % self.ring.modulus)
        return self._wrap(self.group, self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GroupRingElement):
            return self.scale(other)
        self._check(other)
        if self.is_residue:
            out = kernels.gr_mul_mod(self.coeffs, other.coeffs, self.group.table, self.ring.modulus)
            return self._wrap(self.group, self.ring, out)
        if isinstance(self.ring, CyclotomicField):
            return self._wrap(self.group, self.ring, _cyclotomic_product(self.coeffs, other.coeffs, self.group.table, self.ring.level))
        table = self.group.table
        out = [self.ring.zero()] * self.group.order
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            row = table[i]
            for j, b in enumerate(other.coeffs):
                if b:
                    t = row[j]
                    out[t] = out[t] + a * b
        return self._wrap(self.group, self.ring, tuple(out))

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if self.is_residue:
            c = self.ring.coerce(c)
            return self._wrap(self.group, self.ring, (self.coeffs * c) % self.ring.modulus)
        return self._wrap(self.group, self.ring, tuple(a * c for a in self.coeffs))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = self.one(self.group, self.ring)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        if other.group != self.group or other.ring != self.ring:
            return False
        if self.is_residue:
            return bool(np.array_equal(self.coeffs, other.coeffs))
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_residue:
            return hash((self.group, self.ring, self.coeffs.tobytes()))
        return hash((self.group, self.ring, self.coeffs))

    def is_zero(self) -> bool:
        return not any(bool(c) for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        terms = [f"({c})*s{a}" for a, c in self.items() if c]
        return f"[{self.ring.tag}] " + (" + ".join(terms) or "0")

    # -- structure maps
    def augmentation(self):
        """Sum of the coefficients."""
        if self.is_residue:
            return int(self.coeffs.sum() % self.ring.modulus)
        total = self.ring.zero()
        for c in self.coeffs:
            total = total + c
        return total

    def act(self, label: int) -> "GroupRingElement":
        """sigma_label * self (a permutation of the coefficients)."""
        g = self.group.index(label)
        perm = self.group.table[g]
        if self.is_residue:
            out = np.zeros_like(self.coeffs)
            out[perm] = self.coeffs
            return self._wrap(self.group, self.ring, out)
        out = [None] * self.group.order
        for i, c in enumerate(self.coeffs):
            out[perm[i]] = c
        return self._wrap(self.group, self.ring, tuple(out))

    def involution(self) -> "GroupRingElement":
        """The ring map sigma -> sigma^{-1}."""
        inv = self.group.inverse
        if self.is_residue:
            out = np.zeros_like(self.coeffs)
            out[inv] = self.coeffs
            return self._wrap(self.group, self.ring, out)
        out = [None] * self.group.order
        for i, c in enumerate(self.coeffs):
            out[inv[i]] = c
        return self._wrap(self.group, self.ring, tuple(out))

    def change_ring(self, ring, convert=None) -> "GroupRingElement":
        convert = convert or ring.coerce
        vals = [convert(int(c) if self.is_residue else c) for c in self.coeffs]
        return GroupRingElement(self.group, ring, vals)


def _cyclotomic_product(xs, ys, table, level: int) -> tuple:
    """Group ring product over Q(zeta_level) on integer numerator arrays.

    All pairwise polynomial products are formed at once, scattered along the
    group table, and reduced mod Phi_level in a single pass.
    """
    k = len(xs)
    dx, ax = _common_denominator([c for z in xs for c in z.coeffs])
    dy, ay = _common_denominator([c for z in ys for c in z.coeffs])
    deg = len(xs[0].coeffs)
    bound = max(map(abs, ax), default=0) * max(map(abs, ay), default=0) * deg * k
    dtype = np.int64 if bound < 2**62 else object
    A = np.array(ax, dtype=dtype).reshape(k, deg)
    B = np.array(ay, dtype=dtype).reshape(k, deg)
    pair = A[:, None, :, None] * B[None, :, None, :]
    conv = np.zeros((k, k, 2 * deg - 1), dtype=dtype)
    for i in range(deg):
        conv[:, :, i:i + deg] += pair[:, :, i, :]
    acc = np.zeros((k, 2 * deg - 1), dtype=dtype)
    np.add.at(acc, table.ravel(), conv.reshape(k * k, 2 * deg - 1))
    pt = _power_table(level)
    red = np.array([pt[e % level] for e in range(deg, 2 * deg - 1)], dtype=dtype).reshape(deg - 1, deg)
    out = acc[:, :deg] + (acc[:, deg:] @ red if deg > 1 else 0)
    den = dx * dy
    return tuple(
        CyclotomicNumber._raw(level, tuple(Fraction(int(v), den) for v in row)) for row in out
    )


# ---------------------------------------------------------------------------
# characters


class DirichletCharacter:
    """A character of ``group`` with values ``zeta_level ** logs[i]``.

    ``level`` is a multiple of the character's order; all characters produced
    by :func:`characters` on one group share the group exponent as level.
    """

    __slots__ = ("group", "logs", "level")

    def __init__(self, group: FiniteAbelianGroup, logs, level: int):
        self.group = group
        self.level = level
        self.logs = tuple(int(v) % level for v in logs)

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @property
    def order(self) -> int:
        o = 1
        for v in self.logs:
            k = self.level // gcd(self.level, v)
            o = o * k // gcd(o, k)
        return o

    def log(self, a: int) -> int | None:
        if gcd(a, self.modulus) != 1:
            return None
        return self.logs[self.group.index(a)]

    def value(self, a: int) -> CyclotomicNumber:
        k = self.log(a)
        if k is None:
            return CyclotomicNumber.rational(self.level, 0)
        return CyclotomicNumber.zeta(self.level, k)

    def __call__(self, a: int) -> CyclotomicNumber:
        return self.value(a)

    def is_trivial(self) -> bool:
        return not any(self.logs)

    def is_real(self) -> bool:
        return all((2 * v) % self.level == 0 for v in self.logs)

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        if self.modulus <= 2:
            return 1
        v = self.log(self.modulus - 1)
        return 1 if v == 0 else -1

    def is_even(self) -> bool:
        return self.parity() == 1

    def is_odd(self) -> bool:
        return self.parity() == -1

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.group, [-v for v in self.logs], self.level)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.group != self.group or other.level != self.level:
            raise ValueError("characters live on different groups")
        return DirichletCharacter(self.group, [a + b for a, b in zip(self.logs, other.logs)], self.level)

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.group == other.group and self.level == other.level and self.logs == other.logs

    def __hash__(self):
        return hash((self.group, self.level, self.logs))

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, order {self.order}, logs={self.logs}/{self.level})"

    def conductor(self) -> int:
        f = self.modulus
        for d in range(1, f + 1):
            if f % d:
                continue
            if all(self.logs[i] == 0 for i, a in enumerate(self.group.labels) if a % d == 1 % d):
                return d
        return f

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def primitive(self) -> "DirichletCharacter":
        """The character of conductor modulus inducing this one."""
        d = self.conductor()
        if d == self.modulus:
            return self
        H = unit_group(d)
        logs = []
        for b in H.labels:
            a = next(a for a in self.group.labels if a % d == b % d)
            logs.append(self.logs[self.group.index(a)])
        return DirichletCharacter(H, logs, self.level)


@lru_cache(maxsize=None)
def _characters_cached(group: FiniteAbelianGroup) -> tuple[DirichletCharacter, ...]:
    E = group.exponent
    out = []
    for kvec in itertools.product(*(range(n) for n in group.orders)):
        logs = []
        for i in range(group.order):
            e = group._dlog[i]
            logs.append(sum(k * x * (E // n) for k, x, n in zip(kvec, e, group.orders)))
        out.append(DirichletCharacter(group, logs, E))
    return tuple(out)


def characters(G: FiniteAbelianGroup) -> list[DirichletCharacter]:
    """All characters of ``G``, ordered lexicographically by exponent vector."""
    return list(_characters_cached(G))


def idempotent(chi: DirichletCharacter) -> GroupRingElement:
    """e_chi = (1/#G) sum_sigma chi(sigma) sigma^{-1}, over Q(zeta_level)."""
    G = chi.group
    ring = CyclotomicField(chi.level)
    coeffs = [None] * G.order
    for i, a in enumerate(G.labels):
        coeffs[G.inverse[i]] = CyclotomicNumber.zeta(chi.level, chi.logs[i]) / G.order
    return GroupRingElement(G, ring, coeffs)


def parity_idempotent(G: FiniteAbelianGroup, j: int, sign: int = -1, ring=QQ) -> GroupRingElement:
    """e_j^{sign} = (1 + sign * (-1)^j c) / 2.

    ``sign=-1`` gives the minus idempotent used throughout the congruence
    checks. Over ``Z/p^n`` the factor 1/2 is the inverse of 2, so p is odd.
    """
    if G.modulus <= 2:
        raise ValueError("no complex conjugation: modulus must exceed 2")
    eps = sign * (-1) ** (j % 2)
    half = Fraction(1, 2)
    one = GroupRingElement.one(G, ring).scale(ring.coerce(half))
    return one + GroupRingElement.basis(G, G.conjugation, ring).scale(ring.coerce(eps * half))


def cyclotomic_character(G: FiniteAbelianGroup, p: int, n: int) -> np.ndarray:
    """chi_cyc(sigma) mod p^n for every element of ``G`` (index order)."""
    N = p**n
    if G.modulus % N:
        raise ValueError(f"cyclotomic character undefined at this level: {N} does not divide {G.modulus}")
    vals = np.zeros(G.order, dtype=np.int64)
    seen: dict[int, int] = {}
    for r, i in G.lookup.items():
        v = r % N
        if seen.setdefault(i, v) != v:
            raise ValueError("cyclotomic character is not defined on this quotient")
        vals[i] = v
    return vals


def twist(a: int, x: GroupRingElement) -> GroupRingElement:
    """tw_a: sigma -> chi_cyc(sigma)^a sigma on Z/p^n[G]."""
    if not x.is_residue:
        raise ValueError("twist acts on Z/p^n[G] only")
    p, n = x.ring.p, x.ring.n
    N = p**n
    cyc = cyclotomic_character(x.group, p, n)
    factors = np.array([_cyc_power(int(c), a, N) for c in cyc], dtype=np.int64)
    return GroupRingElement._wrap(x.group, x.ring, (x.coeffs * factors) % N)


def _cyc_power(b: int, a: int, N: int) -> int:
    return pow(b, a, N)


def project(x: GroupRingElement, H: Iterable[int]) -> GroupRingElement:
    """pi_H: ring[G] -> ring[G/H], summing coefficients along cosets."""
    Q = x.group.quotient(H)
    coeffs = [x.ring.zero()] * Q.order
    for a, c in zip(x.group.labels, x.coeffs):
        t = Q.index(a)
        coeffs[t] = coeffs[t] + (int(c) if x.is_residue else c)
    return GroupRingElement(Q, x.ring, coeffs)


def reduce_level(x: GroupRingElement, f: int) -> GroupRingElement:
    """Image under Gal(Q(mu_f')/Q) -> Gal(Q(mu_f)/Q) for f | f'."""
    src = x.group
    if src.modulus % f:
        raise ValueError(f"{f} does not divide {src.modulus}")
    G = unit_group(f)
    coeffs = [x.ring.zero()] * G.order
    for a, c in zip(src.labels, x.coeffs):
        t = G.index(a % f)
        coeffs[t] = coeffs[t] + (int(c) if x.is_residue else c)
    return GroupRingElement(G, x.ring, coeffs)
