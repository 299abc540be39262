"""Module algebra over R = Z/p^n[G].

Ideals of R are stored through their underlying ``Z/p^n``-module: the
``G``-translates of the generators are row-reduced to Howell normal form,
which is canonical, so equality of ideals is equality of arrays. Fitting
ideals come from minors of presentation matrices, and exterior powers of
based free modules are handled in coordinates indexed by sorted subsets.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .gring import (
    FiniteAbelianGroup,
    GroupRingElement,
    ResidueRing,
    parity_idempotent,
    project,
    unit_group,
)
from .lfunctions import delta_T, is_prime
from .report import FAILED, SKIPPED, VERIFIED, CongruenceReport

__all__ = [
    "FGIdeal",
    "ideal_equal",
    "ideal_contains",
    "PresentedModule",
    "determinant",
    "fitting_ideal",
    "random_invertible",
    "ExteriorVector",
    "DualExteriorVector",
    "subsets",
    "shuffle_sign",
    "wedge",
    "wedge_product",
    "wedge_pair",
    "bidual_membership",
    "FreeModule",
    "norm_map",
    "lemma33_check",
    "conj35_rank0_check",
]

# ---------------------------------------------------------------------------
# ideals


class FGIdeal:
    """The ideal of ``ring[group]`` generated by ``generators``."""

    def __init__(self, group: FiniteAbelianGroup, ring: ResidueRing, generators: Iterable[GroupRingElement] = ()):
        if not isinstance(ring, ResidueRing):
            raise ValueError("ideals are supported over Z/p^n only")
        self.group = group
        self.ring = ring
        self.generators = tuple(generators)
        for g in self.generators:
            if g.group != group or g.ring != ring:
                raise ValueError("generator lives in a different ring")
        self._basis: np.ndarray | None = None

    @classmethod
    def unit(cls, group, ring):
        return cls(group, ring, [GroupRingElement.one(group, ring)])

    @classmethod
    def zero(cls, group, ring):
        return cls(group, ring, [])

    @property
    def basis(self) -> np.ndarray:
        """Howell form of the Z/p^n-span of {sigma * g}."""
        if self._basis is None:
            k = self.group.order
            rows = [g.act(s).coeffs for g in self.generators if not g.is_zero() for s in self.group.labels]
            if rows:
                A = np.array(rows, dtype=np.int64)
                self._basis = kernels.howell_form(A, self.ring.p, self.ring.modulus)
            else:
                self._basis = np.zeros((0, k), dtype=np.int64)
            self._basis.setflags(write=False)
        return self._basis

    def _same_ring(self, other: "FGIdeal") -> None:
        if other.group != self.group or other.ring != self.ring:
            raise ValueError("ideals live in different rings")

    def __eq__(self, other):
        if not isinstance(other, FGIdeal):
            return NotImplemented
        self._same_ring(other)
        return self.basis.shape == other.basis.shape and bool(np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.group, self.ring, self.basis.tobytes()))

    def contains(self, x: GroupRingElement) -> bool:
        if x.group != self.group or x.ring != self.ring:
            raise ValueError("element lives in a different ring")
        if self.basis.shape[0] == 0:
            return x.is_zero()
        r = kernels.howell_reduce(self.basis, np.asarray(x.coeffs, dtype=np.int64), self.ring.modulus)
        return not np.any(r)

    def residue(self, x: GroupRingElement) -> GroupRingElement:
        """``x`` reduced against the canonical basis; zero iff ``x`` is a member."""
        if self.basis.shape[0] == 0:
            return x
        r = kernels.howell_reduce(self.basis, np.asarray(x.coeffs, dtype=np.int64), self.ring.modulus)
        return GroupRingElement(self.group, self.ring, [int(v) for v in r])

    def issubset(self, other: "FGIdeal") -> bool:
        self._same_ring(other)
        return all(other.contains(g) for g in self.generators)

    def __mul__(self, x: GroupRingElement) -> "FGIdeal":
        return FGIdeal(self.group, self.ring, [g * x for g in self.generators])

    __rmul__ = __mul__

    def size(self) -> int:
        """Number of elements; each Howell row contributes p^n / pivot."""
        N = self.ring.modulus
        total = 1
        for row in self.basis:
            pivot = int(row[np.flatnonzero(row)[0]])
            total *= N // pivot
        return total

    def __repr__(self):
        return f"FGIdeal({self.ring.tag}[{self.group.name}], {len(self.generators)} generators, size {self.size()})"


def ideal_equal(I: FGIdeal, J: FGIdeal) -> bool:
    return I == J


def ideal_contains(I: FGIdeal, x: GroupRingElement) -> bool:
    return I.contains(x)


# ---------------------------------------------------------------------------
# presentations, determinants, Fitting ideals


def determinant(rows: Sequence[Sequence], one, zero):
    """Determinant over a commutative ring by Laplace expansion over column subsets.

    ``dp[mask]`` is the signed sum of products picking the first
    ``popcount(mask)`` rows from the columns in ``mask``; O(2^c c) products.
    """
    c = len(rows)
    if c == 0:
        return one
    dp = {0: one}
    for i in range(c):
        nxt: dict[int, object] = {}
        for mask, val in dp.items():
            for col in range(c):
                if mask >> col & 1:
                    continue
                entry = rows[i][col]
                if not entry:
                    continue
                # sign: number of chosen columns to the right of col
                above = bin(mask >> (col + 1)).count("1")
                term = val * entry
                if above % 2:
                    term = -term
                key = mask | (1 << col)
                nxt[key] = nxt[key] + term if key in nxt else term
        dp = nxt
    return dp.get((1 << c) - 1, zero)


@dataclass(frozen=True)
class PresentedModule:
    """coker(R^rows -> R^ncols) for a relation matrix with entries in R = ring[group]."""

    group: FiniteAbelianGroup
    ring: ResidueRing
    relations: tuple[tuple[GroupRingElement, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, group, ring, rows, ncols: int | None = None) -> "PresentedModule":
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged relation matrix")
        return cls(group, ring, rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.relations)

    def direct_sum(self, other: "PresentedModule") -> "PresentedModule":
        zero = GroupRingElement.zero(self.group, self.ring)
        rows = [r + (zero,) * other.ncols for r in self.relations]
        rows += [(zero,) * self.ncols + r for r in other.relations]
        return PresentedModule(self.group, self.ring, tuple(rows), self.ncols + other.ncols)

    def plus_free(self, rank: int = 1) -> "PresentedModule":
        """M + R^rank: extra generators with no relations."""
        return self.direct_sum(PresentedModule(self.group, self.ring, (), rank))

    def transformed(self, U, V) -> "PresentedModule":
        """Relations U A V; isomorphic module when U and V are invertible."""
        A = [list(r) for r in self.relations]
        return PresentedModule.from_rows(self.group, self.ring, _matmul(_matmul(U, A), V), self.ncols)


def _matmul(A, B):
    if not A or not B:
        return [[] for _ in A]
    inner = len(B)
    return [[_dot([A[i][t] for t in range(inner)], [B[t][j] for t in range(inner)]) for j in range(len(B[0]))] for i in range(len(A))]


def _dot(xs, ys):
    total = xs[0] * ys[0]
    for x, y in zip(xs[1:], ys[1:]):
        total = total + x * y
    return total


def minors(rows, size: int, one, zero):
    """All size x size minors of a matrix, in lexicographic (row set, column set) order."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    out = []
    for I in itertools.combinations(range(nr), size):
        for J in itertools.combinations(range(nc), size):
            out.append(determinant([[rows[i][j] for j in J] for i in I], one, zero))
    return out


def fitting_ideal(M: PresentedModule, i: int = 0) -> FGIdeal:
    """Fitt^i(M): the ideal of (ncols - i)-minors of the relation matrix.

    Minor size <= 0 gives the unit ideal; size larger than the number of
    relations gives the zero ideal.
    """
    if i < 0:
        raise ValueError("Fitting index must be non-negative")
    size = M.ncols - i
    if size <= 0:
        return FGIdeal.unit(M.group, M.ring)
    if size > M.nrows:
        return FGIdeal.zero(M.group, M.ring)
    one = GroupRingElement.one(M.group, M.ring)
    zero = GroupRingElement.zero(M.group, M.ring)
    return FGIdeal(M.group, M.ring, minors(M.relations, size, one, zero))


def random_invertible(group, ring, size: int, rng, unitriangular: bool = False):
    """A random invertible matrix over ring[group].

    Product of a permutation, a unit-lower and a unit-upper triangular matrix
    with random off-diagonal entries, and (unless ``unitriangular``) a
    diagonal of group elements.
    """
    one = GroupRingElement.one(group, ring)
    zero = GroupRingElement.zero(group, ring)
    L = [[one if a == b else (GroupRingElement.random(group, ring, rng) if a > b else zero) for b in range(size)] for a in range(size)]
    U = [[one if a == b else (GroupRingElement.random(group, ring, rng) if a < b else zero) for b in range(size)] for a in range(size)]
    out = _matmul(L, U)
    if not unitriangular:
        perm = rng.permutation(size)
        out = [out[int(t)] for t in perm]
        for a in range(size):
            g = group.labels[int(rng.integers(group.order))]
            out[a] = [x.act(g) for x in out[a]]
    return out


# ---------------------------------------------------------------------------
# exterior powers of based free modules


def subsets(d: int, r: int) -> list[tuple[int, ...]]:
    """Size-r subsets of range(d) in lexicographic order."""
    return list(itertools.combinations(range(d), r))


def shuffle_sign(first: Sequence[int], rest: Sequence[int]) -> int:
    """Sign of the permutation listing ``first`` then ``rest`` (both sorted)."""
    inv = sum(1 for a in first for b in rest if a > b)
    return -1 if inv % 2 else 1


class ExteriorVector:
    """An element of the r-th exterior power of a rank-d based free module.

    ``coords`` is aligned with ``subsets(d, r)``. Coefficients may be any
    commutative ring elements (fractions, residues, group ring elements);
    ``zero`` supplies the additive identity of that ring.
    """

    __slots__ = ("d", "r", "coords", "zero")

    def __init__(self, d: int, r: int, coords: Sequence, zero=0):
        if not 0 <= r <= d:
            raise ValueError("degree must lie in [0, rank]")
        coords = tuple(coords)
        if len(coords) != len(subsets(d, r)):
            raise ValueError("coordinate count does not match C(d, r)")
        self.d, self.r, self.coords, self.zero = d, r, coords, zero

    @classmethod
    def basis(cls, d: int, J: Sequence[int], one=1, zero=0):
        J = tuple(sorted(J))
        return cls(d, len(J), [one if K == J else zero for K in subsets(d, len(J))], zero)

    @classmethod
    def vector(cls, coords: Sequence, zero=0):
        """Degree-1 element with the given coordinates on b_1..b_d."""
        return cls(len(coords), 1, coords, zero)

    def coord(self, J: Sequence[int]):
        return dict(zip(subsets(self.d, self.r), self.coords))[tuple(sorted(J))]

    def items(self):
        return zip(subsets(self.d, self.r), self.coords)

    def _compat(self, other):
        if type(other) is not type(self) or other.d != self.d or other.r != self.r:
            raise ValueError("exterior vectors of different shape")

    def __add__(self, other):
        self._compat(other)
        return type(self)(self.d, self.r, [a + b for a, b in zip(self.coords, other.coords)], self.zero)

    def __sub__(self, other):
        self._compat(other)
        return type(self)(self.d, self.r, [a - b for a, b in zip(self.coords, other.coords)], self.zero)

    def __neg__(self):
        return type(self)(self.d, self.r, [-a for a in self.coords], self.zero)

    def scale(self, c):
        return type(self)(self.d, self.r, [c * a for a in self.coords], self.zero)

    def map_coords(self, fn: Callable, zero=None):
        return type(self)(self.d, self.r, [fn(a) for a in self.coords], self.zero if zero is None else zero)

    def is_zero(self) -> bool:
        return not any(bool(a) for a in self.coords)

    def __eq__(self, other):
        if not isinstance(other, ExteriorVector):
            return NotImplemented
        return type(other) is type(self) and (self.d, self.r, self.coords) == (other.d, other.r, other.coords)

    def __hash__(self):
        return hash((type(self).__name__, self.d, self.r, self.coords))

    def __repr__(self):
        terms = [f"({c})b{''.join(str(i + 1) for i in J)}" for J, c in self.items() if c]
        return f"{type(self).__name__}[{self.r}/{self.d}](" + (" + ".join(terms) or "0") + ")"


class DualExteriorVector(ExteriorVector):
    """An element of the r-th exterior power of the dual module, on the dual basis."""

    __slots__ = ()


def wedge_product(u: ExteriorVector, v: ExteriorVector) -> ExteriorVector:
    """u ^ v; (u ^ v)_K = sum over I + J = K of sgn(I, J) u_I v_J."""
    if type(u) is not type(v) or u.d != v.d:
        raise ValueError("wedge of vectors on different modules")
    if u.r + v.r > u.d:
        raise ValueError(f"degree {u.r + v.r} exceeds rank {u.d}")
    ui, vi = dict(u.items()), dict(v.items())
    out = []
    for K in subsets(u.d, u.r + v.r):
        total = u.zero
        for I in itertools.combinations(K, u.r):
            J = tuple(x for x in K if x not in I)
            a, b = ui[I], vi[J]
            if a and b:
                term = a * b
                total = total + term if shuffle_sign(I, J) > 0 else total - term
        out.append(total)
    return type(u)(u.d, u.r + v.r, out, u.zero)


def wedge(vectors: Sequence[ExteriorVector]) -> ExteriorVector:
    """a_1 ^ ... ^ a_s for degree-1 vectors; coordinates are the s x s minors."""
    if not vectors:
        raise ValueError("empty wedge")
    out = vectors[0]
    for v in vectors[1:]:
        out = wedge_product(out, v)
    return out


def wedge_pair(a: ExteriorVector, phi: ExteriorVector) -> ExteriorVector:
    """Phi(a) for Phi of degree r and a of degree s >= r; result has degree s - r.

    On basis elements b*_I(b_J) = sgn * b_{J minus I} when I is contained in
    J, where sgn is the sign of the shuffle listing I before J minus I, and
    zero otherwise. For r = s this is det(phi_i(a_j)).
    """
    if isinstance(a, DualExteriorVector) or not isinstance(phi, DualExteriorVector):
        raise ValueError("wedge_pair takes (ExteriorVector, DualExteriorVector)")
    if a.d != phi.d:
        raise ValueError("vectors live on different modules")
    if phi.r > a.r:
        raise ValueError(f"degree mismatch: cannot pair degree {phi.r} with degree {a.r}")
    out_deg = a.r - phi.r
    index = {K: t for t, K in enumerate(subsets(a.d, out_deg))}
    out = [a.zero] * len(index)
    phis = [(I, c) for I, c in phi.items() if c]
    for J, aj in a.items():
        if not aj:
            continue
        Jset = set(J)
        for I, c in phis:
            if not Jset.issuperset(I):
                continue
            rest = tuple(x for x in J if x not in I)
            term = c * aj
            t = index[rest]
            out[t] = out[t] + term if shuffle_sign(I, rest) > 0 else out[t] - term
    return ExteriorVector(a.d, out_deg, out, a.zero)


# ---------------------------------------------------------------------------
# biduals of free lattices


def _rational_inverse(B: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(B)
    M = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(B)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ValueError("unsupported lattice: basis matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                t = M[r][c]
                M[r] = [x - t * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _is_p_integral(x, p: int) -> bool:
    if isinstance(x, GroupRingElement):
        return all(_is_p_integral(c, p) for _, c in x.items())
    return Fraction(x).denominator % p != 0


def bidual_membership(a: ExteriorVector, p: int, lattice_basis: Sequence[Sequence] | None = None) -> bool:
    """Whether ``a`` lies in the r-th exterior bidual of the lattice M.

    ``a`` has rational coordinates (fractions or rational group ring
    elements) on the ambient basis e_1..e_d. M is spanned by the rows of
    ``lattice_basis`` (default: the e_i themselves) and must be free of full
    rank d. For a free lattice the bidual is the lattice of integral
    coordinates, so membership means: every Phi = m*_J has Phi(a)
    p-integral, where m*_J runs over dual-basis wedges of M.
    """
    d = a.d
    if lattice_basis is None:
        coords = list(a.coords)
    else:
        B = [list(map(Fraction, row)) for row in lattice_basis]
        if len(B) != d or any(len(row) != d for row in B):
            raise ValueError("unsupported lattice: need a square basis of full rank")
        Binv = _rational_inverse(B)
        coords = []
        for J in subsets(d, a.r):
            total = a.zero
            for K, aK in a.items():
                if not aK:
                    continue
                m = determinant([[Binv[k][j] for j in J] for k in K], Fraction(1), Fraction(0))
                if m:
                    total = total + aK * m if not isinstance(aK, GroupRingElement) else total + aK.scale(m)
            coords.append(total)
    return all(_is_p_integral(c, p) for c in coords)


# ---------------------------------------------------------------------------
# norm maps and Lemma-3.3-style compatibility


@dataclass(frozen=True)
class FreeModule:
    """R^rank with basis b_1..b_rank over R = ring[group]."""

    group: FiniteAbelianGroup
    ring: ResidueRing
    rank: int


def _subgroup(G: FiniteAbelianGroup, H) -> frozenset[int]:
    return G.subgroup(H)


def norm_map(a: ExteriorVector, H: Iterable[int]) -> ExteriorVector:
    """Image of ``a`` under the map induced by m -> sum_{h in H} h m.

    ``a`` has group-ring coordinates on b_J. The fixed module M^H is free
    over R[G/H] on N_H b_1, ..., N_H b_d, and N_H(x b) = pi_H(x) N_H b, so the
    result has coordinates pi_H(a_J) on the wedges of that basis.
    """
    H = list(H)
    return a.map_coords(lambda x: project(x, H), zero=project(a.zero, H))


_LEMMA33_LIMITS = {"group": 8, "n": 2, "rank": 3, "degree": 2}


def _value_ideal(M_group, ring, a: ExteriorVector, basis_change) -> FGIdeal:
    """Ideal generated by Phi_I(a) for the wedges Phi_I of a dual basis.

    ``basis_change`` has rows phi_i in coordinates on the standard dual basis;
    Phi_I(a) = sum_K det(basis_change[I, K]) a_K by Cauchy-Binet.
    """
    one = GroupRingElement.one(M_group, ring)
    zero = GroupRingElement.zero(M_group, ring)
    gens = []
    for I in subsets(a.d, a.r):
        total = zero
        for K, aK in a.items():
            if aK.is_zero():
                continue
            total = total + determinant([[basis_change[i][k] for k in K] for i in I], one, zero) * aK
        gens.append(total)
    return FGIdeal(M_group, ring, gens)


def lemma33_check(M: FreeModule, H: Iterable[int], a: ExteriorVector, rng=None) -> bool:
    """pi_H({Phi(a)}) == {Psi(N_H^r a)} as ideals of R[G/H].

    ``a`` has degree r and coordinates in R[G]. Phi runs over the r-th
    exterior power of M*, generated by wedges of a dual basis; Psi likewise
    for (M^H)*. When ``rng`` is given both dual bases are random rather than
    standard, so the generating sets differ from the coordinates of ``a``.
    """
    G, ring = M.group, M.ring
    if (G.order > _LEMMA33_LIMITS["group"] or ring.n > _LEMMA33_LIMITS["n"]
            or M.rank > _LEMMA33_LIMITS["rank"] or a.r > _LEMMA33_LIMITS["degree"]):
        raise ValueError("size guard exceeded: need |G| <= 8, n <= 2, rank <= 3, degree <= 2")
    if a.d != M.rank:
        raise ValueError("vector does not live on this module")
    H = sorted(_subgroup(G, H))
    Q = G.quotient(H)
    if rng is None:
        one, zero = GroupRingElement.one(G, ring), GroupRingElement.zero(G, ring)
        U = [[one if i == k else zero for k in range(M.rank)] for i in range(M.rank)]
        qone, qzero = GroupRingElement.one(Q, ring), GroupRingElement.zero(Q, ring)
        V = [[qone if i == k else qzero for k in range(M.rank)] for i in range(M.rank)]
    else:
        U = random_invertible(G, ring, M.rank, rng)
        V = random_invertible(Q, ring, M.rank, rng)
    lhs_full = _value_ideal(G, ring, a, U)
    lhs = FGIdeal(Q, ring, [project(g, H) for g in lhs_full.generators])
    rhs = _value_ideal(Q, ring, norm_map(a, H), V)
    return lhs == rhs


# ---------------------------------------------------------------------------
# rank-0 T-equality


def _minus_avatar(G, ring: ResidueRing, j: int) -> GroupRingElement:
    """(1 - (-1)^j c) times the inverse of 2: the minus idempotent inside Z/p^n[G]."""
    return parity_idempotent(G, j, -1, ring)


def conj35_rank0_check(f: int, p: int, n: int, T: Sequence[int] = (), j: int = 0, scramble: int | None = 0) -> CongruenceReport:
    """e_j^- Fitt^0(P) == e_j^- delta_T(j) R for the T-presentation P.

    P is the block-diagonal presentation R^T -> R^T with entries
    1 - l^(1-j) sigma_l^-1. When ``scramble`` is an integer the matrix is
    replaced by U P V for random invertible U, V seeded by it and the
    parameters, so the determinant is not read off a diagonal.
    """
    t0 = time.perf_counter()
    T = tuple(sorted(set(T)))
    params = {"f": f, "p": p, "n": n, "T": list(T), "j": j}
    if not is_prime(p) or p == 2:
        return CongruenceReport("conj35", params, SKIPPED, reason="p must be an odd prime")
    if n < 1 or f % p**n:
        return CongruenceReport("conj35", params, SKIPPED, reason=f"p^n = {p}^{n} does not divide f = {f}")
    if j > 0:
        return CongruenceReport("conj35", params, SKIPPED, reason="j must be non-positive")
    if any((f * p) % ell == 0 or not is_prime(ell) for ell in T):
        return CongruenceReport("conj35", params, SKIPPED, reason="T must consist of primes prime to f p")
    G = unit_group(f)
    R = ResidueRing(p, n)
    zero = GroupRingElement.zero(G, R)
    rows = []
    for a, ell in enumerate(T):
        entry = GroupRingElement.one(G, R) - GroupRingElement.basis(G, G.inv(ell), R).scale(pow(ell, 1 - j, R.modulus))
        rows.append([entry if b == a else zero for b in range(len(T))])
    P = PresentedModule.from_rows(G, R, rows, len(T))
    if scramble is not None and T:
        rng = np.random.default_rng([scramble % 2**32, f, p, n, -j] + list(T))
        P = P.transformed(random_invertible(G, R, len(T), rng), random_invertible(G, R, len(T), rng))
    eps = _minus_avatar(G, R, j)
    lhs = fitting_ideal(P, 0) * eps
    delta = _reduce_exact(delta_T(f, T, j), R)
    rhs = FGIdeal(G, R, [eps * delta])
    elapsed = time.perf_counter() - t0
    if lhs == rhs:
        return CongruenceReport("conj35", params, VERIFIED, elapsed=elapsed)
    witness = {}
    for name, I, J in (("lhs_not_in_rhs", lhs, rhs), ("rhs_not_in_lhs", rhs, lhs)):
        for g in I.generators:
            res = J.residue(g)
            if not res.is_zero():
                witness[name] = {a: c for a, c in res.items() if c}
                break
    return CongruenceReport("conj35", params, FAILED, witness=witness, elapsed=elapsed)


def _reduce_exact(x: GroupRingElement, ring: ResidueRing) -> GroupRingElement:
    return GroupRingElement(x.group, ring, [ring.coerce(c) for _, c in x.items()])
