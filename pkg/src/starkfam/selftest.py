"""Property suites run by ``starkfam selftest``.

Each suite is a function ``(rng) -> None`` that raises ``AssertionError`` on
a violated property. Suites are small enough to finish in seconds; the
pytest suite exercises the same properties on larger samples.
"""

from __future__ import annotations

import itertools
import math
from contextlib import contextmanager, nullcontext
from fractions import Fraction
from typing import Callable
from unittest import mock

import numpy as np

from . import gring
from .congruences import default_grid, kummer_pairs, reduce_mod, sweep, verify_kummer
from .cyclotomic import (
    CyclotomicNumber,
    cyclotomic_unit_log_sum,
    embed_complex,
    galois_apply,
    polylog_d,
)
from .gring import (
    QQ,
    GroupRingElement,
    ResidueRing,
    characters,
    idempotent,
    parity_idempotent,
    project,
    reduce_level,
    twist,
    unit_group,
)
from .lfunctions import (
    delta_T,
    euler_factor_group,
    l_derivative_at_zero,
    l_float,
    l_value,
    prime_factors,
    theta,
)
from .modalg import (
    DualExteriorVector,
    ExteriorVector,
    FGIdeal,
    FreeModule,
    PresentedModule,
    conj35_rank0_check,
    determinant,
    fitting_ideal,
    lemma33_check,
    wedge,
    wedge_pair,
)
from .report import summarize

SUITES: dict[str, Callable] = {}


def suite(fn):
    SUITES[fn.__name__] = fn
    return fn


@suite
def group_axioms(rng):
    for f in (1, 3, 8, 20, 45):
        G = unit_group(f)
        assert G.order == sum(1 for a in range(1, f + 1) if math.gcd(a, f) == 1)
        assert math.prod(G.orders) == G.order
        if f > 2:
            c = G.conjugation
            assert G.mul(c, c) == 1


@suite
def character_idempotents(rng):
    for f in (5, 7, 8, 12):
        G = unit_group(f)
        es = [idempotent(chi) for chi in characters(G)]
        total = es[0]
        for e in es[1:]:
            total = total + e
        assert total == GroupRingElement.one(G, total.ring)
        for a, b in itertools.combinations(range(len(es)), 2):
            assert (es[a] * es[b]).is_zero()
        assert es[1] * es[1] == es[1]


@suite
def twist_homomorphism(rng):
    for f, p, n in ((9, 3, 2), (25, 5, 2), (45, 3, 2)):
        G = unit_group(f)
        R = ResidueRing(p, n)
        for _ in range(10):
            x = GroupRingElement.random(G, R, rng)
            y = GroupRingElement.random(G, R, rng)
            a, b = (int(v) for v in rng.integers(-6, 7, 2))
            assert twist(a, x * y) == twist(a, x) * twist(a, y)
            assert twist(a, twist(b, x)) == twist(a + b, x)


@suite
def twist_parity(rng):
    for f, p, n in ((9, 3, 2), (27, 3, 3), (25, 5, 2)):
        G = unit_group(f)
        R = ResidueRing(p, n)
        for j in range(0, -5, -1):
            for a in range(-4, 5):
                assert twist(a, parity_idempotent(G, j, -1, R)) == parity_idempotent(G, j + a, -1, R)


@suite
def projection(rng):
    G = unit_group(15)
    R = ResidueRing(5, 1)
    H = [a for a in G.labels if a % 5 == 1]
    for _ in range(10):
        x = GroupRingElement.random(G, R, rng)
        y = GroupRingElement.random(G, R, rng)
        assert project(x * y, H) == project(x, H) * project(y, H)
        assert project(x, H).augmentation() == x.augmentation()


@suite
def cyclotomic_ring(rng):
    for m in (7, 12, 15):
        for _ in range(5):
            x, y, z = (CyclotomicNumber(m, [int(v) for v in rng.integers(-4, 5, m)]) for _ in range(3))
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert abs(embed_complex(x * y) - embed_complex(x) * embed_complex(y)) < 1e-9
            a = next(t for t in (2, 3, 5, 7) if math.gcd(t, m) == 1)
            assert abs(embed_complex(galois_apply(a, x)) - embed_complex(x, a)) < 1e-9
    for p in (3, 5, 7, 11):
        prod = CyclotomicNumber.rational(p, 1)
        for a in range(1, p):
            prod = prod * (1 - CyclotomicNumber.zeta(p, a))
        assert prod == p


@suite
def polylog_recurrence(rng):
    for j in range(1, 10):
        assert polylog_d(j + 1) == polylog_d(j).theta_derivative().scale(Fraction(-1, j))


@suite
def cross_channel(rng):
    for f in (1, 3, 4, 5, 8, 12):
        for chi in characters(unit_group(f)):
            if not chi.is_primitive():
                continue
            for j in (0, -1, -2, -3):
                exact = embed_complex(l_value(chi, j))
                assert abs(l_float(chi, j) - exact) <= 1e-8 * max(1.0, abs(exact))


@suite
def theta_functoriality(rng):
    for f in (3, 5, 12):
        for j in (0, -1, -2):
            T = (7,) if f % 7 else (11,)
            S = prime_factors(f)
            assert theta(f, S, T, j).value == delta_T(f, T, j) * theta(f, S, (), j).value
            ell = 13
            assert theta(f, S + (ell,), (), j).value == euler_factor_group(f, ell, j) * theta(f, S, (), j).value
    for f, f2 in ((3, 9), (5, 15), (4, 12)):
        for j in range(0, -5, -1):
            S = prime_factors(f)
            S2 = prime_factors(f2)
            expected = theta(f, S, (), j).value
            for ell in sorted(set(S2) - set(S)):
                expected = euler_factor_group(f, ell, j) * expected
            assert reduce_level(theta(f2, S2, (), j).value, f) == expected


@suite
def reducer(rng):
    G = unit_group(9)
    for _ in range(10):
        x = GroupRingElement(G, QQ, [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, 6), rng.choice([1, 2, 4, 5, 7], 6))])
        y = GroupRingElement(G, QQ, [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, 6), rng.choice([1, 2, 4, 5, 7], 6))])
        assert reduce_mod(x * y, 3, 2) == reduce_mod(x, 3, 2) * reduce_mod(y, 3, 2)


@suite
def kummer(rng):
    for p, n, j, k in kummer_pairs((5, 7), (1, 2), lo=-30):
        assert verify_kummer(p, n, j, k).status == "verified"


@suite
def minus_congruences(rng):
    from dataclasses import replace

    grid = replace(default_grid(), combos=((9, 3, 2), (25, 5, 1), (45, 3, 1)), checks=("minus", "delta"))
    counts = summarize(sweep(grid))
    assert counts["failed"] == 0 and counts["verified"] > 0


@suite
def fitting_ideals(rng):
    G = unit_group(5)
    R = ResidueRing(5, 2)
    one = GroupRingElement.one(G, R)
    zero = GroupRingElement.zero(G, R)
    for c in (1, 2, 3):
        rows = [[GroupRingElement.random(G, R, rng) for _ in range(c)] for _ in range(c)]
        M = PresentedModule.from_rows(G, R, rows, c)
        assert fitting_ideal(M, 0) == FGIdeal(G, R, [determinant(rows, one, zero)])
        Mf = M.plus_free(1)
        assert fitting_ideal(Mf, 0) == FGIdeal.zero(G, R)
        for i in range(1, c + 2):
            assert fitting_ideal(Mf, i) == fitting_ideal(M, i - 1)


@suite
def exterior(rng):
    for r in (1, 2, 3, 4):
        vs = [ExteriorVector.vector([int(v) for v in rng.integers(-4, 5, r)]) for _ in range(r)]
        ps = [DualExteriorVector.vector([int(v) for v in rng.integers(-4, 5, r)]) for _ in range(r)]
        mat = [[sum(x * y for x, y in zip(p.coords, v.coords)) for v in vs] for p in ps]
        assert wedge_pair(wedge(vs), wedge(ps)).coords[0] == determinant(mat, 1, 0)
    v = ExteriorVector.vector([1, 2, 3])
    assert wedge([v, v]).is_zero()


@suite
def lemma33(rng):
    G = unit_group(5)
    R = ResidueRing(5, 1)
    zero = GroupRingElement.zero(G, R)
    M = FreeModule(G, R, 3)
    for _ in range(10):
        vs = [ExteriorVector.vector([GroupRingElement.random(G, R, rng) for _ in range(3)], zero) for _ in range(2)]
        assert lemma33_check(M, [4], wedge(vs), rng)


@suite
def conj35(rng):
    for f, p, n in ((9, 3, 1), (9, 3, 2), (25, 5, 1), (45, 3, 1)):
        for T in ((), (2,), (2, 7)):
            for j in (0, -1, -2):
                assert conj35_rank0_check(f, p, n, T, j, int(rng.integers(1 << 16))).status == "verified"


@suite
def stark0(rng):
    for f in (5, 8, 12, 13):
        for chi in characters(unit_group(f)):
            if chi.is_trivial() or not chi.is_even() or not chi.is_primitive():
                continue
            lhs = l_derivative_at_zero(chi.inverse())
            assert abs(lhs - (-0.5) * cyclotomic_unit_log_sum(f, chi)) <= 1e-9


@contextmanager
def corrupted_build():
    """Break the cyclotomic character: sigma_b twists by b^(a+1) instead of b^a."""
    with mock.patch.object(gring, "_cyc_power", lambda b, a, N: pow(b, a + 1, N)):
        yield


def run_selftest(seed: int = 0, corrupt: bool = False) -> dict[str, bool]:
    """Run every suite with its own generator seeded from ``seed``; returns name -> passed."""
    results = {}
    with corrupted_build() if corrupt else nullcontext():
        for idx, (name, fn) in enumerate(SUITES.items()):
            rng = np.random.default_rng([seed % 2**32, idx])
            try:
                fn(rng)
                results[name] = True
            except AssertionError:
                results[name] = False
    return results

