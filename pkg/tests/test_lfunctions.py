import math
from fractions import Fraction
from math import comb, gcd

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from starkfam.cyclotomic import CyclotomicNumber
from starkfam.gring import QQ, GroupRingElement, characters, idempotent, reduce_level, unit_group
from starkfam.lfunctions import (
    bernoulli,
    classical_formula_check,
    delta_T,
    digamma,
    euler_factor_group,
    gen_bernoulli,
    hurwitz_zeta,
    l_derivative_at_zero,
    l_float,
    l_value,
    l_value_truncated,
    parity_forced_zero,
    prime_factors,
    theta,
)


def trivial_mod1():
    return characters(unit_group(1))[0]


def quadratic(f, parity):
    return next(
        c for c in characters(unit_group(f)) if c.order == 2 and c.is_primitive() and c.parity() == parity
    )


def rational(q, level=1):
    return CyclotomicNumber.rational(level, q)


def mp_bernoulli_poly(n, x):
    """B_n(x) with exact Bernoulli numbers taken from mpmath."""
    total = Fraction(0)
    for k in range(n + 1):
        p, q = mpmath.bernfrac(k)
        total += comb(n, k) * Fraction(int(p), int(q)) * Fraction(x) ** (n - k)
    return total


def G_elem(f, mapping):
    return GroupRingElement.from_dict(unit_group(f), mapping, QQ)


# ---------------------------------------------------------------------------
# Bernoulli numbers


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(6) == Fraction(1, 42)


@pytest.mark.parametrize("n", range(0, 61))
def test_bernoulli_matches_mpmath(n):
    p, q = mpmath.bernfrac(n)
    assert bernoulli(n) == Fraction(int(p), int(q))


def test_gen_bernoulli_examples():
    assert gen_bernoulli(quadratic(3, -1), 1).value == rational(Fraction(-1, 3), quadratic(3, -1).level)
    assert gen_bernoulli(quadratic(4, -1), 1).value == rational(Fraction(-1, 2), quadratic(4, -1).level)
    assert gen_bernoulli(trivial_mod1(), 2).value == rational(Fraction(1, 6), trivial_mod1().level)
    # the recorded B_1 convention for the trivial character
    assert gen_bernoulli(trivial_mod1(), 1).value == rational(Fraction(1, 2), trivial_mod1().level)


def test_gen_bernoulli_requires_primitive():
    chi = next(c for c in characters(unit_group(9)) if not c.is_primitive() and not c.is_trivial())
    with pytest.raises(ValueError, match="primitive character required"):
        gen_bernoulli(chi, 1)


# ---------------------------------------------------------------------------
# exact L-values


def test_l_value_examples():
    chi3 = quadratic(3, -1)
    assert l_value(chi3, 0) == rational(Fraction(1, 3), chi3.level)
    assert l_value(trivial_mod1(), -1) == rational(Fraction(-1, 12), 1)
    assert l_value(trivial_mod1(), 0) == rational(Fraction(-1, 2), 1)
    assert l_value(quadratic(5, 1), 0).is_zero()
    with pytest.raises(ValueError, match="non-positive only"):
        l_value(chi3, 1)


@pytest.mark.parametrize("n", range(2, 31, 2))
def test_riemann_zeta_at_negative_odd(n):
    assert l_value(trivial_mod1(), 1 - n) == rational(-bernoulli(n) / n, 1)


def primitive_characters(max_f):
    for f in range(1, max_f + 1):
        for chi in characters(unit_group(f)):
            if chi.is_primitive():
                yield chi


def test_parity_zeros_exactly_where_forced():
    for chi in primitive_characters(20):
        for j in range(-6, 1):
            assert l_value(chi, j).is_zero() == parity_forced_zero(chi, j), (chi.modulus, j)


def test_minus_part_is_nonvanishing():
    # chi(-1) = -(-1)^j never meets a zero
    for chi in primitive_characters(20):
        for j in range(-6, 1):
            if chi.parity() == -((-1) ** (j % 2)):
                assert not l_value(chi, j).is_zero()


def test_truncation_factors():
    chi3 = quadratic(3, -1)
    # removing the Euler factor at 2 multiplies by (1 - chi(2) 2^-j) = 2 at j = 0
    assert l_value_truncated(chi3, 0, S=[2, 3]) == l_value(chi3, 0) * 2
    # T = {2} at j = 0 multiplies by (1 - chi(2) 2) = 3
    assert l_value_truncated(chi3, 0, S=[3], T=[2]) == l_value(chi3, 0) * 3


# ---------------------------------------------------------------------------
# theta elements


def test_theta_examples():
    th = theta(3, ["inf", 3], (), 0)
    assert th.value == G_elem(3, {1: Fraction(1, 6), 2: Fraction(-1, 6)})
    th = theta(3, ["inf", 3], [2], 0)
    assert th.value == G_elem(3, {1: Fraction(1, 2), 2: Fraction(-1, 2)})
    for p in (2, 3, 5, 7):
        th = theta(1, [p], (), -1)
        assert th.value == G_elem(1, {1: (1 - p) * Fraction(-1, 12)})


def test_theta_argument_checks():
    with pytest.raises(ValueError):
        theta(15, [3])
    with pytest.raises(ValueError):
        theta(3, [2, 3], [2])
    with pytest.raises(ValueError):
        theta(3, [3], (), 1)


@pytest.mark.parametrize("f", [3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21])
@pytest.mark.parametrize("j", [0, -1, -2, -3])
def test_theta_matches_partial_zeta(f, j):
    # coefficient of sigma_a^-1 is zeta(j, a mod f) = -f^-j B_{1-j}(a/f) / (1-j)
    th = theta(f, None, (), j)
    G = th.group
    for a in G.labels:
        expected = -Fraction(f) ** (-j) * mp_bernoulli_poly(1 - j, Fraction(a, f)) / (1 - j)
        assert th.coeff(G.inv(a)) == expected


def test_delta_T_examples():
    assert delta_T(3, (), 0) == GroupRingElement.one(unit_group(3), QQ)
    assert delta_T(3, [2], 0) == G_elem(3, {1: 1, 2: -2})
    assert delta_T(3, [2], -1) == G_elem(3, {1: 1, 2: -4})
    with pytest.raises(ValueError):
        delta_T(3, [3], 0)


def test_euler_factor_examples():
    G = unit_group(7)
    assert euler_factor_group(7, 2, 0) == G_elem(7, {1: 1, G.inv(2): -1})
    assert euler_factor_group(3, 2, -1) == G_elem(3, {1: 1, 2: -2})
    with pytest.raises(ValueError):
        euler_factor_group(6, 3, 0)


THETA_CASES = [
    (f, T, j)
    for f in (3, 4, 5, 7, 8, 9, 11, 12, 13, 15)
    for T in ((), (2,), (7,), (11,), (2, 17), (7, 11))
    for j in (0, -1, -3)
    if all(gcd(t, f) == 1 for t in T)
]


@pytest.mark.parametrize("f, T, j", THETA_CASES)
def test_theta_factorization(f, T, j):
    assert theta(f, None, T, j).value == delta_T(f, T, j) * theta(f, None, (), j).value


@given(
    st.sampled_from([3, 4, 5, 7, 8, 9, 12, 13, 15, 16]),
    st.sampled_from([2, 3, 5, 7, 11, 13, 17]),
    st.sampled_from([(), (2,), (19,), (2, 23)]),
    st.integers(-4, 0),
)
def test_theta_S_enlargement(f, ell, T, j):
    assume(f % ell and all(gcd(t, f) == 1 and t != ell for t in T))
    S = prime_factors(f)
    big = theta(f, S + (ell,), T, j).value
    assert big == euler_factor_group(f, ell, j) * theta(f, S, T, j).value


@pytest.mark.parametrize("f, fbig", [(3, 9), (5, 15), (4, 12)])
@pytest.mark.parametrize("T", [(), (7,)])
@pytest.mark.parametrize("j", [0, -1, -2, -3, -4])
def test_theta_corestriction(f, fbig, T, j):
    S, Sbig = prime_factors(f), prime_factors(fbig)
    lhs = reduce_level(theta(fbig, Sbig, T, j).value, f)
    rhs = theta(f, S, T, j).value
    for ell in set(Sbig) - set(S):
        rhs = euler_factor_group(f, ell, j) * rhs
    assert lhs == rhs


def test_theta_character_components():
    # e_chi theta = L_{S,T}(chi^-1, j) e_chi, checked in Q(zeta)[G]
    f, T, j = 7, (2,), -1
    th = theta(f, None, T, j).value
    for chi in characters(unit_group(f)):
        e = idempotent(chi)
        lhs = th.change_ring(e.ring) * e
        assert lhs == e.scale(l_value_truncated(chi.inverse(), j, prime_factors(f), T))


# ---------------------------------------------------------------------------
# float channel


def test_hurwitz_riemann_values():
    assert abs(hurwitz_zeta(2.0, 1.0) - math.pi**2 / 6) < 1e-10
    assert abs(hurwitz_zeta(4.0, 1.0) - math.pi**4 / 90) < 1e-10
    assert abs(hurwitz_zeta(0.0, 0.25) - 0.25) < 1e-12
    with pytest.raises(ValueError):
        hurwitz_zeta(1.0, 0.5)
    with pytest.raises(ValueError):
        hurwitz_zeta(2.0, 0.0)


@given(st.floats(-10, 10), st.floats(0.001, 1.0))
def test_hurwitz_against_mpmath(s, x):
    assume(abs(s - 1) > 1e-3)
    ref = float(mpmath.zeta(s, x))
    got = hurwitz_zeta(s, x)
    assert abs(got - ref) <= 1e-10 * abs(ref) + 1e-13


@pytest.mark.parametrize("x", [0.05, 0.2, 0.5, 0.9, 1.0])
def test_digamma_against_mpmath(x):
    assert abs(digamma(x) - float(mpmath.digamma(x))) < 1e-12 * max(1.0, abs(float(mpmath.digamma(x))))


def test_l_float_examples():
    assert abs(l_float(quadratic(3, -1), 0.0) - 1 / 3) < 1e-9
    chi4 = quadratic(4, -1)
    assert abs(l_float(chi4, 2.0) - float(mpmath.catalan)) < 1e-10


def test_cross_channel():
    for chi in primitive_characters(20):
        if chi.is_trivial():
            continue
        for j in (0, -1, -2, -3):
            exact = complex(l_value(chi, j))
            approx = l_float(chi, float(j))
            assert abs(exact - approx) <= 1e-8, (chi.modulus, j)


@pytest.mark.parametrize(
    "f, expected",
    [
        (5, 0.481211825060),
        (8, math.log(1 + math.sqrt(2))),
        (12, math.log(2 + math.sqrt(3))),
        (13, math.log((3 + math.sqrt(13)) / 2)),
    ],
)
def test_l_derivative_real_quadratic(f, expected):
    # L'(chi, 0) = h log(eps) for the real quadratic field; class number 1 here
    val = l_derivative_at_zero(quadratic(f, 1))
    assert isinstance(val, float)
    assert abs(val - expected) < 1e-9


@pytest.mark.parametrize("f", [5, 7, 8, 12, 13])
def test_l_derivative_against_mpmath(f):
    for chi in characters(unit_group(f)):
        if not chi.is_primitive() or chi.is_trivial():
            continue
        ref = sum(
            complex(chi(a)) * (-mpmath.log(f) * mpmath.zeta(0, mpmath.mpf(a) / f) + mpmath.zeta(0, mpmath.mpf(a) / f, 1))
            for a in unit_group(f).labels
        )
        assert abs(complex(l_derivative_at_zero(chi)) - complex(ref)) < 1e-9


@pytest.mark.parametrize("f", [3, 4, 5, 7, 8, 9, 12, 13, 20])
@pytest.mark.parametrize("j", [1, 2])
def test_classical_formula(f, j):
    rows = classical_formula_check(f, j)
    assert len(rows) == unit_group(f).order
    for a, lhs, rhs, diff in rows:
        assert diff < 1e-10 * max(1.0, abs(lhs))


def test_classical_formula_range():
    with pytest.raises(ValueError):
        classical_formula_check(5, 3)
