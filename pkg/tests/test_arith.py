from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from coverings.arith import (
    Factorization,
    euler_phi,
    factorize,
    is_prime,
    lcm_all,
    mycielski_f,
    ord_p,
)
from coverings.errors import DomainError


def brute_factor(n):
    out, d = [], 2
    while n > 1:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    return tuple(out)


@pytest.mark.parametrize("n, expected", [(1, ()), (12, ((2, 2), (3, 1))), (97, ((97, 1),))])
def test_factorize_examples(n, expected):
    assert factorize(n).factors == expected


def test_factorize_matches_brute_force():
    for n in range(1, 3000):
        assert factorize(n).factors == brute_factor(n)


def test_factorize_large_semiprime():
    assert factorize(999983 * 1000003).factors == ((999983, 1), (1000003, 1))


@pytest.mark.parametrize("bad", [0, -4])
def test_factorize_rejects_nonpositive(bad):
    with pytest.raises(DomainError):
        factorize(bad)


def test_factorization_invariants_are_enforced():
    with pytest.raises(ValueError):
        Factorization(12, ((3, 1), (2, 2)))
    with pytest.raises(ValueError):
        Factorization(12, ((2, 1), (3, 1)))


@pytest.mark.parametrize("n, p, expected", [(12, 2, 2), (12, 5, 0), (8, 2, 3)])
def test_ord_p(n, p, expected):
    assert ord_p(n, p) == expected


def test_ord_p_needs_prime():
    with pytest.raises(DomainError):
        ord_p(12, 4)


@given(st.integers(1, 10**6), st.sampled_from([2, 3, 5, 7, 11]))
def test_ord_p_definition(n, p):
    e = ord_p(n, p)
    assert n % p**e == 0 and n % p ** (e + 1) != 0


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_mycielski_on_primes_and_squares(p):
    assert mycielski_f(p) == p - 1
    assert mycielski_f(p * p) == 2 * p - 2


def test_mycielski_small_values():
    assert mycielski_f(1) == 0
    assert mycielski_f(12) == 4


def test_mycielski_dominates_log2():
    assert all(n <= 2 ** mycielski_f(n) for n in range(1, 10**4 + 1))


def test_mycielski_additive():
    for a in range(1, 101):
        for b in range(1, 101):
            assert mycielski_f(a * b) == mycielski_f(a) + mycielski_f(b)


@pytest.mark.parametrize("n, expected", [(1, 1), (4, 2), (9, 6)])
def test_phi_examples(n, expected):
    assert euler_phi(n) == expected


def test_phi_matches_gcd_count():
    for n in range(1, 500):
        assert euler_phi(n) == sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def test_phi_on_prime_powers():
    for p in [2, 3, 5, 7]:
        for a in range(1, 6):
            assert euler_phi(p**a) == p ** (a - 1) * (p - 1)


@pytest.mark.parametrize("values, expected", [([2, 4], 4), ([], 1), ([6, 10], 30)])
def test_lcm_all(values, expected):
    assert lcm_all(values) == expected


def test_is_prime():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


fractions = st.tuples(st.integers(-10**12, 10**12), st.integers(1, 10**12))


@given(fractions, fractions)
def test_rational_arithmetic_against_cross_multiplication(x, y):
    (a, b), (c, d) = x, y
    total = Fraction(a, b) + Fraction(c, d)
    assert total.numerator * b * d == (a * d + c * b) * total.denominator
    product = Fraction(a, b) * Fraction(c, d)
    assert product.numerator * b * d == a * c * product.denominator
    assert total.denominator > 0 and gcd(total.numerator, total.denominator) == 1
