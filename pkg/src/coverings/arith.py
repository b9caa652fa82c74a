"""Exact elementary number theory: factorization, p-adic order, Euler phi, f(n).

Inputs in this package are group orders and moduli of desk size, so plain
trial division over a 2-3-5 wheel is all the factoring we need.  Exact
rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable

from coverings.errors import CapacityError, DomainError

Rational = Fraction

# trial division is only promised up to this bound
MAX_FACTOR_INPUT = 10**18

_WHEEL_INCREMENTS = (4, 2, 4, 2, 4, 6, 2, 6)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)) or any(e < 1 for _, e in self.factors):
            raise ValueError(f"malformed factorization {self.factors!r}")
        prod = 1
        for p, e in self.factors:
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


def _check_positive(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"expected an integer, got {n!r}")
    if n < 1:
        raise DomainError(f"expected a positive integer, got {n}")


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    _check_positive(n)
    if n > MAX_FACTOR_INPUT:
        raise CapacityError(f"{n} exceeds the trial-division bound {MAX_FACTOR_INPUT}")
    factors = []
    rest = n
    for p in (2, 3, 5):
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
    p, i = 7, 0
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
        p += _WHEEL_INCREMENTS[i]
        i = (i + 1) % 8
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(n, tuple(factors))


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % d for d in range(3, isqrt(p) + 1, 2))


def is_prime_power(n: int) -> bool:
    return n >= 2 and len(factorize(n).factors) == 1


def ord_p(n: int, p: int) -> int:
    """Largest ``e`` with ``p**e`` dividing ``n``."""
    _check_positive(n)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def ord_p_nonzero(n: int, p: int) -> int:
    """p-adic order of a nonzero integer of either sign."""
    if n == 0:
        raise DomainError("ord_p(0) is infinite")
    return ord_p(abs(n), p)


def mycielski_f(n: int) -> int:
    """``f(n) = sum over p | n of ord_p(n) * (p - 1)``."""
    return sum(e * (p - 1) for p, e in factorize(n).factors)


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n).factors:
        result = result // p * (p - 1)
    return result


def lcm_all(values: Iterable[int]) -> int:
    """lcm of positive integers; the empty lcm is 1."""
    result = 1
    for v in values:
        _check_positive(v)
        result = result // gcd(result, v) * v
    return result


def prime_powers_up_to(bound: int, primes: Iterable[int] | None = None) -> list[int]:
    """All prime powers ``p**e >= 2`` not exceeding ``bound``, optionally restricted to ``primes``."""
    if primes is None:
        primes = [p for p in range(2, bound + 1) if is_prime(p)]
    out = []
    for p in primes:
        q = p
        while q <= bound:
            out.append(q)
            q *= p
    return sorted(out)
