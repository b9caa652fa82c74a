"""When does an integer ``n`` divide ``prod (1 - zeta_s)`` among the algebraic integers?

Only the orders of the roots of unity matter.  For a prime ``p``, a root of
order ``p^e`` contributes ``1/phi(p^e)`` to the p-adic valuation of the
product and any order that is not a power of ``p`` contributes nothing, so
``n`` divides the product exactly when, for every ``p | n``, those
contributions add up to at least ``ord_p(n)``.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable

from coverings.arith import euler_phi, factorize, mycielski_f
from coverings.errors import DomainError


class OrderMultiset(tuple):
    """Sorted tuple of root-of-unity orders, each at least 2."""

    def __new__(cls, orders: Iterable[int] = ()):
        orders = sorted(int(n) for n in orders)
        if any(n < 2 for n in orders):
            raise DomainError(f"root-of-unity orders must be >= 2 (zeta != 1), got {orders}")
        return super().__new__(cls, orders)


def prime_of_power(n: int) -> int | None:
    """The prime ``p`` if ``n`` is a power of ``p``, else None."""
    factors = factorize(n).factors
    return factors[0][0] if len(factors) == 1 else None


def valuation_sums(orders: Iterable[int]) -> dict[int, Fraction]:
    """Per prime ``p``: exact sum of ``1/phi(n_s)`` over the entries that are powers of ``p``."""
    sums: dict[int, Fraction] = {}
    for n_s in OrderMultiset(orders):
        p = prime_of_power(n_s)
        if p is not None:
            sums[p] = sums.get(p, Fraction(0)) + Fraction(1, euler_phi(n_s))
    return sums


def divisibility_deficits(n: int, orders: Iterable[int]) -> dict[int, tuple[Fraction, int]]:
    """For each prime ``p | n`` the pair ``(valuation sum, ord_p(n))``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    sums = valuation_sums(orders)
    return {p: (sums.get(p, Fraction(0)), e) for p, e in factorize(n).factors}


def divides_product(n: int, orders: Iterable[int]) -> bool:
    return all(total >= e for total, e in divisibility_deficits(n, orders).values())


def minimal_k(n: int) -> tuple[int, OrderMultiset]:
    """``(f(n), certificate)`` with ``ord_p(n)(p-1)`` roots of order ``p`` for every ``p | n``."""
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    cert = OrderMultiset(p for p, e in factorize(n).factors for _ in range(e * (p - 1)))
    assert len(cert) == mycielski_f(n) and divides_product(n, cert)
    return len(cert), cert


def is_tight_configuration(n: int, orders: Iterable[int]) -> bool:
    """Whether ``f(n)`` roots with these orders already give a product divisible by ``n``.

    Decided twice, by the valuation criterion and by the structural count of
    order-``p`` entries; the two must agree.
    """
    orders = OrderMultiset(orders)
    if len(orders) != mycielski_f(n):
        raise DomainError(f"a tight configuration has exactly f({n}) = {mycielski_f(n)} entries, got {len(orders)}")
    by_criterion = divides_product(n, orders)
    counts = Counter(orders)
    wanted = {p: e * (p - 1) for p, e in factorize(n).factors}
    by_structure = dict(counts) == wanted
    if by_criterion != by_structure:
        raise AssertionError(f"criterion and structure disagree on n={n}, orders={orders}")
    return by_criterion
