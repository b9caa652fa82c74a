"""Covers of the integers by residue classes ``a(n) = a + nZ``.

Every cover property is decided on one full period ``0 .. L-1`` with ``L`` the
lcm of the moduli, so systems whose period exceeds :data:`MAX_PERIOD` are
rejected with :class:`~coverings.errors.CapacityError`.  Class indices are
0-based list positions; duplicate classes are allowed.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, pi
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from coverings.arith import factorize, lcm_all, mycielski_f, ord_p, ord_p_nonzero
from coverings.errors import CapacityError, DomainError, PreconditionError
from coverings.report import BoundReport

MAX_PERIOD = 10**6
MAX_ZNAM_SUBSET = 20


@dataclass(frozen=True)
class ResidueClass:
    a: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"modulus must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "a", self.a % self.n)

    def __contains__(self, x: int) -> bool:
        return (x - self.a) % self.n == 0

    def __str__(self) -> str:
        return f"{self.a}({self.n})"


@dataclass(frozen=True)
class ZCoverSystem:
    classes: tuple[ResidueClass, ...]

    def __post_init__(self) -> None:
        classes = tuple(c if isinstance(c, ResidueClass) else ResidueClass(*c) for c in self.classes)
        if not classes:
            raise DomainError("a system needs at least one residue class")
        object.__setattr__(self, "classes", classes)

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "ZCoverSystem":
        return cls(tuple(ResidueClass(a, n) for a, n in pairs))

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def period(self) -> int:
        return lcm_all(c.n for c in self.classes)

    def without(self, index: int) -> "ZCoverSystem | None":
        rest = self.classes[:index] + self.classes[index + 1 :]
        return ZCoverSystem(rest) if rest else None

    def __iter__(self):
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.classes)) + "}"

    def to_json(self, m: int) -> dict[str, Any]:
        return {"type": "Z", "m": m, "classes": [[c.a, c.n] for c in self.classes]}


def system_from_json(data: Mapping[str, Any]) -> tuple[ZCoverSystem, int]:
    if data.get("type") != "Z":
        raise DomainError(f"expected a Z system, got type {data.get('type')!r}")
    try:
        classes = [ResidueClass(int(a), int(n)) for a, n in data["classes"]]
        m = int(data.get("m", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed Z system: {exc}") from exc
    return ZCoverSystem(tuple(classes)), m


def dumps(system: ZCoverSystem, m: int) -> str:
    return json.dumps(system.to_json(m))


def multiplicity(system: ZCoverSystem, x: int) -> int:
    return sum(1 for c in system.classes if x in c)


def coverage(system: ZCoverSystem) -> np.ndarray:
    """Covering function tabulated on ``0 .. period-1``."""
    period = system.period
    if period > MAX_PERIOD:
        raise CapacityError(f"period {period} exceeds {MAX_PERIOD}")
    counts = np.zeros(period, dtype=np.int64)
    for c in system.classes:
        counts[c.a :: c.n] += 1
    return counts


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")


def is_m_cover(system: ZCoverSystem | None, m: int) -> bool:
    _check_m(m)
    if system is None:
        return False
    return bool(coverage(system).min() >= m)


def is_exact_m_cover(system: ZCoverSystem, m: int) -> bool:
    _check_m(m)
    w = coverage(system)
    return bool((w == m).all())


def irredundant_indices(system: ZCoverSystem, m: int) -> set[int]:
    """Indices ``t`` such that dropping class ``t`` leaves something that is not an m-cover."""
    _check_m(m)
    w = coverage(system)
    if w.min() < m:
        return set(range(system.k))
    # with w >= m everywhere, class t matters iff it holds a point covered exactly m times
    return {t for t, c in enumerate(system.classes) if (w[c.a :: c.n] == m).any()}


def is_minimal_m_cover(system: ZCoverSystem, m: int) -> bool:
    if not is_m_cover(system, m):
        return False
    return irredundant_indices(system, m) == set(range(system.k))


def containing(system: ZCoverSystem, a: int) -> list[int]:
    return [s for s, c in enumerate(system.classes) if a in c]


def n_a(system: ZCoverSystem, a: int) -> int:
    return lcm_all(system.classes[s].n for s in containing(system, a))


def _require_base_point(system: ZCoverSystem, m: int, a: int) -> None:
    if not is_m_cover(system, m):
        raise PreconditionError(f"{system} is not a {m}-cover of Z")
    w = multiplicity(system, a)
    if w != m:
        raise PreconditionError(f"{a} is covered {w} times, not exactly m={m}")


def refined_index_set(system: ZCoverSystem, a: int, p: int) -> list[int]:
    """Classes ``s`` with ``n_s / p^ord_p(n_s)`` dividing ``a_s - a`` but ``n_s`` not dividing it."""
    out = []
    for s, c in enumerate(system.classes):
        diff = c.a - a
        p_free = c.n // p ** ord_p(c.n, p)
        if diff % p_free == 0 and diff % c.n != 0:
            out.append(s)
    return out


def check_theorem_2_1(system: ZCoverSystem, m: int, a: int) -> BoundReport:
    """Check ``k >= m + f(N_a)`` and the per-prime sandwich on ``I(p)``.

    For each prime ``p | N_a`` the report holds ``|I(p)| >= sum 1/p^(ord_p(n_s)-ord_p(a_s-a)-1)
    >= ord_p(N_a)(p-1)`` with every quantity an exact rational.
    """
    _require_base_point(system, m, a)
    k = system.k
    big_n = n_a(system, a)
    report = BoundReport("theorem-2.1", details={"k": k, "m": m, "a": a, "N_a": big_n, "f(N_a)": mycielski_f(big_n)})
    report.add(a, "k >= m + f(N_a)", k, m + mycielski_f(big_n))
    report.add(a, "N_a <= 2^(k-m)", big_n, 2 ** (k - m), relation="<=")
    for p, e in factorize(big_n).factors:
        members = refined_index_set(system, a, p)
        middle = Fraction(0)
        for s in members:
            c = system.classes[s]
            v_diff = ord_p_nonzero(c.a - a, p)
            v_mod = ord_p(c.n, p)
            assert v_diff < v_mod, "a_s - a would be divisible by n_s"
            middle += Fraction(1, p ** (v_mod - v_diff - 1))
        report.details[f"I({p})"] = members
        report.add(p, "|I(p)| >= sum_{I(p)} 1/p^(ord_p(n_s)-ord_p(a_s-a)-1)", Fraction(len(members)), middle)
        report.add(p, "sum_{I(p)} 1/p^(...) >= ord_p(N_a)(p-1)", middle, Fraction(e * (p - 1)))
    return report


@dataclass
class ZnamSumSpec:
    """Base point, multipliers ``m_s`` on ``J = {s : a not in a_s(n_s)}``, and ``alpha`` in [0, 1)."""

    a: int
    m_s: dict[int, int]
    alpha: Fraction = field(default_factory=Fraction)

    def __post_init__(self) -> None:
        self.alpha = Fraction(self.alpha)
        if not 0 <= self.alpha < 1:
            raise DomainError(f"alpha must lie in [0, 1), got {self.alpha}")


def outside_indices(system: ZCoverSystem, a: int) -> list[int]:
    return [s for s, c in enumerate(system.classes) if a not in c]


def _subset_terms(system: ZCoverSystem, a: int, m_s: Mapping[int, int]):
    """Yield ``(fractional part of sum m_s/n_s, exponent phase, sign)`` over all subsets of J."""
    J = outside_indices(system, a)
    if set(m_s) != set(J):
        raise PreconditionError(f"m_s must be defined exactly on J={J}, got keys {sorted(m_s)}")
    if len(J) > MAX_ZNAM_SUBSET:
        raise CapacityError(f"|J|={len(J)} exceeds subset-enumeration limit {MAX_ZNAM_SUBSET}")
    terms = [(Fraction(0), Fraction(0), 1)]
    for s in J:
        c = system.classes[s]
        step = Fraction(m_s[s], c.n)
        phase = Fraction((c.a - a) * m_s[s], c.n)
        terms += [((t + step) % 1, (ph + phase) % 1, -sign) for t, ph, sign in terms]
    return terms


def realized_alphas(system: ZCoverSystem, a: int, m_s: Mapping[int, int]) -> list[Fraction]:
    big_n = n_a(system, a)
    return sorted({(big_n * t) % 1 for t, _, _ in _subset_terms(system, a, m_s)})


def znam_sums(system: ZCoverSystem, spec: ZnamSumSpec) -> list[complex]:
    """The sums ``C_0(alpha), ..., C_{N_a - 1}(alpha)``.

    Subset sums are classified exactly; only the final exponentials are floats.
    """
    big_n = n_a(system, spec.a)
    sums = [0j] * big_n
    for frac, phase, sign in _subset_terms(system, spec.a, spec.m_s):
        scaled = big_n * frac
        if scaled % 1 != spec.alpha:
            continue
        r = int(scaled - spec.alpha)
        sums[r] += sign * cmath.exp(2j * pi * float(phase))
    return sums


def valid_multipliers(system: ZCoverSystem, a: int) -> dict[int, int]:
    """Modulus of admissibility for each ``s`` in J: ``m_s`` must avoid multiples of ``n_s / gcd(n_s, a_s - a)``."""
    return {s: system.classes[s].n // gcd(system.classes[s].n, system.classes[s].a - a) for s in outside_indices(system, a)}


def build_extremal_zcover(k: int, m: int) -> ZCoverSystem:
    """``m-1`` copies of 0(1) plus ``1(2), 2(4), ..., 2^(d-1)(2^d), 0(2^d)`` with ``d = k - m``.

    The result is an exact m-cover in which ``0(2^d)`` is irredundant and
    ``k = m + f(2^d)``.
    """
    _check_m(m)
    if k <= m:
        raise DomainError(f"need k > m, got k={k}, m={m}")
    d = k - m
    if d > 30:
        raise CapacityError(f"k - m = {d} exceeds 30")
    classes = [ResidueClass(0, 1)] * (m - 1)
    classes += [ResidueClass(2 ** (i - 1), 2**i) for i in range(1, d + 1)]
    classes.append(ResidueClass(0, 2**d))
    return ZCoverSystem(tuple(classes))


def parse_system(obj: Sequence[Sequence[int]]) -> ZCoverSystem:
    return ZCoverSystem.of((int(a), int(n)) for a, n in obj)
