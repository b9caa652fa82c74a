"""Characters of finite abelian groups and the objects built from a cover with them.

A character of ``C_{d_1} x ... x C_{d_r}`` is an exponent tuple ``t`` acting by
``x -> exp(2 pi i sum t_i x_i / d_i)``.  Values are kept as exact phases in
[0, 1); products of characters add exponent tuples, so every structural
equality is decided without floating point.  Complex numbers appear only when
tabulating ``Psi`` and the Fourier coefficients for residual checks.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import pi
from typing import Any, Iterable

from coverings.abgroup import AbelianGroup, CosetSystem, Element, Subgroup, base_subgroup, containing, is_m_cover, multiplicity
from coverings.arith import mycielski_f
from coverings.cyclotomic import divides_product, divisibility_deficits
from coverings.errors import CapacityError, DomainError, PreconditionError
from coverings.report import BoundReport

MAX_DUAL_ORDER = 512
MAX_J = 24
TOLERANCE = 1e-9


@dataclass(frozen=True)
class UnitRootPhase:
    """``exp(2 pi i * phase)`` with ``phase`` reduced into [0, 1)."""

    phase: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)

    @property
    def order(self) -> int:
        return self.phase.denominator

    @property
    def is_one(self) -> bool:
        return self.phase == 0

    @property
    def value(self) -> complex:
        return cmath.exp(2j * pi * float(self.phase))

    def __mul__(self, other: "UnitRootPhase") -> "UnitRootPhase":
        return UnitRootPhase(self.phase + other.phase)


@dataclass(frozen=True)
class Character:
    group: AbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(int(t) % d for t, d in zip(self.exponents, self.group.orders))
        if len(exps) != self.group.rank:
            raise DomainError(f"need {self.group.rank} exponents, got {self.exponents!r}")
        object.__setattr__(self, "exponents", exps)

    def __call__(self, x: Element) -> UnitRootPhase:
        return evaluate(self, x)

    def __mul__(self, other: "Character") -> "Character":
        if other.group != self.group:
            raise DomainError("characters of different groups")
        return Character(self.group, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def inverse(self) -> "Character":
        return Character(self.group, tuple(-a for a in self.exponents))

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)


def evaluate(chi: Character, x: Any) -> UnitRootPhase:
    x = chi.group.element(x)
    return UnitRootPhase(sum(Fraction(t * c, d) for t, c, d in zip(chi.exponents, x, chi.group.orders)))


def trivial_character(G: AbelianGroup) -> Character:
    return Character(G, (0,) * G.rank)


def dual(G: AbelianGroup) -> list[Character]:
    """All characters in lexicographic order of exponent tuple."""
    if G.order > MAX_DUAL_ORDER:
        raise CapacityError(f"dual enumeration limited to order {MAX_DUAL_ORDER}")
    return [Character(G, t) for t in itertools.product(*(range(d) for d in G.orders))]


def annihilator(H: Subgroup) -> list[Character]:
    """Characters whose kernel contains ``H``; there are ``[G:H]`` of them."""
    gens = H.generators if H.generators is not None else tuple(H.elements)
    return [chi for chi in dual(H.group) if all(evaluate(chi, h).is_one for h in gens)]


def separating_character(H: Subgroup, a: Any) -> Character:
    """The lexicographically first character trivial on ``H`` but not at ``a``."""
    a = H.group.element(a)
    if a in H:
        raise DomainError(f"{a} lies in the subgroup; no character separates it")
    for chi in annihilator(H):
        if not evaluate(chi, a).is_one:
            return chi
    raise AssertionError("duality guarantees a separating character")


@dataclass
class ProofData:
    """Choices made for a base point ``a``: the index set ``J``, the ``chi_j`` and the ``zeta_j``."""

    system: CosetSystem
    m: int
    a: Element
    J: list[int]
    chis: list[Character]
    zetas: list[UnitRootPhase]
    H_a: Subgroup

    @property
    def n_a(self) -> int:
        return self.system.group.order // self.H_a.order


def proof_data(system: CosetSystem, m: int, a: Any) -> ProofData:
    G = system.group
    a = G.element(a)
    if not is_m_cover(system, m):
        raise PreconditionError(f"system is not a {m}-cover")
    if multiplicity(system, a) != m:
        raise PreconditionError(f"{a} is covered {multiplicity(system, a)} times, not m={m}")
    inside = set(containing(system, a))
    J = [j for j in range(system.k) if j not in inside]
    if len(J) > MAX_J:
        raise CapacityError(f"|J|={len(J)} exceeds {MAX_J}")
    chis, zetas = [], []
    for j in J:
        c = system.cosets[j]
        shift = G.sub(c.rep, a)
        chi = separating_character(c.subgroup, shift)
        chis.append(chi)
        zetas.append(evaluate(chi, shift))
    return ProofData(system, m, a, J, chis, zetas, base_subgroup(system, a))


def psi_values(system: CosetSystem, m: int, a: Any) -> dict[Element, complex]:
    """``Psi(x) = prod_j (chi_j(x) - zeta_j)`` tabulated on all of ``G``."""
    data = proof_data(system, m, a)
    return _psi_table(data)


def _psi_table(data: ProofData) -> dict[Element, complex]:
    table = {}
    for x in data.system.group.elements:
        value = 1 + 0j
        for chi, zeta in zip(data.chis, data.zetas):
            value *= evaluate(chi, x).value - zeta.value
        table[x] = value
    return table


# an exact element of Z[roots of unity]: phase -> integer multiplicity
Cyclotomic = dict


def _cyclo_value(c: Cyclotomic) -> complex:
    return sum((n * cmath.exp(2j * pi * float(ph)) for ph, n in c.items()), 0j)


def exact_coefficients(data: ProofData) -> dict[tuple[int, ...], Cyclotomic]:
    """``c(psi)`` as exact formal sums of roots of unity, keyed by exponent tuple.

    Expanding ``prod (chi_j - zeta_j)`` one factor at a time groups the same
    subset terms as the direct sum over ``I`` in J with ``prod_{j in I} chi_j = psi``.
    """
    G = data.system.group
    coeffs: dict[tuple[int, ...], Cyclotomic] = {trivial_character(G).exponents: {Fraction(0): 1}}
    for chi, zeta in zip(data.chis, data.zetas):
        minus_zeta = zeta.phase + Fraction(1, 2)
        nxt: dict[tuple[int, ...], Cyclotomic] = {}
        for key, c in coeffs.items():
            up = (Character(G, key) * chi).exponents
            _accumulate(nxt, up, c, Fraction(0))
            _accumulate(nxt, key, c, minus_zeta)
        coeffs = nxt
    return coeffs


def _accumulate(table: dict, key: tuple[int, ...], c: Cyclotomic, shift: Fraction) -> None:
    target = table.setdefault(key, {})
    for ph, n in c.items():
        ph = (ph + shift) % 1
        total = target.get(ph, 0) + n
        if total:
            target[ph] = total
        else:
            target.pop(ph, None)


def fourier_coefficients(system: CosetSystem, m: int, a: Any) -> dict[Character, complex]:
    """``c(psi)`` for every character ``psi`` (zero where no subset product lands)."""
    data = proof_data(system, m, a)
    exact = exact_coefficients(data)
    return {psi: _cyclo_value(exact.get(psi.exponents, {})) for psi in dual(system.group)}


def subset_coefficients(data: ProofData) -> dict[tuple[int, ...], complex]:
    """Direct sum over all subsets ``I`` of J; exponential cost, used as a cross-check."""
    G = data.system.group
    out: dict[tuple[int, ...], complex] = {}
    n = len(data.J)
    for mask in range(1 << n):
        psi = trivial_character(G)
        term = 1 + 0j
        for i in range(n):
            if mask >> i & 1:
                psi = psi * data.chis[i]
            else:
                term *= -data.zetas[i].value
        out[psi.exponents] = out.get(psi.exponents, 0j) + term
    return out


def product_one_minus_zeta(data: ProofData) -> complex:
    value = 1 + 0j
    for zeta in data.zetas:
        value *= 1 - zeta.value
    return value


def coset_representatives(G: AbelianGroup, sub: list[Character]) -> list[Character]:
    """Representatives of the cosets of the character subgroup ``sub`` in the dual of ``G``."""
    seen: set[tuple[int, ...]] = set()
    reps = []
    for psi in dual(G):
        if psi.exponents in seen:
            continue
        reps.append(psi)
        seen.update((psi * chi).exponents for chi in sub)
    return reps


def verify_divisibility(system: CosetSystem, m: int, a: Any) -> BoundReport:
    """Re-run the character argument showing that ``N_a`` divides ``prod_{j in J} (1 - zeta_j)``.

    Residual checks (floating point, tolerance 1e-9):

    * ``Psi`` vanishes off ``H_a`` and ``Psi * chi == Psi`` for ``chi`` annihilating ``H_a``;
    * the coefficients reconstruct ``Psi`` and are constant on cosets of that annihilator;
    * ``sum c(psi) == prod (1 - zeta_j) == N_a * sum_r c(psi_r)``.

    Exact checks: the valuation criterion for ``n = N_a`` with the orders of the
    ``zeta_j``, and ``k - m >= f(N_a)``.
    """
    data = proof_data(system, m, a)
    G = system.group
    big_n = data.n_a
    H_perp = annihilator(data.H_a)
    psi_tab = _psi_table(data)
    exact = exact_coefficients(data)
    coeff = {psi.exponents: _cyclo_value(exact.get(psi.exponents, {})) for psi in dual(G)}

    off = max((abs(v) for x, v in psi_tab.items() if x not in data.H_a), default=0.0)
    invariance = max(
        (abs(psi_tab[x] * evaluate(chi, x).value - psi_tab[x]) for chi in H_perp for x in G.elements), default=0.0
    )
    recon = 0.0
    for x in G.elements:
        total = sum(c * evaluate(Character(G, key), x).value for key, c in coeff.items())
        recon = max(recon, abs(total - psi_tab[x]))
    constancy = max(
        (abs(coeff[(Character(G, key) * chi).exponents] - c) for key, c in coeff.items() for chi in H_perp), default=0.0
    )
    total = sum(coeff.values(), 0j)
    prod_value = product_one_minus_zeta(data)
    reps = coset_representatives(G, H_perp)
    folded = big_n * sum((coeff[r.exponents] for r in reps), 0j)

    orders = [z.order for z in data.zetas]
    report = BoundReport(
        "character-divisibility",
        details={
            "a": data.a,
            "N_a": big_n,
            "|J|": len(data.J),
            "zeta_orders": orders,
            "zeta_phases": [z.phase for z in data.zetas],
            "criterion": {p: [s, e] for p, (s, e) in divisibility_deficits(big_n, orders).items()},
        },
    )
    report.add("Psi", "max |Psi(x)| off H_a", off, TOLERANCE, relation="<")
    report.add("Psi", "max |Psi chi - Psi| over chi in H_a-perp", invariance, TOLERANCE, relation="<")
    report.add("c", "max |sum c(psi) psi(x) - Psi(x)|", recon, TOLERANCE, relation="<")
    report.add("c", "max |c(psi chi) - c(psi)| over chi in H_a-perp", constancy, TOLERANCE, relation="<")
    report.add("c", "|sum c(psi) - prod(1 - zeta_j)|", abs(total - prod_value), TOLERANCE, relation="<")
    report.add("c", "|sum c(psi) - N_a sum_r c(psi_r)|", abs(total - folded), TOLERANCE, relation="<")
    report.add(big_n, "N_a divides prod(1 - zeta_j)", divides_product(big_n, orders), True, relation="==")
    report.add(big_n, "k - m >= f(N_a)", system.k - m, mycielski_f(big_n))
    return report
