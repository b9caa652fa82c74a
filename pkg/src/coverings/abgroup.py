"""Finite abelian groups ``C_{d_1} x ... x C_{d_r}`` with explicit subgroups and cosets.

Elements are tuples of residues.  Subgroups and cosets are stored
extensionally as frozensets of elements, which keeps everything transparent at
desk scale: element operations are guarded at order 10**6 and full subgroup
enumeration at order 512.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Any, Iterable, Iterator, Mapping, Sequence

from coverings.arith import is_prime, mycielski_f
from coverings.errors import CapacityError, DomainError, PreconditionError
from coverings.report import BoundReport

MAX_ELEMENT_ORDER = 10**6
MAX_ENUMERATION_ORDER = 512

Element = tuple[int, ...]


@dataclass(frozen=True)
class AbelianGroup:
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(int(d) for d in self.orders)
        if not orders or any(d < 1 for d in orders):
            raise DomainError(f"cyclic factor orders must be positive, got {self.orders!r}")
        object.__setattr__(self, "orders", orders)
        if prod(orders) > MAX_ELEMENT_ORDER:
            raise CapacityError(f"group order {prod(orders)} exceeds {MAX_ELEMENT_ORDER}")

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls((n,))

    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(d) for d in self.orders)))

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index_of(self, x: Element) -> int:
        return self._index[x]

    def element(self, x: Any) -> Element:
        """Coerce an int (rank 1 only) or a sequence into a reduced element."""
        if isinstance(x, int):
            if self.rank != 1:
                raise DomainError(f"integer shorthand needs a cyclic group, got {self}")
            x = (x,)
        x = tuple(x)
        if len(x) != self.rank:
            raise DomainError(f"element {x} has {len(x)} coordinates, group rank is {self.rank}")
        return tuple(int(c) % d for c, d in zip(x, self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple(-a % d for a, d in zip(x, self.orders))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.orders))

    def scale(self, c: int, x: Element) -> Element:
        return tuple(c * a % d for a, d in zip(x, self.orders))

    def element_order(self, x: Element) -> int:
        result = 1
        for a, d in zip(x, self.orders):
            o = d // gcd(a, d)
            result = result * o // gcd(result, o)
        return result

    def __str__(self) -> str:
        return " x ".join(f"C{d}" for d in self.orders)


@dataclass(frozen=True)
class Subgroup:
    group: AbelianGroup
    elements: frozenset
    generators: tuple[Element, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.group.identity not in self.elements:
            raise DomainError("a subgroup must contain the identity")
        if self.group.order % len(self.elements):
            raise DomainError(f"subgroup of order {len(self.elements)} cannot live in a group of order {self.group.order}")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Element) -> bool:
        return x in self.elements

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __len__(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[Element]:
        return sorted(self.elements)

    def is_closed(self) -> bool:
        G = self.group
        return all(G.sub(x, y) in self.elements for x in self.elements for y in self.elements)

    def __str__(self) -> str:
        if self.generators:
            return "<" + ", ".join(map(str, self.generators)) + ">"
        return "{" + ", ".join(map(str, self.sorted_elements())) + "}"


@dataclass(frozen=True)
class Coset:
    rep: Element
    subgroup: Subgroup

    def __post_init__(self) -> None:
        # normalize to the lexicographically least member
        G = self.subgroup.group
        least = min(G.add(self.rep, h) for h in self.subgroup.elements)
        object.__setattr__(self, "rep", least)

    @property
    def group(self) -> AbelianGroup:
        return self.subgroup.group

    @cached_property
    def members(self) -> frozenset:
        G = self.group
        return frozenset(G.add(self.rep, h) for h in self.subgroup.elements)

    def __contains__(self, x: Element) -> bool:
        return self.group.sub(x, self.rep) in self.subgroup.elements

    def __len__(self) -> int:
        return self.subgroup.order

    @property
    def is_proper(self) -> bool:
        """A proper coset does not contain the identity."""
        return self.group.identity not in self

    def __str__(self) -> str:
        return f"{self.rep}+{self.subgroup}"


@dataclass(frozen=True)
class CosetSystem:
    group: AbelianGroup
    cosets: tuple[Coset, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cosets", tuple(self.cosets))
        if not self.cosets:
            raise DomainError("a coset system needs at least one coset")
        if any(c.group != self.group for c in self.cosets):
            raise DomainError("all cosets must live in the same group")

    @property
    def k(self) -> int:
        return len(self.cosets)

    def __iter__(self) -> Iterator[Coset]:
        return iter(self.cosets)

    def __len__(self) -> int:
        return len(self.cosets)

    def without(self, index: int) -> "CosetSystem | None":
        rest = self.cosets[:index] + self.cosets[index + 1 :]
        return CosetSystem(self.group, rest) if rest else None

    def subsystem(self, indices: Iterable[int]) -> "CosetSystem":
        return CosetSystem(self.group, tuple(self.cosets[i] for i in indices))

    def __str__(self) -> str:
        return f"{self.group}: " + "{" + ", ".join(map(str, self.cosets)) + "}"

    def to_json(self, m: int) -> dict[str, Any]:
        return {
            "type": "abelian",
            "orders": list(self.group.orders),
            "m": m,
            "cosets": [
                {"rep": list(c.rep), "gens": [list(g) for g in (c.subgroup.generators or minimal_generators(c.subgroup))]}
                for c in self.cosets
            ],
        }


# -- subgroups --------------------------------------------------------------


def _closure(G: AbelianGroup, start: Iterable[Element], gens: Sequence[Element]) -> frozenset:
    seen = set(start)
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def subgroup_from_generators(G: AbelianGroup, gens: Iterable[Any]) -> Subgroup:
    gens = tuple(G.element(g) for g in gens)
    return Subgroup(G, _closure(G, [G.identity], gens), gens)


def trivial_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, frozenset([G.identity]), ())


def whole_group(G: AbelianGroup) -> Subgroup:
    gens = tuple(tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank))
    return Subgroup(G, frozenset(G.elements), gens)


def minimal_generators(H: Subgroup) -> tuple[Element, ...]:
    """A small generating set found greedily (not necessarily of minimum size)."""
    G = H.group
    gens: list[Element] = []
    span = frozenset([G.identity])
    for x in sorted(H.elements, key=lambda y: (-G.element_order(y), y)):
        if x not in span:
            gens.append(x)
            span = _closure(G, span, gens)
            if len(span) == H.order:
                break
    return tuple(gens)


def join(H1: Subgroup, H2: Subgroup) -> Subgroup:
    if H1.group != H2.group:
        raise DomainError("subgroups of different groups")
    G = H1.group
    return Subgroup(G, frozenset(G.add(x, y) for x in H1.elements for y in H2.elements))


def intersect(H1: Subgroup, H2: Subgroup) -> Subgroup:
    if H1.group != H2.group:
        raise DomainError("subgroups of different groups")
    return Subgroup(H1.group, H1.elements & H2.elements)


def intersect_all(G: AbelianGroup, subgroups: Iterable[Subgroup]) -> Subgroup:
    """Intersection of a family; the empty family gives ``G`` itself."""
    elements = frozenset(G.elements)
    for H in subgroups:
        elements &= H.elements
    return Subgroup(G, elements)


def index(G: AbelianGroup, H: Subgroup) -> int:
    return G.order // H.order


def all_subgroups(G: AbelianGroup) -> list[Subgroup]:
    """Every subgroup once, sorted by order then elements.

    Subgroups of an abelian group are sums of cyclic subgroups, so a
    breadth-first closure of the cyclic ones under ``+`` finds them all.
    """
    if G.order > MAX_ENUMERATION_ORDER:
        raise CapacityError(f"subgroup enumeration limited to order {MAX_ENUMERATION_ORDER}, got {G.order}")
    cyclic = {}
    for x in G.elements:
        H = subgroup_from_generators(G, [x])
        cyclic.setdefault(H.elements, H)
    found = {trivial_subgroup(G).elements: trivial_subgroup(G)}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclic.values():
                if C.elements <= S.elements:
                    continue
                J = join(S, C)
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    subgroups = []
    for H in found.values():
        subgroups.append(Subgroup(G, H.elements, minimal_generators(H)))
    subgroups.sort(key=lambda H: (H.order, sorted(H.elements)))
    return subgroups


def cosets_of(H: Subgroup) -> list[Coset]:
    """The ``[G:H]`` distinct cosets of ``H``, in order of representative."""
    G = H.group
    seen: set[Element] = set()
    out = []
    for x in G.elements:
        if x in seen:
            continue
        c = Coset(x, H)
        seen |= c.members
        out.append(c)
    return out


# -- covering function and cover predicates ----------------------------------


def multiplicity(system: CosetSystem, x: Any) -> int:
    x = system.group.element(x)
    return sum(1 for c in system.cosets if x in c)


def coverage(system: CosetSystem) -> dict[Element, int]:
    w = dict.fromkeys(system.group.elements, 0)
    for c in system.cosets:
        for x in c.members:
            w[x] += 1
    return w


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")


def is_m_cover(system: CosetSystem | None, m: int) -> bool:
    _check_m(m)
    if system is None:
        return False
    return min(coverage(system).values()) >= m


def is_exact_m_cover(system: CosetSystem, m: int) -> bool:
    _check_m(m)
    return all(v == m for v in coverage(system).values())


def irredundant_indices(system: CosetSystem, m: int) -> set[int]:
    _check_m(m)
    w = coverage(system)
    if min(w.values()) < m:
        return set(range(system.k))
    return {t for t, c in enumerate(system.cosets) if any(w[x] == m for x in c.members)}


def is_minimal_m_cover(system: CosetSystem, m: int) -> bool:
    return is_m_cover(system, m) and irredundant_indices(system, m) == set(range(system.k))


def containing(system: CosetSystem, a: Element) -> list[int]:
    return [s for s, c in enumerate(system.cosets) if a in c]


def base_subgroup(system: CosetSystem, a: Any) -> Subgroup:
    """Intersection of the subgroups whose cosets contain ``a`` (``G`` if none do)."""
    a = system.group.element(a)
    return intersect_all(system.group, (system.cosets[s].subgroup for s in containing(system, a)))


def n_a(system: CosetSystem, a: Any) -> int:
    return index(system.group, base_subgroup(system, a))


def minimalize(system: CosetSystem, m: int, keep: Iterable[int] = ()) -> list[int]:
    """Indices of a minimal m-subcover that retains every index in ``keep``.

    Any ``keep`` set made of cosets through a point covered exactly ``m`` times
    survives automatically, since such cosets are never redundant.
    """
    if not is_m_cover(system, m):
        raise PreconditionError(f"not a {m}-cover")
    keep = set(keep)
    current = list(range(system.k))
    for s in reversed(range(system.k)):
        if s in keep:
            continue
        trial = [i for i in current if i != s]
        if trial and is_m_cover(system.subsystem(trial), m):
            current = trial
    return current


# -- theorem checkers ---------------------------------------------------------


def check_theorem_1_3(system: CosetSystem, m: int) -> BoundReport:
    """Check ``N_a <= 2^(k-m)`` and ``k >= m + f(N_a)`` at every point covered exactly m times,
    and ``[G:G_t] <= 2^(k-m)``, ``k >= m + f([G:G_t])`` for every irredundant ``t``.

    A failing witness means a bug here, not in the theorem.
    """
    if not is_m_cover(system, m):
        raise PreconditionError(f"system is not a {m}-cover of {system.group}")
    G, k = system.group, system.k
    w = coverage(system)
    report = BoundReport("theorem-1.3", details={"group": str(G), "k": k, "m": m})
    tight = []
    for a in G.elements:
        if w[a] != m:
            continue
        big_n = n_a(system, a)
        report.add(a, "N_a <= 2^(k-m)", big_n, 2 ** (k - m), relation="<=")
        report.add(a, "k >= m + f(N_a)", k, m + mycielski_f(big_n))
        if k == m + mycielski_f(big_n):
            tight.append(a)
    irr = sorted(irredundant_indices(system, m))
    for t in irr:
        idx = index(G, system.cosets[t].subgroup)
        report.add(t, "[G:G_t] <= 2^(k-m)", idx, 2 ** (k - m), relation="<=")
        report.add(t, "k >= m + f([G:G_t])", k, m + mycielski_f(idx))
    report.details["irredundant"] = irr
    report.details["tight_points"] = tight
    return report


def check_corollary_1_1(system: CosetSystem, m: int, a: Any, K: Subgroup) -> BoundReport:
    """Both inequality chains of the subgroup-restricted corollary, for an abelian ambient group."""
    G = system.group
    a = G.element(a)
    if K.group != G:
        raise DomainError("K must be a subgroup of the system's group")
    if not is_m_cover(system, m):
        raise PreconditionError(f"system is not a {m}-cover")
    if multiplicity(system, a) != m:
        raise PreconditionError(f"{a} is covered {multiplicity(system, a)} times, not m={m}")
    k = system.k
    not_in_K = [s for s, c in enumerate(system.cosets) if not K <= c.subgroup]
    J_K = [s for s in not_in_K if a not in system.cosets[s]]
    H_a = base_subgroup(system, a)
    idx = K.order // intersect(K, H_a).order
    report = BoundReport("corollary-1.1", details={"k": k, "m": m, "a": a, "|K|": K.order, "[K:K cap H_a]": idx})
    report.add(a, "k-m >= #{s: a notin a_sG_s, K not<= G_s}", k - m, len(J_K))
    report.add(a, "#{s: a notin a_sG_s, K not<= G_s} >= f([K:K cap H_a])", len(J_K), mycielski_f(idx))
    applicable = [t for t in sorted(irredundant_indices(system, m)) if not K <= system.cosets[t].subgroup]
    if not applicable:
        report.add(None, "#{s: K not<= G_s} >= 1 + f([K:G_t cap K])", len(not_in_K), None, relation="n/a")
    for t in applicable:
        idx_t = K.order // intersect(K, system.cosets[t].subgroup).order
        report.add(t, "#{s: K not<= G_s} >= 1 + f([K:G_t cap K])", len(not_in_K), 1 + mycielski_f(idx_t))
    return report


def check_gao_geroldinger(G: AbelianGroup, cosets: Sequence[Coset]) -> BoundReport:
    """``k >= f(|G|)`` for proper cosets whose union is ``G`` minus the identity."""
    e = G.identity
    for c in cosets:
        if c.group != G:
            raise DomainError("coset from a different group")
        if not c.is_proper:
            raise PreconditionError(f"coset {c} contains the identity")
    union = frozenset().union(*(c.members for c in cosets))
    if union != frozenset(G.elements) - {e}:
        raise PreconditionError("the cosets do not cover every non-identity element")
    k = len(cosets)
    report = BoundReport("gao-geroldinger", details={"group": str(G), "|G|": G.order, "k": k})
    report.add(None, "k >= f(|G|)", k, mycielski_f(G.order))
    # adjoining {e} gives a 1-cover with e covered once and N_e = |G|
    closed = CosetSystem(G, (Coset(e, trivial_subgroup(G)), *cosets))
    report.add(e, "N_e of {e} + cosets == |G|", n_a(closed, e), G.order, relation="==")
    return report


# -- constructions ------------------------------------------------------------


def build_cp_cp_cover(p: int) -> CosetSystem:
    """The ``p + 1`` subgroups of order ``p`` in ``C_p x C_p``, each as a coset of itself."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p * p > MAX_ENUMERATION_ORDER:
        raise CapacityError(f"p^2 = {p * p} exceeds {MAX_ENUMERATION_ORDER}")
    G = AbelianGroup((p, p))
    lines = [(1, j) for j in range(p)] + [(0, 1)]
    return CosetSystem(G, tuple(Coset(G.identity, subgroup_from_generators(G, [g])) for g in lines))


def build_partition(G: AbelianGroup, H: Subgroup | None = None) -> CosetSystem:
    """All cosets of ``H`` (default: the trivial subgroup), an exact 1-cover with ``k = [G:H]``."""
    H = H or trivial_subgroup(G)
    return CosetSystem(G, tuple(cosets_of(H)))


def zcover_to_group(system) -> CosetSystem:
    """Map a cover of Z onto the cyclic group of order its period: ``a(n)`` becomes ``a + <n>``."""
    L = system.period
    G = AbelianGroup.cyclic(L)
    return CosetSystem(G, tuple(Coset((c.a % L,), subgroup_from_generators(G, [c.n])) for c in system.classes))


# -- quotients ----------------------------------------------------------------


def quotient_group(G: AbelianGroup, H: Subgroup) -> tuple[AbelianGroup, dict[Element, Element]]:
    """Present ``G/H`` as a product of cyclic groups and return it with the projection map.

    Generators are found by backtracking, preferring elements of large order,
    so that each new generator meets the span of the previous ones trivially.
    """
    label = {}
    for c in cosets_of(H):
        for x in c.members:
            label[x] = c.rep
    reps = sorted(set(label.values()))
    q_order = len(reps)
    order_of = {r: _quotient_order(G, label, r) for r in reps}

    def span(gens: list[Element]) -> set[Element]:
        out = {label[G.identity]}
        frontier = list(out)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = label[G.add(x, g)]
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out

    candidates = sorted((r for r in reps if order_of[r] > 1), key=lambda r: (-order_of[r], r))

    def search(gens: list[Element], size: int) -> list[Element] | None:
        if size == q_order:
            return gens
        for r in candidates:
            trial = gens + [r]
            s = len(span(trial))
            if s == size * order_of[r]:
                found = search(trial, s)
                if found is not None:
                    return found
        return None

    gens = search([], 1)
    assert gens is not None
    Q = AbelianGroup(tuple(order_of[g] for g in gens) or (1,))
    inverse = {}
    for coeffs in Q.elements:
        x = G.identity
        for c, g in zip(coeffs, gens):
            x = G.add(x, G.scale(c, g))
        inverse[label[x]] = coeffs
    return Q, {x: inverse[label[x]] for x in G.elements}


def _quotient_order(G: AbelianGroup, label: Mapping[Element, Element], r: Element) -> int:
    zero = label[G.identity]
    x, n = r, 1
    while label[x] != zero:
        x = G.add(x, r)
        n += 1
    return n


def quotient_system(system: CosetSystem) -> tuple[CosetSystem, dict[Element, Element]]:
    """Reduce modulo the intersection of all the subgroups; indices ``[G:G_s]`` are preserved."""
    G = system.group
    H = intersect_all(G, (c.subgroup for c in system.cosets))
    Q, proj = quotient_group(G, H)
    cosets = []
    for c in system.cosets:
        image = frozenset(proj[x] for x in c.subgroup.elements)
        cosets.append(Coset(proj[c.rep], Subgroup(Q, image)))
    return CosetSystem(Q, tuple(cosets)), proj


# -- JSON ---------------------------------------------------------------------


def system_from_json(data: Mapping[str, Any]) -> tuple[CosetSystem, int]:
    if data.get("type") != "abelian":
        raise DomainError(f"expected an abelian system, got type {data.get('type')!r}")
    try:
        G = AbelianGroup(tuple(int(d) for d in data["orders"]))
        m = int(data.get("m", 1))
        cosets = []
        for entry in data["cosets"]:
            H = subgroup_from_generators(G, [tuple(g) for g in entry.get("gens", [])])
            cosets.append(Coset(G.element(entry["rep"]), H))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed abelian system: {exc}") from exc
    return CosetSystem(G, tuple(cosets)), m
