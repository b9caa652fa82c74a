"""Exhaustive searches over small coset systems.

Three searches live here:

* :func:`verify_bounds_exhaustively` walks every multiset of at most ``max_k``
  cosets of a group, keeps the m-covers and checks both bound families on
  each one.  The fast path tabulates the covering function of a whole batch
  of systems at once with numpy; ``naive=True`` runs the object-level
  :func:`~coverings.abgroup.check_theorem_1_3` on each system instead.
* :func:`min_proper_coset_cover` is a branch-and-bound set cover on bitmasks.
* :func:`min_multiset_for_divisibility` brute-forces the smallest multiset of
  root-of-unity orders whose product of ``(1 - zeta)`` is divisible by ``n``.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

from coverings import abgroup
from coverings.abgroup import AbelianGroup, Coset, CosetSystem
from coverings.arith import factorize, mycielski_f, prime_powers_up_to
from coverings.cyclotomic import OrderMultiset, divides_product
from coverings.errors import CapacityError, DomainError
from coverings.report import BoundReport

log = logging.getLogger(__name__)

MAX_SEARCH_K = 6
MAX_SWEEP_ORDER = 64
MAX_GG_ORDER = 64
MAX_PROPER_COSETS = 4096
MAX_AUTOMORPHISM_CANDIDATES = 10**6
MAX_DIVISIBILITY_N = 30
BATCH_ROWS = 200_000
TIGHT_SAMPLE = 5
MINIMAL_SAMPLE = 10_000


# -- cosets and bitmasks --------------------------------------------------------


def enumerate_cosets(G: AbelianGroup, proper_only: bool = False) -> list[Coset]:
    """All cosets of all subgroups (ordered by subgroup, then representative)."""
    out = []
    for H in abgroup.all_subgroups(G):
        for c in abgroup.cosets_of(H):
            if not proper_only or c.is_proper:
                out.append(c)
    if len(out) > MAX_PROPER_COSETS:
        raise CapacityError(f"{len(out)} cosets exceeds {MAX_PROPER_COSETS}")
    return out


@dataclass(frozen=True)
class CoverBitmask:
    """One bit per group element (element index order of ``G.elements``)."""

    bits: int
    width: int

    @classmethod
    def from_coset(cls, c: Coset) -> "CoverBitmask":
        G = c.group
        bits = 0
        for x in c.members:
            bits |= 1 << G.index_of(x)
        return cls(bits, G.order)

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    def __or__(self, other: "CoverBitmask") -> "CoverBitmask":
        return CoverBitmask(self.bits | other.bits, self.width)

    def __and__(self, other: "CoverBitmask") -> "CoverBitmask":
        return CoverBitmask(self.bits & other.bits, self.width)


def covered_at_least(masks: Iterable[int], width: int, m: int) -> int:
    """Bitmask of the points hit by at least ``m`` of ``masks``.

    Bit-sliced saturating counter: ``level[i]`` holds the points seen ``>= i`` times.
    """
    level = [(1 << width) - 1] + [0] * m
    for b in masks:
        for i in range(m, 0, -1):
            level[i] |= level[i - 1] & b
    return level[m]


def is_m_cover_bits(masks: Sequence[int], width: int, m: int) -> bool:
    return covered_at_least(masks, width, m) == (1 << width) - 1


# -- automorphisms ----------------------------------------------------------------


def automorphisms(G: AbelianGroup) -> list[tuple[int, ...]]:
    """Automorphisms of ``G`` as permutations of element indices.

    Each is fixed by the images of the standard generators; an image of the
    i-th generator must be killed by ``d_i``, and the induced map must be onto.
    """
    basis_images = []
    for d in G.orders:
        basis_images.append([y for y in G.elements if G.scale(d, y) == G.identity])
    if prod(len(c) for c in basis_images) > MAX_AUTOMORPHISM_CANDIDATES:
        raise CapacityError(f"automorphism search space too large for {G}")
    perms = []
    for images in itertools.product(*basis_images):
        perm = []
        for x in G.elements:
            y = G.identity
            for c, img in zip(x, images):
                y = G.add(y, G.scale(c, img))
            perm.append(G.index_of(y))
        if len(set(perm)) == G.order:
            perms.append(tuple(perm))
    return perms


def coset_permutations(G: AbelianGroup, cosets: Sequence[Coset]) -> list[np.ndarray]:
    """The action of every automorphism on a coset list that is closed under automorphisms."""
    position = {c.members: i for i, c in enumerate(cosets)}
    out = []
    for perm in automorphisms(G):
        image = []
        for c in cosets:
            moved = frozenset(G.elements[perm[G.index_of(x)]] for x in c.members)
            image.append(position[moved])
        out.append(np.array(image, dtype=np.int64))
    return out


def _canonical_rows(idx: np.ndarray, perms: Sequence[np.ndarray]) -> np.ndarray:
    """Boolean mask of rows that are lexicographically least in their automorphism orbit."""
    keep = np.ones(len(idx), dtype=bool)
    for perm in perms:
        img = np.sort(perm[idx], axis=1)
        diff = img != idx
        first = diff.argmax(axis=1)
        has = diff.any(axis=1)
        rows = np.arange(len(idx))
        smaller = has & (img[rows, first] < idx[rows, first])
        keep &= ~smaller
    return keep


# -- exhaustive bound sweep -----------------------------------------------------


@dataclass
class SearchConfig:
    orders: tuple[int, ...]
    max_k: int = 4
    m: int = 1
    max_m: int | None = None
    proper_cosets_only: bool = False
    dedup_by_symmetry: bool = False
    naive: bool = False
    collect_minimal: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        self.orders = tuple(self.orders)
        if not 1 <= self.max_k <= MAX_SEARCH_K:
            raise CapacityError(f"max_k must lie in 1..{MAX_SEARCH_K}, got {self.max_k}")
        if self.m < 1 or (self.max_m is not None and self.max_m < self.m):
            raise DomainError(f"bad multiplicity range m={self.m}, max_m={self.max_m}")
        if prod(self.orders) > MAX_SWEEP_ORDER:
            raise CapacityError(f"exhaustive search limited to order {MAX_SWEEP_ORDER}")

    @property
    def m_values(self) -> range:
        return range(self.m, (self.max_m or self.m) + 1)


@dataclass
class SweepStats:
    systems_examined: int = 0
    covers_found: int = 0
    minimal_covers: int = 0
    counterexamples: int = 0
    tight_systems: int = 0
    tight_witnesses: list = field(default_factory=list)
    counterexample_witnesses: list = field(default_factory=list)
    minimal_systems: list = field(default_factory=list)

    def merge(self, other: "SweepStats") -> None:
        self.systems_examined += other.systems_examined
        self.covers_found += other.covers_found
        self.minimal_covers += other.minimal_covers
        self.counterexamples += other.counterexamples
        self.tight_systems += other.tight_systems
        self.tight_witnesses = (self.tight_witnesses + other.tight_witnesses)[:TIGHT_SAMPLE]
        self.counterexample_witnesses = (self.counterexample_witnesses + other.counterexample_witnesses)[:TIGHT_SAMPLE]
        self.minimal_systems = (self.minimal_systems + other.minimal_systems)[:MINIMAL_SAMPLE]

    def as_dict(self) -> dict:
        return {
            "systems_examined": self.systems_examined,
            "covers_found": self.covers_found,
            "minimal_covers": self.minimal_covers,
            "counterexamples": self.counterexamples,
            "tight_systems": self.tight_systems,
            "tight_witnesses": self.tight_witnesses,
        }


class _GroupTables:
    """Per-group arrays shared by every batch."""

    def __init__(self, G: AbelianGroup, cosets: Sequence[Coset]):
        if G.order > 63:
            raise CapacityError("vectorized sweep packs subgroups into 63-bit masks")
        self.G = G
        self.cosets = list(cosets)
        n = G.order
        self.member = np.zeros((len(cosets), n), dtype=bool)
        self.sub_mask = np.zeros(len(cosets), dtype=np.int64)
        self.coset_index = np.zeros(len(cosets), dtype=np.int64)
        for i, c in enumerate(cosets):
            for x in c.members:
                self.member[i, G.index_of(x)] = True
            bits = 0
            for h in c.subgroup.elements:
                bits |= 1 << G.index_of(h)
            self.sub_mask[i] = bits
            self.coset_index[i] = n // c.subgroup.order
        self.full = (1 << n) - 1
        top = max(n, 2) + 1
        self.f_table = np.array([mycielski_f(i) if i else 0 for i in range(top)], dtype=np.int64)

    def describe(self, row: Sequence[int]) -> list[str]:
        return [str(self.cosets[i]) for i in row]


def _multisets(n_items: int, k: int, first: int | None = None) -> np.ndarray:
    if first is None:
        it = itertools.combinations_with_replacement(range(n_items), k)
        flat = np.fromiter(itertools.chain.from_iterable(it), dtype=np.int64)
        return flat.reshape(-1, k)
    rest = itertools.combinations_with_replacement(range(first, n_items), k - 1)
    flat = np.fromiter(itertools.chain.from_iterable((first, *r) for r in rest), dtype=np.int64)
    return flat.reshape(-1, k)


def _popcount(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values.astype(np.uint64)).astype(np.int64)


def _sweep_batch(
    tab: _GroupTables, idx: np.ndarray, m_values: Iterable[int], collect: bool = False
) -> dict[int, SweepStats]:
    n, k = tab.G.order, idx.shape[1]
    mem = tab.member[idx]  # rows x k x n
    W = mem.sum(axis=1)
    min_w = W.min(axis=1)
    out = {}
    for m in m_values:
        stats = SweepStats(systems_examined=len(idx))
        cover = min_w >= m
        if k < m or not cover.any():
            out[m] = stats
            continue
        c_idx, c_mem, c_W = idx[cover], mem[cover], W[cover]
        rows = len(c_idx)
        bad = np.zeros(rows, dtype=bool)
        tight = np.zeros(rows, dtype=bool)
        budget = k - m
        subs = tab.sub_mask[c_idx]
        for a in range(n):
            at_m = c_W[:, a] == m
            if not at_m.any():
                continue
            inter = np.where(c_mem[:, :, a], subs, tab.full)
            inter = np.bitwise_and.reduce(inter, axis=1)
            big_n = n // _popcount(inter)
            f_n = tab.f_table[big_n]
            bad |= at_m & ((big_n > 2**budget) | (f_n > budget))
            tight |= at_m & (f_n == budget)
        # coset j is irredundant iff it contains a point covered exactly m times
        irr = (c_mem & (c_W == m)[:, None, :]).any(axis=2)
        idx_t = tab.coset_index[c_idx]
        f_t = tab.f_table[idx_t]
        bad |= (irr & ((idx_t > 2**budget) | (f_t > budget))).any(axis=1)
        stats.covers_found = rows
        minimal = irr.all(axis=1)
        stats.minimal_covers = int(minimal.sum())
        if collect:
            stats.minimal_systems = [tuple(int(i) for i in r) for r in c_idx[minimal][:MINIMAL_SAMPLE]]
        stats.counterexamples = int(bad.sum())
        stats.tight_systems = int(tight.sum())
        stats.tight_witnesses = [{"m": m, "cosets": tab.describe(r)} for r in c_idx[tight][:TIGHT_SAMPLE]]
        stats.counterexample_witnesses = [{"m": m, "cosets": tab.describe(r)} for r in c_idx[bad][:TIGHT_SAMPLE]]
        out[m] = stats
    return out


def _naive_batch(
    tab: _GroupTables, idx: np.ndarray, m_values: Iterable[int], collect: bool = False
) -> dict[int, SweepStats]:
    out = {m: SweepStats() for m in m_values}
    for row in idx:
        system = CosetSystem(tab.G, tuple(tab.cosets[i] for i in row))
        for m in out:
            stats = out[m]
            stats.systems_examined += 1
            if not abgroup.is_m_cover(system, m):
                continue
            stats.covers_found += 1
            report = abgroup.check_theorem_1_3(system, m)
            if len(report.details["irredundant"]) == system.k:
                stats.minimal_covers += 1
                if collect and len(stats.minimal_systems) < MINIMAL_SAMPLE:
                    stats.minimal_systems.append(tuple(int(i) for i in row))
            if not report.verdict:
                stats.counterexamples += 1
                if len(stats.counterexample_witnesses) < TIGHT_SAMPLE:
                    stats.counterexample_witnesses.append({"m": m, "cosets": tab.describe(row)})
            if report.details["tight_points"]:
                stats.tight_systems += 1
                if len(stats.tight_witnesses) < TIGHT_SAMPLE:
                    stats.tight_witnesses.append({"m": m, "cosets": tab.describe(row)})
    return out


def _run_chunk(args) -> dict[int, SweepStats]:
    config, k, first = args
    tab, perms = _prepare(config)
    return _process(tab, perms, _multisets(len(tab.cosets), k, first), config)


_PREPARED: dict = {}


def _prepare(config: SearchConfig):
    key = (config.orders, config.proper_cosets_only, config.dedup_by_symmetry)
    if key not in _PREPARED:
        G = AbelianGroup(config.orders)
        cosets = enumerate_cosets(G, proper_only=config.proper_cosets_only)
        perms = coset_permutations(G, cosets) if config.dedup_by_symmetry else []
        _PREPARED.clear()
        _PREPARED[key] = (_GroupTables(G, cosets), perms)
    return _PREPARED[key]


def _process(tab: _GroupTables, perms, idx: np.ndarray, config: SearchConfig) -> dict[int, SweepStats]:
    totals = {m: SweepStats() for m in config.m_values}
    for start in range(0, len(idx), BATCH_ROWS):
        chunk = idx[start : start + BATCH_ROWS]
        if perms:
            chunk = chunk[_canonical_rows(chunk, perms)]
        if not len(chunk):
            continue
        batch = _naive_batch if config.naive else _sweep_batch
        for m, stats in batch(tab, chunk, config.m_values, config.collect_minimal).items():
            totals[m].merge(stats)
    return totals


def verify_bounds_exhaustively(config: SearchConfig) -> BoundReport:
    """Check every m-cover made of at most ``max_k`` cosets of the configured group.

    Systems are multisets enumerated in nondecreasing coset order.  The report
    carries one zero-counterexample witness per ``m`` plus sweep statistics.
    """
    tab, perms = _prepare(config)
    totals = {m: SweepStats() for m in config.m_values}
    tasks = [(config, k, first) for k in range(1, config.max_k + 1) for first in range(len(tab.cosets))]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_chunk, tasks, chunksize=8))
    else:
        results = [
            _process(tab, perms, _multisets(len(tab.cosets), k), config) for k in range(1, config.max_k + 1)
        ]
    for res in results:
        for m, stats in res.items():
            totals[m].merge(stats)
    report = BoundReport(
        "exhaustive-theorem-1.3",
        details={"group": str(tab.G), "cosets": len(tab.cosets), "max_k": config.max_k},
    )
    overall = SweepStats()
    for m, stats in totals.items():
        report.add(m, "counterexamples == 0", stats.counterexamples, 0, relation="==")
        report.details[f"m={m}"] = stats.as_dict()
        overall.merge(stats)
    # every m sees the same systems; covers are counted once per m they qualify for
    overall.systems_examined = totals[config.m].systems_examined
    report.details.update(overall.as_dict())
    if config.collect_minimal:
        report.details["minimal_systems"] = {
            m: [[str(tab.cosets[i]) for i in row] for row in stats.minimal_systems] for m, stats in totals.items()
        }
    report.details["counterexample_witnesses"] = overall.counterexample_witnesses
    log.info("%s: %d systems, %d covers", tab.G, overall.systems_examined, overall.covers_found)
    return report


def abelian_presentations(max_order: int, include_trivial: bool = True) -> list[tuple[int, ...]]:
    """Every ordered tuple of cyclic orders ``>= 2`` with product ``<= max_order``.

    Ordered factorizations include each isomorphism type several times
    (``(6,)``, ``(2, 3)``, ``(3, 2)``), which doubles as an isomorphism-invariance test.
    """
    out: list[tuple[int, ...]] = [(1,)] if include_trivial else []

    def extend(prefix: tuple[int, ...], room: int) -> None:
        for d in range(2, room + 1):
            t = prefix + (d,)
            out.append(t)
            extend(t, room // d)

    extend((), max_order)
    return sorted(out, key=lambda t: (prod(t), t))


def sweep_theorem_1_3(max_order: int = 12, max_k: int = 4, max_m: int = 4, jobs: int = 1) -> BoundReport:
    """Run :func:`verify_bounds_exhaustively` over every presentation of order ``<= max_order``."""
    report = BoundReport("sweep-theorem-1.3", details={"max_order": max_order, "max_k": max_k, "max_m": max_m})
    totals = SweepStats()
    per_group = {}
    for orders in abelian_presentations(max_order):
        sub = verify_bounds_exhaustively(SearchConfig(orders, max_k=max_k, m=1, max_m=max_m, jobs=jobs))
        stats = SweepStats(
            systems_examined=sub.details["systems_examined"],
            covers_found=sub.details["covers_found"],
            minimal_covers=sub.details["minimal_covers"],
            counterexamples=sub.details["counterexamples"],
            tight_systems=sub.details["tight_systems"],
        )
        totals.merge(stats)
        per_group[str(orders)] = {"covers_found": stats.covers_found, "counterexamples": stats.counterexamples}
        report.add(orders, "counterexamples == 0", stats.counterexamples, 0, relation="==")
    report.details.update(totals.as_dict())
    report.details["groups"] = per_group
    return report


# -- Gao-Geroldinger minima -------------------------------------------------------


@dataclass
class MinCoverResult:
    k_min: int
    witness: tuple[Coset, ...]
    nodes: int
    candidates: int

    def __iter__(self):
        return iter((self.k_min, self.witness))


def maximal_cosets(cosets: Sequence[Coset]) -> list[Coset]:
    """Drop every coset strictly contained in another one of the list."""
    out = []
    for c in cosets:
        if not any(c.members < d.members for d in cosets):
            out.append(c)
    return out


def min_proper_coset_cover(G: AbelianGroup, dedup_by_symmetry: bool = False) -> MinCoverResult:
    """Fewest proper cosets whose union is ``G`` minus the identity.

    Any proper coset can be enlarged to a maximal proper coset, so only those
    are branched on.  Depth-first search with iterative deepening on ``k``;
    the branch always covers the lowest uncovered element and a branch is cut
    when ``remaining slots * largest coset < uncovered``.  With
    ``dedup_by_symmetry`` the first choice is taken up to automorphisms fixing
    that element.
    """
    if G.order > MAX_GG_ORDER:
        raise CapacityError(f"proper coset cover search limited to order {MAX_GG_ORDER}")
    target = ((1 << G.order) - 1) & ~(1 << G.index_of(G.identity))
    if not target:
        return MinCoverResult(0, (), 1, 0)
    cands = maximal_cosets(enumerate_cosets(G, proper_only=True))
    masks = [CoverBitmask.from_coset(c).bits for c in cands]
    biggest = max(m.bit_count() for m in masks)
    by_bit = [[i for i, b in enumerate(masks) if b >> x & 1] for x in range(G.order)]
    for lst in by_bit:
        lst.sort(key=lambda i: -masks[i].bit_count())

    first_bit = (target & -target).bit_length() - 1
    first_choices = by_bit[first_bit]
    if dedup_by_symmetry:
        first_choices = _orbit_representatives(G, cands, first_choices, first_bit)

    nodes = 0

    def dfs(covered: int, chosen: list[int], slots: int) -> list[int] | None:
        nonlocal nodes
        nodes += 1
        uncovered = target & ~covered
        if not uncovered:
            return chosen
        if slots * biggest < uncovered.bit_count():
            return None
        x = (uncovered & -uncovered).bit_length() - 1
        options = first_choices if not chosen else by_bit[x]
        for i in options:
            found = dfs(covered | masks[i], chosen + [i], slots - 1)
            if found is not None:
                return found
        return None

    k = 1
    while True:
        found = dfs(0, [], k)
        if found is not None:
            return MinCoverResult(k, tuple(cands[i] for i in found), nodes, len(cands))
        k += 1


def _orbit_representatives(G: AbelianGroup, cands: Sequence[Coset], choices: Sequence[int], bit: int) -> list[int]:
    position = {c.members: i for i, c in enumerate(cands)}
    stabilizer = [p for p in automorphisms(G) if p[bit] == bit]
    seen: set[int] = set()
    reps = []
    for i in choices:
        if i in seen:
            continue
        reps.append(i)
        for perm in stabilizer:
            moved = frozenset(G.elements[perm[G.index_of(x)]] for x in cands[i].members)
            seen.add(position[moved])
    return reps


# -- smallest multiset for the divisibility criterion -----------------------------


def divisibility_candidates(n: int, all_prime_powers: bool = False) -> list[int]:
    """Candidate root orders: prime powers up to ``2n`` (only powers of primes dividing ``n`` by default).

    Dropping an order whose prime does not divide ``n`` never breaks the
    criterion, so a minimal multiset uses none of them.
    """
    primes = None if all_prime_powers else list(factorize(n).primes)
    return prime_powers_up_to(2 * n, primes)


def min_multiset_for_divisibility(n: int, all_prime_powers: bool = False) -> tuple[int, OrderMultiset]:
    """Brute-force the smallest ``k`` (and a witness) with ``n | prod (1 - zeta_s)``."""
    if not 1 <= n <= MAX_DIVISIBILITY_N:
        raise CapacityError(f"brute force limited to 1 <= n <= {MAX_DIVISIBILITY_N}")
    if n == 1:
        return 0, OrderMultiset()
    cands = divisibility_candidates(n, all_prime_powers)
    k = 1
    while True:
        for combo in itertools.combinations_with_replacement(cands, k):
            if divides_product(n, combo):
                return k, OrderMultiset(combo)
        k += 1


def count_proper_cosets(G: AbelianGroup) -> int:
    return len(enumerate_cosets(G, proper_only=True))


def is_elementary_or_cyclic_2group(orders: Sequence[int]) -> bool:
    n = prod(orders)
    if n < 2 or n & (n - 1):
        return False
    return all(d == 2 for d in orders if d > 1) or sum(d > 1 for d in orders) == 1


def minimal_covers(config: SearchConfig) -> dict[int, list[CosetSystem]]:
    """The minimal m-covers met by the sweep (capped at ``MINIMAL_SAMPLE`` per m)."""
    config = SearchConfig(**{**config.__dict__, "collect_minimal": True, "jobs": 1})
    tab, perms = _prepare(config)
    totals = {m: SweepStats() for m in config.m_values}
    for k in range(1, config.max_k + 1):
        for m, stats in _process(tab, perms, _multisets(len(tab.cosets), k), config).items():
            totals[m].merge(stats)
    return {
        m: [CosetSystem(tab.G, tuple(tab.cosets[i] for i in row)) for row in stats.minimal_systems]
        for m, stats in totals.items()
    }
