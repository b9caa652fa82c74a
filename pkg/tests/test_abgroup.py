import itertools

import pytest

from coverings.abgroup import (
    AbelianGroup,
    Coset,
    CosetSystem,
    all_subgroups,
    build_cp_cp_cover,
    build_partition,
    check_corollary_1_1,
    check_gao_geroldinger,
    check_theorem_1_3,
    cosets_of,
    coverage,
    index,
    intersect,
    irredundant_indices,
    is_exact_m_cover,
    is_m_cover,
    is_minimal_m_cover,
    minimalize,
    multiplicity,
    n_a,
    quotient_system,
    subgroup_from_generators,
    system_from_json,
    trivial_subgroup,
    whole_group,
    zcover_to_group,
)
from coverings.arith import mycielski_f
from coverings.errors import CapacityError, DomainError, PreconditionError
from coverings.search import abelian_presentations
from coverings.zcover import build_extremal_zcover


def brute_subgroups(G):
    """Every subset containing e and closed under subtraction."""
    others = [x for x in G.elements if x != G.identity]
    found = set()
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            s = frozenset((G.identity, *combo))
            if all(G.sub(x, y) in s for x in s for y in s):
                found.add(s)
    return found


def test_subgroup_from_generators_examples():
    C4 = AbelianGroup.cyclic(4)
    assert subgroup_from_generators(C4, [2]).elements == {(0,), (2,)}
    V = AbelianGroup((2, 2))
    assert subgroup_from_generators(V, [(1, 0)]).elements == {(0, 0), (1, 0)}
    C6 = AbelianGroup.cyclic(6)
    assert subgroup_from_generators(C6, [2, 3]).order == 6


@pytest.mark.parametrize(
    "orders, count",
    [((2,), 2), ((3,), 2), ((7,), 2), ((2, 2), 5), ((4,), 3), ((2, 2, 2), 16), ((2, 4), 8), ((12,), 6)],
)
def test_all_subgroups_counts(orders, count):
    assert len(all_subgroups(AbelianGroup(orders))) == count


@pytest.mark.parametrize("orders", [o for o in abelian_presentations(8) if len(o) <= 3])
def test_all_subgroups_match_brute_force(orders):
    G = AbelianGroup(orders)
    assert {H.elements for H in all_subgroups(G)} == brute_subgroups(G)


def test_all_subgroups_capacity():
    with pytest.raises(CapacityError):
        all_subgroups(AbelianGroup((1024,)))


@pytest.mark.parametrize("orders", abelian_presentations(24))
def test_lagrange_closure_and_coset_dichotomy(orders):
    G = AbelianGroup(orders)
    for H in all_subgroups(G):
        assert G.order % H.order == 0
        assert H.is_closed()
        cs = [Coset(x, H) for x in G.elements]
        for c1 in cs:
            for c2 in cs:
                assert c1.members == c2.members or not (c1.members & c2.members)
        assert len(cosets_of(H)) == index(G, H)


def test_coset_normalization_and_membership():
    G = AbelianGroup((6,))
    H = subgroup_from_generators(G, [3])
    c = Coset((5,), H)
    assert c.rep == (2,) and (5,) in c and (1,) not in c
    assert c == Coset((2,), H)


def test_intersect_and_index():
    G = AbelianGroup((3, 3))
    H1 = subgroup_from_generators(G, [(1, 0)])
    H2 = subgroup_from_generators(G, [(0, 1)])
    assert intersect(H1, H1) == H1
    assert intersect(H1, H2) == trivial_subgroup(G)
    assert intersect(H1, whole_group(G)) == H1
    assert index(G, H1) == 3
    assert index(G, whole_group(G)) == 1
    C12 = AbelianGroup((12,))
    assert index(C12, subgroup_from_generators(C12, [6])) == 6
    with pytest.raises(DomainError):
        intersect(H1, whole_group(AbelianGroup((9,))))


def test_multiplicity_examples():
    S = build_cp_cp_cover(2)
    assert multiplicity(S, (0, 0)) == 3
    assert all(multiplicity(S, x) == 1 for x in S.group.elements if x != (0, 0))
    G = AbelianGroup((4,))
    single = CosetSystem(G, (Coset((1,), subgroup_from_generators(G, [2])),))
    assert multiplicity(single, (0,)) == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_cp_cp_cover(p):
    S = build_cp_cp_cover(p)
    assert S.k == p + 1
    assert is_minimal_m_cover(S, 1)
    for c1, c2 in itertools.combinations(S.cosets, 2):
        assert intersect(c1.subgroup, c2.subgroup).order == 1
    assert 1 + S.k * (p - 1) == p * p
    assert len({c.subgroup.elements for c in S.cosets}) == p + 1


def test_cp_cp_rejects_composite():
    with pytest.raises(DomainError):
        build_cp_cp_cover(4)


def test_partition_is_exact():
    G = AbelianGroup((2, 6))
    for H in all_subgroups(G):
        S = build_partition(G, H)
        assert is_exact_m_cover(S, 1) and S.k == index(G, H)
        for t in range(S.k):
            assert not is_m_cover(S.without(t), 1)


def test_irredundant_matches_definition():
    S = CosetSystem(build_cp_cp_cover(2).group, build_cp_cp_cover(2).cosets + (build_cp_cp_cover(2).cosets[0],))
    expected = {t for t in range(S.k) if not is_m_cover(S.without(t), 1)}
    assert irredundant_indices(S, 1) == expected == {1, 2}


def test_n_a_examples():
    S = build_cp_cp_cover(2)
    assert n_a(S, (1, 0)) == 2
    assert n_a(S, (0, 0)) == 4
    G = AbelianGroup((6,))
    H = subgroup_from_generators(G, [2])
    assert n_a(CosetSystem(G, (Coset((0,), H),)), (0,)) == 2
    assert n_a(CosetSystem(G, (Coset((1,), H),)), (0,)) == 1


def test_theorem_1_3_cp_cp():
    for p in [2, 3, 5]:
        S = build_cp_cp_cover(p)
        report = check_theorem_1_3(S, 1)
        assert report.verdict
        assert all(n_a(S, x) == p for x in S.group.elements if x != S.group.identity)
        assert report.details["irredundant"] == list(range(p + 1))


def test_theorem_1_3_singletons_of_c8():
    S = build_partition(AbelianGroup((8,)))
    report = check_theorem_1_3(S, 1)
    assert report.verdict and S.k == 8 and 1 + mycielski_f(8) == 4


def test_theorem_1_3_precondition():
    G = AbelianGroup((4,))
    with pytest.raises(PreconditionError):
        check_theorem_1_3(CosetSystem(G, (Coset((0,), trivial_subgroup(G)),)), 1)


def test_corollary_trivial_k():
    S = build_cp_cp_cover(3)
    report = check_corollary_1_1(S, 1, (1, 0), trivial_subgroup(S.group))
    assert report.verdict
    assert report.details["[K:K cap H_a]"] == 1
    # K = {e} lies in every G_t, so the second chain is not applicable
    assert any(w.holds is None for w in report.witnesses)


def test_corollary_whole_group():
    S = build_cp_cp_cover(2)
    assert check_corollary_1_1(S, 1, (1, 0), whole_group(S.group)).verdict


def test_corollary_k_equal_to_irredundant_subgroup():
    S = build_cp_cp_cover(2)
    K = S.cosets[0].subgroup
    report = check_corollary_1_1(S, 1, (1, 0), K)
    assert report.verdict
    # t = 0 is skipped because K is inside G_0
    assert all(w.subject != 0 for w in report.witnesses if "G_t" in w.inequality)


def test_corollary_on_every_subgroup():
    for p in [2, 3]:
        S = build_cp_cp_cover(p)
        w = coverage(S)
        for K in all_subgroups(S.group):
            for a in S.group.elements:
                if w[a] == 1:
                    assert check_corollary_1_1(S, 1, a, K).verdict


def test_corollary_precondition():
    S = build_cp_cp_cover(2)
    with pytest.raises(PreconditionError):
        check_corollary_1_1(S, 1, (0, 0), whole_group(S.group))


def test_gao_geroldinger_examples():
    V = AbelianGroup((2, 2))
    x, y = (1, 0), (0, 1)
    c1 = Coset(y, subgroup_from_generators(V, [x]))
    c2 = Coset(x, subgroup_from_generators(V, [y]))
    assert check_gao_geroldinger(V, [c1, c2]).verdict
    C4 = AbelianGroup((4,))
    d1 = Coset((1,), subgroup_from_generators(C4, [2]))
    d2 = Coset((2,), trivial_subgroup(C4))
    assert check_gao_geroldinger(C4, [d1, d2]).verdict
    for orders in [(6,), (2, 4), (3, 3)]:
        G = AbelianGroup(orders)
        singles = [Coset(g, trivial_subgroup(G)) for g in G.elements if g != G.identity]
        report = check_gao_geroldinger(G, singles)
        assert report.verdict and report.details["k"] == G.order - 1


def test_gao_geroldinger_preconditions():
    C4 = AbelianGroup((4,))
    with pytest.raises(PreconditionError):
        check_gao_geroldinger(C4, [Coset((0,), subgroup_from_generators(C4, [2]))])
    with pytest.raises(PreconditionError):
        check_gao_geroldinger(C4, [Coset((1,), trivial_subgroup(C4))])


def test_zcover_to_group_preserves_structure():
    for k, m in [(3, 1), (4, 2), (5, 1), (6, 3)]:
        S = zcover_to_group(build_extremal_zcover(k, m))
        assert is_exact_m_cover(S, m)
        assert check_theorem_1_3(S, m).verdict


def test_minimalize_keeps_base_point_cosets():
    G = AbelianGroup((2, 2))
    S = CosetSystem(G, build_cp_cp_cover(2).cosets + (Coset((0, 0), whole_group(G)),))
    keep = [0]
    kept = minimalize(S, 1, keep)
    assert 0 in kept
    assert is_minimal_m_cover(S.subsystem(kept), 1)


def test_quotient_reduction_preserves_verdicts():
    # cosets of subgroups all containing <(0,2)> in C2 x C4; intersection nontrivial
    G = AbelianGroup((2, 4))
    big = [H for H in all_subgroups(G) if (0, 2) in H]
    for size in (2, 3):
        for combo in itertools.combinations([c for H in big for c in cosets_of(H)], size):
            S = CosetSystem(G, combo)
            Q, proj = quotient_system(S)
            assert Q.group.order < G.order
            for m in (1, 2):
                assert is_m_cover(S, m) == is_m_cover(Q, m)
                if is_m_cover(S, m):
                    assert irredundant_indices(S, m) == irredundant_indices(Q, m)
                    assert check_theorem_1_3(S, m).verdict == check_theorem_1_3(Q, m).verdict
                    for a in G.elements:
                        assert n_a(S, a) == n_a(Q, proj[a])
            assert [index(G, c.subgroup) for c in S] == [index(Q.group, c.subgroup) for c in Q]


def test_json_round_trip():
    S = build_cp_cp_cover(3)
    loaded, m = system_from_json(S.to_json(1))
    assert loaded == S and m == 1
    with pytest.raises(DomainError):
        system_from_json({"type": "abelian", "orders": [2], "cosets": [{"rep": [0, 0]}]})


def test_group_guards():
    with pytest.raises(DomainError):
        AbelianGroup(())
    with pytest.raises(CapacityError):
        AbelianGroup((1001, 1001))
    with pytest.raises(DomainError):
        AbelianGroup((2, 2)).element(1)
