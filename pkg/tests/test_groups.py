"""Subgroup lattices, order complexes, and chain cochain complexes."""

import pytest

from isocx.field import GF
from isocx.groups import (
    AbelianPGroup,
    build_group_complex,
    enumerate_subgroups,
    order_complex,
    product_decomposition_check,
    reduced_homology,
    steinberg_rank,
)
from isocx.isogeny import sigma_pow


def test_group_validation():
    with pytest.raises(ValueError):
        AbelianPGroup(4, (1,))
    with pytest.raises(ValueError):
        AbelianPGroup(2, (1, 2))
    with pytest.raises(ValueError):
        AbelianPGroup(2, (0,))
    with pytest.raises(ValueError):
        AbelianPGroup(2, (1, 1, 1, 1))
    G = AbelianPGroup(2, (2, 1))
    assert G.order == 8
    assert G.moduli() == (4, 2)


def test_enumerate_counts():
    assert len(enumerate_subgroups(AbelianPGroup(2, (1, 1)), 2)) == 3
    assert len(enumerate_subgroups(AbelianPGroup(2, (1, 1)))) == 5
    assert len(enumerate_subgroups(AbelianPGroup(3, (1,)))) == 2
    assert len(enumerate_subgroups(AbelianPGroup(2, (2,)))) == 3
    for p, M in ((2, 2), (3, 2), (2, 3)):
        G = AbelianPGroup(p, (M, M))
        assert len(enumerate_subgroups(G, p)) == p + 1


def test_subgroup_counts_match_divisor_sums():
    # order-p^r subgroups of (Z/p^M)^2 are counted by sigma(p^r) for M >= r
    for p, M, r_top in ((2, 3, 3), (3, 2, 2)):
        G = AbelianPGroup(p, (M, M))
        for r in range(0, r_top + 1):
            subs = enumerate_subgroups(G, p ** r)
            assert len(subs) == sigma_pow(p, r)


def test_subgroup_canonical_forms_are_distinct():
    G = AbelianPGroup(2, (2, 2))
    subs = enumerate_subgroups(G)
    sets = [s.elements() for s in subs]
    assert len(set(sets)) == len(subs)
    for s, els in zip(subs, sets):
        assert len(els) == s.order
    # containment agrees with element sets
    for a, ea in zip(subs, sets):
        for b, eb in zip(subs, sets):
            assert a.contains(b) == (eb <= ea)


def test_invariant_factors_and_flags():
    G = AbelianPGroup(2, (2, 2))
    order4 = enumerate_subgroups(G, 4)
    assert len(order4) == 7
    elementary = [s for s in order4 if s.is_elementary(2)]
    cyclic = [s for s in order4 if s.invariant_factors() == (4,)]
    assert len(elementary) == 1
    assert len(cyclic) == 6
    assert elementary[0].invariant_factors() == (2, 2)
    assert elementary[0].killed_by_p()
    assert not cyclic[0].killed_by_p()


def test_order_complex_shapes():
    assert order_complex(AbelianPGroup(2, (1,))).faces == {}
    assert order_complex(AbelianPGroup(3, (1,))).top_dim == -1
    X = order_complex(AbelianPGroup(2, (1, 1)))
    assert X.face_count(0) == 3
    assert X.top_dim == 0
    Y = order_complex(AbelianPGroup(2, (1, 1, 1)))
    assert Y.face_count(0) == 14
    assert Y.face_count(1) == 21
    assert Y.top_dim == 1


def test_reduced_homology_basic_spaces():
    # empty complex: only the empty face
    empty = order_complex(AbelianPGroup(2, (1,)))
    assert reduced_homology(empty) == {-1: (1, ())}
    # a single vertex is contractible
    point = order_complex(AbelianPGroup(2, (2,)))
    assert point.face_count(0) == 1
    assert reduced_homology(point) == {}


def test_homology_of_rank_three_elementary_group():
    X = order_complex(AbelianPGroup(2, (1, 1, 1)))
    assert reduced_homology(X) == {1: (8, ())}
    assert reduced_homology(X, GF(2)) == {1: 8}


def test_solomon_tits_vanishing():
    # groups with pG != 0 have contractible subgroup posets
    for p in (2, 3):
        for exps in ((2,), (3,), (2, 1), (2, 2)):
            X = order_complex(AbelianPGroup(p, exps))
            assert reduced_homology(X) == {}, (p, exps)


def test_steinberg_ranks():
    assert steinberg_rank(2, 2) == 2
    assert steinberg_rank(3, 2) == 3
    assert steinberg_rank(2, 3) == 8
    assert steinberg_rank(3, 3) == 27
    for p in (2, 3):
        for r in (2, 3):
            X = order_complex(AbelianPGroup(p, (1,) * r))
            assert reduced_homology(X) == {r - 2: (steinberg_rank(p, r), ())}


def test_build_group_complex_profiles():
    cx = build_group_complex(2, 1, 1)
    assert cx.dims == [0, 3]
    assert cx.cohomology() == {1: 3}
    assert build_group_complex(2, 2, 2).cohomology() == {2: 2}
    assert build_group_complex(3, 2, 2).cohomology() == {2: 3}
    assert build_group_complex(2, 3, 3).cohomology() == {}
    assert build_group_complex(2, 0, 1).cohomology() == {0: 1}


def test_top_rank_counts_elementary_subgroups():
    # H^r rank = (number of elementary rank-r subgroups) * steinberg rank
    for p, r, M in ((2, 1, 1), (3, 1, 1), (2, 2, 2), (3, 2, 2), (2, 3, 3)):
        G = AbelianPGroup(p, (M, M))
        n = sum(
            1 for s in enumerate_subgroups(G, p ** r) if s.is_elementary(r)
        )
        prof = build_group_complex(p, r, M).cohomology()
        want = n * steinberg_rank(p, r)
        assert prof.get(r, 0) == want


def test_torsion_level_does_not_change_cohomology():
    assert build_group_complex(2, 1, 3).cohomology() == {1: 3}
    assert build_group_complex(3, 1, 2).cohomology() == {1: 4}


def test_build_group_complex_validation():
    with pytest.raises(ValueError):
        build_group_complex(2, 2, 1)


def test_product_decomposition():
    assert product_decomposition_check(2, 1, 1)
    assert product_decomposition_check(2, 2, 2)
    assert product_decomposition_check(3, 2, 2)
    assert product_decomposition_check(2, 3, 3)
