from math import factorial

import pytest

from helpers import permutation_automorphisms

from superpot.ainf import ZERO, ClassLabel
from superpot.trees import (RibbonTree, TreeEnumerator, aut_order, brute_force_classes, enum_gr_minus,
                            enum_gr_rooted, euler_characteristic, join_at_vertex, join_rooted, split_at_edge,
                            split_at_flag)

E1 = ClassLabel(1, (1,), "e1")
E2 = ClassLabel(1, (0, 1), "e2")


def cls(n1, n2=0):
    return ClassLabel(n1 + n2, (n1, n2) if n2 else (n1,))


def test_single_class():
    found = enum_gr_minus(0, E1, [E1])
    assert len(found) == 1
    tree, aut = found[0]
    assert len(tree.labels) == 1 and aut == 1


def test_two_copies():
    found = enum_gr_minus(0, cls(2), [E1])
    shapes = sorted((len(t.labels), aut) for t, aut in found)
    assert shapes == [(1, 1), (2, 2)]


def test_star_with_zero_center():
    labels = [ZERO, E1, E1, E1]
    tree = RibbonTree(labels, [[1, 2, 3], [0], [0], [0]])
    assert aut_order(tree) == 3
    assert permutation_automorphisms(tree) == 3


def test_zero_vertex_needs_three_edges():
    with pytest.raises(ValueError):
        RibbonTree([ZERO, E1], [[1], [0]])


def test_exterior_vertex_has_one_edge():
    with pytest.raises(ValueError):
        RibbonTree([None, E1, E1], [[1, 2], [0], [0]])


@pytest.mark.parametrize("k,beta", [(0, cls(3)), (1, cls(2)), (2, cls(1)), (3, ZERO), (1, cls(1, 1)), (0, cls(2, 1))])
def test_euler_relation_and_automorphisms(k, beta):
    for tree, aut in TreeEnumerator([E1, E2]).unrooted(k, beta):
        assert tree.n_exterior() == k
        assert tree.total_class() == beta
        assert euler_characteristic(tree) == 1
        if len(tree.labels) <= 7:
            assert permutation_automorphisms(tree) == aut


@pytest.mark.parametrize("k,n", [(0, 2), (0, 3), (1, 2), (2, 1), (3, 0)])
def test_matches_brute_force(k, n):
    beta = cls(n)
    found = enum_gr_minus(k, beta, [E1])
    counts, _ = brute_force_classes(k, beta, [E1], 4)
    small = [(t, a) for t, a in found if len(t.interior()) <= 4]
    assert len(small) == len(counts)
    for t, a in small:
        assert counts[t.code()] == factorial(len(t.labels)) // a


def test_flag_split_round_trip():
    for tree, _ in enum_gr_minus(2, cls(2), [E1]):
        for v in tree.interior():
            for e in tree.adj[v]:
                l, comps = split_at_flag(tree, v, e)
                assert l == len(tree.adj[v]) - 1
                assert join_at_vertex(tree.labels[v], comps) == tree
                assert sum(c.inputs() for c in comps) == tree.n_exterior()


def test_edge_split_round_trip():
    for tree, _ in enum_gr_minus(1, cls(3), [E1]):
        for (a, b) in tree.interior_edges():
            for v in (a, b):
                g0, g1 = split_at_edge(tree, (a, b), v)
                assert join_rooted(g0, g1) == tree
                assert g0.total_class() + g1.total_class() == tree.total_class()


def test_split_rejects_exterior():
    tree = RibbonTree([E1, None], [[1], [0]])
    with pytest.raises(ValueError):
        split_at_flag(tree, 1, 0)
    with pytest.raises(ValueError):
        split_at_edge(tree, (0, 1), 0)


def test_rooted_trees_are_rigid():
    rooted = enum_gr_rooted(1, cls(2), [E1])
    assert rooted
    codes = {t.code() for t in rooted}
    assert len(codes) == len(rooted)
    for t in rooted:
        assert t.inputs() == 1 and aut_order(t) == 1


def test_rooted_counts_small():
    # one vertex e1 with the root and no inputs
    assert len(enum_gr_rooted(0, cls(1), [E1])) == 1
    # an e1 vertex carrying the input, or a zero vertex carrying an e1 leaf and the input in either order
    assert len(enum_gr_rooted(1, cls(1), [E1])) == 3


def test_empty_budget():
    assert enum_gr_minus(0, ZERO, [E1]) == []
    assert enum_gr_minus(2, ZERO, [E1]) == []
    counts, total = brute_force_classes(0, ZERO, [E1], 3)
    assert counts == {} and total == 0
