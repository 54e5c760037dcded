"""
Trees: AHU codes, automorphism generators and orbits, orbit subtrees,
rooting and the wreath-product order formula.
"""

import itertools

import networkx as nx
import pytest

import corpus
import graph_core
import perm
import tree_alg
from conftest import graph
from errors import NotAnOrbitError, NotATreeError, ValidationError
from graph_core import Graph
from tree_alg import RootedTree, RootingKind

P2 = graph(2, (0, 1))
P3 = graph_core.path_graph(3)
P4 = graph_core.path_graph(4)
DOUBLE_STAR = graph(6, (0, 1), (0, 2), (0, 3), (1, 4), (1, 5))


def star(n):
    return graph(n + 1, *((0, i) for i in range(1, n + 1)))


# ============= ROOTED TREES AND CODES =============
def test_rooted_tree_validation():
    with pytest.raises(ValidationError):
        RootedTree(3, (0, 2, 1), 0)
    with pytest.raises(ValidationError):
        RootedTree(2, (0, 1), 0)
    with pytest.raises(ValidationError):
        RootedTree(2, (1,), 0)


def test_ahu_codes():
    leaf = RootedTree(1, (0,), 0)
    assert tree_alg.ahu_code(leaf, 0) == tree_alg.LEAF_CODE
    cherry = RootedTree(3, (0, 0, 0), 0)
    relabeled = RootedTree(3, (1, 1, 1), 1)
    assert tree_alg.ahu_code(cherry, 0) == tree_alg.ahu_code(relabeled, 1)
    at_end = RootedTree.from_graph(P3, 0)
    at_center = RootedTree.from_graph(P3, 1)
    assert tree_alg.ahu_code(at_end, 0) != tree_alg.ahu_code(at_center, 1)
    with pytest.raises(ValidationError):
        tree_alg.ahu_code(cherry, 5)


def test_codes_match_isomorphism():
    for n in range(1, 9):
        trees = corpus.trees(n)
        for x, y in itertools.combinations(trees, 2):
            assert corpus.tree_code(x) != corpus.tree_code(y)
            assert graph_core.are_isomorphic(x, y) is None
        for x in trees:
            shuffled = Graph(n, frozenset((n - 1 - u, n - 1 - v) for u, v in x.edges))
            assert corpus.tree_code(x) == corpus.tree_code(shuffled)


def test_subtree_relabels():
    t = RootedTree.from_graph(DOUBLE_STAR, 0)
    sub, vertex_map = tree_alg.subtree(t, 1)
    assert vertex_map == [1, 4, 5]
    assert sub.n == 3 and sub.codes[0] == '(()())'


def test_canonical_matches_compose():
    t = RootedTree.from_graph(star(3), 0)
    for a, b, c in itertools.permutations([1, 2, 3]):
        ab = tree_alg.canonical_match(t, a, b)
        bc = tree_alg.canonical_match(t, b, c)
        assert {u: bc[w] for u, w in ab.items()} == tree_alg.canonical_match(t, a, c)
    with pytest.raises(ValidationError):
        tree_alg.canonical_match(RootedTree.from_graph(DOUBLE_STAR, 0), 1, 2)


# ============= AUTOMORPHISMS AND ORBITS =============
@pytest.mark.parametrize('x, expected', [
    (P4, 2),
    (star(4), 24),
    (DOUBLE_STAR, 8),
    (P2, 2),
    (Graph(1), 1),
])
def test_tree_aut_order_spot_values(x, expected):
    gens = tree_alg.tree_aut_generators(x)
    assert perm.group_order(gens) == expected
    assert all(graph_core.is_automorphism(x, g) for g in gens.gens)


def test_tree_aut_generators_reject_non_trees():
    with pytest.raises(NotATreeError):
        tree_alg.tree_aut_generators(graph_core.complete_graph(3))
    with pytest.raises(NotATreeError):
        tree_alg.root_tree(Graph(2))


@pytest.mark.parametrize('x, expected', [
    (star(3), ((0,), (1, 2, 3))),
    (P2, ((0, 1),)),
    (P3, ((0, 2), (1,))),
])
def test_aut_orbits_spot_values(x, expected):
    assert tree_alg.aut_orbits(x).orbits == expected


def test_orbit_subtree_spot_values():
    assert tree_alg.orbit_subtree(P3, (0, 2)).vertices == frozenset({0, 1, 2})
    assert tree_alg.orbit_subtree(star(3), (1, 2, 3)).edges == star(3).edges
    sub = tree_alg.orbit_subtree(P3, (1,))
    assert sub.vertices == frozenset({1}) and not sub.edges
    assert sub.graph == Graph(1)
    with pytest.raises(NotAnOrbitError):
        tree_alg.orbit_subtree(P3, (0, 1))


def test_orbit_subtree_leaves_and_nesting(trees_up_to_10):
    for x in trees_up_to_10:
        partition = tree_alg.aut_orbits(x)
        subtrees = {o: tree_alg.orbit_subtree(x, o, partition) for o in partition.orbits}
        for orbit, sub in subtrees.items():
            assert sub.leaves() == frozenset(orbit)
            assert graph_core.is_tree(sub.graph)
            for v in sub.vertices:
                assert subtrees[partition.orbit_of(v)].is_subtree_of(sub)


# ============= ROOTING =============
def test_root_tree_spot_values():
    rooting = tree_alg.root_tree(P3)
    assert (rooting.tree.root, rooting.provenance) == (1, RootingKind.FIXED_VERTEX)
    rooting = tree_alg.root_tree(P2)
    assert rooting.provenance is RootingKind.DUMMY_EDGE_ROOT
    assert (rooting.tree.n, rooting.tree.root, rooting.fixed_edge) == (3, 2, (0, 1))
    assert rooting.tree.children[2] == (0, 1)
    assert tree_alg.root_tree(star(5)).tree.root == 0


def test_rooting_never_fails_and_preserves_aut_order(trees_up_to_10):
    for x in trees_up_to_10:
        rooting = tree_alg.root_tree(x)
        aut = graph_core.automorphism_order(x)
        assert tree_alg.wreath_aut_order(rooting.tree) == aut
        assert perm.group_order(tree_alg.tree_aut_generators(x)) == aut
        if rooting.provenance is RootingKind.DUMMY_EDGE_ROOT:
            assert graph_core.automorphism_order(rooting.tree.to_graph()) == aut


# ============= WREATH DECOMPOSITION =============
def test_child_partition():
    decomposition = tree_alg.child_partition(RootedTree.from_graph(star(4), 0))
    assert decomposition.t == 1
    assert decomposition.classes[0].multiplicity == 4
    assert decomposition.classes[0].representative.n == 1
    mixed = RootedTree(5, (0, 0, 0, 0, 3), 0)
    decomposition = tree_alg.child_partition(mixed)
    assert decomposition.t == 2
    assert sorted(c.multiplicity for c in decomposition.classes) == [1, 2]
    codes = [c.code for c in decomposition.classes]
    assert codes == sorted(codes)
    assert tree_alg.child_partition(RootedTree(1, (0,), 0)).t == 0


@pytest.mark.parametrize('t, expected', [
    (RootedTree.from_graph(star(4), 0), 24),
    (RootedTree(1, (0,), 0), 1),
    (RootedTree.from_graph(P3, 1), 2),
    (RootedTree.from_graph(DOUBLE_STAR, 0), 4),
])
def test_wreath_aut_order_spot_values(t, expected):
    assert tree_alg.wreath_aut_order(t) == expected
    assert tree_alg.child_partition(t).order() == expected


def test_tree_corpus_counts():
    assert [len(corpus.trees(n)) for n in range(1, 11)] == [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]
    for x in corpus.trees(7):
        assert nx.is_tree(x.to_networkx())
