"""
Exhaustive small corpora for cross-checking the decision procedures:
connected graphs, trees up to isomorphism, a fixed list of small groups,
and random permutation generating sets.
"""

import logging
from functools import lru_cache
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

import table_group
import tree_alg
from errors import ValidationError
from graph_core import Graph
from perm import GenSet, Permutation
from table_group import GroupKind, TableGroup

logger = logging.getLogger(__name__)

# graph_atlas_g covers every graph on up to 7 vertices
ATLAS_MAX_VERTICES = 7


# ============= GRAPHS =============
@lru_cache(maxsize=None)
def connected_graphs(max_n: int, min_n: int = 1) -> Tuple[Graph, ...]:
    """One graph per isomorphism class of connected graphs with min_n..max_n vertices"""
    if max_n > ATLAS_MAX_VERTICES:
        raise ValidationError(f"graph corpus stops at {ATLAS_MAX_VERTICES} vertices, asked for {max_n}")
    out = [
        Graph.from_networkx(g)
        for g in nx.graph_atlas_g()
        if min_n <= g.number_of_nodes() <= max_n and nx.is_connected(g)
    ]
    logger.debug("graph corpus %d..%d vertices: %d graphs", min_n, max_n, len(out))
    return tuple(out)


# ============= TREES =============
def tree_code(x: Graph) -> str:
    """Canonical code of an unrooted tree: AHU code at its center, subdividing a central edge"""
    centers = sorted(nx.center(x.to_networkx()))
    if len(centers) == 1:
        return tree_alg.RootedTree.from_graph(x, centers[0]).codes[centers[0]]
    anchored = tree_alg.RootedTree.from_graph(tree_alg.subdivide_edge(x, *centers), x.n)
    return 'e' + anchored.codes[x.n]


@lru_cache(maxsize=None)
def trees(n: int) -> Tuple[Graph, ...]:
    """Every tree on n vertices up to isomorphism; the count is checked against distinct codes"""
    if n < 1:
        raise ValidationError(f"tree needs at least one vertex, got {n}")
    if n == 1:
        return (Graph(1),)
    out = tuple(Graph.from_networkx(t) for t in nx.nonisomorphic_trees(n))
    distinct = {tree_code(t) for t in out}
    if len(distinct) != len(out):
        raise ValidationError(f"tree corpus for n={n} has {len(out)} trees but {len(distinct)} codes")
    logger.debug("tree corpus n=%d: %d trees", n, len(out))
    return out


def all_trees(max_n: int) -> List[Graph]:
    return [t for n in range(1, max_n + 1) for t in trees(n)]


# ============= GROUPS =============
def _perm_subgroup(name: str, degree: int, *cycle_gens) -> TableGroup:
    gens = GenSet(degree, tuple(Permutation.from_cycles(degree, *c) for c in cycle_gens))
    return table_group.table_from_genset(gens, name=name)


@lru_cache(maxsize=None)
def group_corpus(max_order: Optional[int] = None) -> Tuple[TableGroup, ...]:
    """Cyclic 2-16, dihedral 3-8, S3, S4, Q8, A4, A5, and V4 and D4 inside S4"""
    groups = [table_group.make_standard(GroupKind.CYCLIC, n) for n in range(2, 17)]
    groups += [table_group.make_standard(GroupKind.DIHEDRAL, n) for n in range(3, 9)]
    groups += [
        table_group.make_standard(GroupKind.SYMMETRIC, 3),
        table_group.make_standard(GroupKind.SYMMETRIC, 4),
        table_group.make_standard(GroupKind.QUATERNION),
        table_group.make_standard(GroupKind.ALTERNATING, 4),
        table_group.make_standard(GroupKind.ALTERNATING, 5),
        _perm_subgroup('V4', 4, [(0, 1), (2, 3)], [(0, 2), (1, 3)]),
        _perm_subgroup('D4 in S4', 4, [(0, 1, 2, 3)], [(0, 2)]),
    ]
    if max_order is not None:
        groups = [g for g in groups if g.n <= max_order]
    return tuple(groups)


def solvable_group_corpus(max_order: Optional[int] = None) -> Tuple[TableGroup, ...]:
    return tuple(g for g in group_corpus(max_order) if table_group.is_solvable_table(g))


# ============= RANDOM GENERATING SETS =============
def random_gensets(count: int, max_degree: int, max_gens: int = 3, seed: int = 0) -> List[GenSet]:
    """Degrees 1..max_degree and 1..max_gens generators, reproducible from seed"""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        degree = int(rng.integers(1, max_degree + 1))
        k = int(rng.integers(1, max_gens + 1))
        gens = tuple(Permutation(tuple(int(i) for i in rng.permutation(degree))) for _ in range(k))
        out.append(GenSet(degree, gens))
    return out
