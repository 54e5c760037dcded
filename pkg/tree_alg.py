"""
Tree machinery: canonical (AHU) codes, automorphism generators and orbits,
orbit-spanning subtrees, rooting at a fixed vertex or a subdivided fixed edge,
and the decomposition of a rooted tree's automorphism group into wreath
products over isomorphism classes of child subtrees.
"""

import logging
import math
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import groupby
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

import perm
from errors import NotAnOrbitError, NotATreeError, RootingError, ValidationError
from graph_core import Graph, induced_subgraph, is_tree
from perm import GenSet, Permutation

logger = logging.getLogger(__name__)

LEAF_CODE = '()'


# ============= ROOTED TREES =============
@dataclass(frozen=True)
class RootedTree:
    n: int
    parent: Tuple[int, ...]
    root: int

    def __post_init__(self):
        object.__setattr__(self, 'parent', tuple(int(p) for p in self.parent))
        if self.n < 1 or len(self.parent) != self.n:
            raise ValidationError(f"rooted tree needs {self.n} >= 1 parent entries, got {len(self.parent)}")
        if not (0 <= self.root < self.n) or self.parent[self.root] != self.root:
            raise ValidationError(f"root {self.root} must be its own parent")
        for v, p in enumerate(self.parent):
            if not (0 <= p < self.n):
                raise ValidationError(f"parent of {v} out of range: {p}")
            if p == v and v != self.root:
                raise ValidationError(f"vertex {v} is a second root")
        if len(self.bfs_order) != self.n:
            raise ValidationError("parent links contain a cycle or a detached part")

    @classmethod
    def from_graph(cls, x: Graph, root: int) -> 'RootedTree':
        _require_tree(x)
        parent = list(range(x.n))
        for child, par in nx.bfs_predecessors(x.to_networkx(), root):
            parent[child] = par
        return cls(x.n, tuple(parent), root)

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        kids: List[List[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if v != self.root:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def bfs_order(self) -> Tuple[int, ...]:
        order = [self.root]
        i = 0
        while i < len(order):
            order.extend(self.children[order[i]])
            i += 1
            if len(order) > self.n:
                break
        return tuple(order)

    @cached_property
    def codes(self) -> Tuple[str, ...]:
        codes: List[str] = [''] * self.n
        for v in reversed(self.bfs_order):
            codes[v] = '(' + ''.join(sorted(codes[c] for c in self.children[v])) + ')'
        return tuple(codes)

    def sorted_children(self, v: int) -> List[int]:
        """Children in canonical order: by code, ties by vertex index"""
        codes = self.codes
        return sorted(self.children[v], key=lambda c: (codes[c], c))

    def descendants(self, v: int) -> List[int]:
        out = [v]
        i = 0
        while i < len(out):
            out.extend(self.children[out[i]])
            i += 1
        return out

    def to_graph(self) -> Graph:
        return Graph(self.n, frozenset((v, p) for v, p in enumerate(self.parent) if v != self.root))


def _require_tree(x: Graph):
    if not is_tree(x):
        raise NotATreeError(f"graph on {x.n} vertices with {len(x.edges)} edges is not a tree")


def ahu_code(t: RootedTree, v: int) -> str:
    if not (0 <= v < t.n):
        raise ValidationError(f"vertex {v} not in tree of {t.n} vertices")
    return t.codes[v]


def subtree(t: RootedTree, v: int) -> Tuple[RootedTree, List[int]]:
    """Subtree at v relabeled in BFS order; vertex_map[i] is the original label of local i"""
    vertex_map = t.descendants(v)
    local = {u: i for i, u in enumerate(vertex_map)}
    parent = [local[t.parent[u]] if u != v else 0 for u in vertex_map]
    return RootedTree(len(vertex_map), tuple(parent), 0), vertex_map


def canonical_match(t: RootedTree, u: int, w: int) -> Dict[int, int]:
    """Isomorphism from the subtree at u onto the subtree at w, pairing children in canonical order.

    Matches compose: canonical_match(v, w) after canonical_match(u, v) equals canonical_match(u, w).
    """
    if t.codes[u] != t.codes[w]:
        raise ValidationError(f"subtrees at {u} and {w} are not isomorphic")
    out: Dict[int, int] = {}
    stack = [(u, w)]
    while stack:
        a, b = stack.pop()
        out[a] = b
        stack.extend(zip(t.sorted_children(a), t.sorted_children(b)))
    return out


def subdivide_edge(x: Graph, a: int, b: int) -> Graph:
    """Replace edge ab by a - n - b, where n is the new vertex"""
    if not x.has_edge(a, b):
        raise ValidationError(f"({a}, {b}) is not an edge")
    edges = set(x.edges) - {(min(a, b), max(a, b))}
    edges |= {(a, x.n), (b, x.n)}
    return Graph(x.n + 1, frozenset(edges))


# ============= AUTOMORPHISMS =============
def rooted_aut_generators(t: RootedTree) -> GenSet:
    """Swaps of canonically matched sibling subtrees, adjacent in canonical order"""
    gens: List[Permutation] = []
    for v in range(t.n):
        kids = t.sorted_children(v)
        for c1, c2 in zip(kids, kids[1:]):
            if t.codes[c1] != t.codes[c2]:
                continue
            images = list(range(t.n))
            for a, b in canonical_match(t, c1, c2).items():
                images[a] = b
                images[b] = a
            gens.append(Permutation(tuple(images)))
    return GenSet(t.n, tuple(gens))


def tree_aut_generators(x: Graph) -> GenSet:
    """Generators of Aut(x), anchored at the tree center.

    A central edge is subdivided first so that its flip appears as a sibling
    swap at the new root; the new vertex is fixed and dropped afterwards.
    """
    _require_tree(x)
    centers = sorted(nx.center(x.to_networkx()))
    if len(centers) == 1:
        return rooted_aut_generators(RootedTree.from_graph(x, centers[0]))
    anchored = RootedTree.from_graph(subdivide_edge(x, *centers), x.n)
    gens = rooted_aut_generators(anchored).gens
    return GenSet(x.n, tuple(Permutation(g.images[:x.n]) for g in gens))


@dataclass(frozen=True)
class OrbitPartition:
    graph: Graph
    orbits: Tuple[Tuple[int, ...], ...]
    generators: GenSet

    def orbit_of(self, v: int) -> Tuple[int, ...]:
        for orbit in self.orbits:
            if v in orbit:
                return orbit
        raise ValidationError(f"vertex {v} not in graph")


def aut_orbits(x: Graph) -> OrbitPartition:
    gens = tree_aut_generators(x)
    blocks = tuple(tuple(b) for b in perm.orbits(gens))
    return OrbitPartition(x, blocks, gens)


@dataclass(frozen=True)
class OrbitSubtree:
    """The minimal subtree spanning an orbit, in the parent tree's vertex labels"""
    vertices: FrozenSet[int]
    edges: FrozenSet[Tuple[int, int]]

    def leaves(self) -> FrozenSet[int]:
        degree = Counter()
        for u, v in self.edges:
            degree[u] += 1
            degree[v] += 1
        return frozenset(v for v in self.vertices if degree[v] <= 1)

    def is_subtree_of(self, other: 'OrbitSubtree') -> bool:
        return self.vertices <= other.vertices and self.edges <= other.edges

    @property
    def graph(self) -> Graph:
        vertices = sorted(self.vertices)
        return induced_subgraph(Graph(max(vertices) + 1, self.edges), vertices)


def orbit_subtree(x: Graph, delta: Sequence[int], partition: Optional[OrbitPartition] = None) -> OrbitSubtree:
    partition = partition or aut_orbits(x)
    delta = tuple(sorted(delta))
    if delta not in partition.orbits:
        raise NotAnOrbitError(f"{list(delta)} is not an orbit of Aut(T)")
    members = set(delta)
    keep = set(range(x.n))
    degree = {v: x.degree(v) for v in keep}
    queue = deque(v for v in keep if degree[v] <= 1 and v not in members)
    queued = set(queue)
    # Peel leaves outside the orbit until only the spanning subtree remains
    while queue:
        v = queue.popleft()
        keep.discard(v)
        for w in x.adjacency[v]:
            if w in keep:
                degree[w] -= 1
                if degree[w] <= 1 and w not in members and w not in queued:
                    queued.add(w)
                    queue.append(w)
    edges = frozenset(e for e in x.edges if e[0] in keep and e[1] in keep)
    return OrbitSubtree(frozenset(keep), edges)


# ============= ROOTING =============
class RootingKind(str, Enum):
    FIXED_VERTEX = 'fixed_vertex'
    DUMMY_EDGE_ROOT = 'dummy_edge_root'


@dataclass(frozen=True)
class Rooting:
    tree: RootedTree
    provenance: RootingKind
    # The subdivided edge when provenance is DUMMY_EDGE_ROOT; the new root is vertex original_n
    fixed_edge: Optional[Tuple[int, int]]
    original_n: int


def root_tree(x: Graph) -> Rooting:
    """Root at a vertex fixed by Aut(x), or at a new vertex on an edge whose ends form an orbit"""
    partition = aut_orbits(x)
    singles = [o[0] for o in partition.orbits if len(o) == 1]
    if singles:
        root = min(singles)
        logger.debug("rooting tree on %d vertices at fixed vertex %d", x.n, root)
        return Rooting(RootedTree.from_graph(x, root), RootingKind.FIXED_VERTEX, None, x.n)
    pairs = [o for o in partition.orbits if len(o) == 2 and x.has_edge(*o)]
    if not pairs:
        raise RootingError(f"no fixed vertex or fixed edge in tree on {x.n} vertices")
    a, b = min(pairs)
    logger.debug("rooting tree on %d vertices at dummy vertex on edge (%d, %d)", x.n, a, b)
    tree = RootedTree.from_graph(subdivide_edge(x, a, b), x.n)
    return Rooting(tree, RootingKind.DUMMY_EDGE_ROOT, (a, b), x.n)


# ============= WREATH DECOMPOSITION =============
@dataclass(frozen=True)
class WreathClass:
    tree: RootedTree
    code: str
    members: Tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)

    @cached_property
    def representative(self) -> RootedTree:
        return subtree(self.tree, self.members[0])[0]

    @cached_property
    def aut_order(self) -> int:
        return wreath_aut_order(self.representative)


@dataclass(frozen=True)
class WreathDecomposition:
    tree: RootedTree
    vertex: int
    classes: Tuple[WreathClass, ...]

    @property
    def t(self) -> int:
        return len(self.classes)

    def order(self) -> int:
        return math.prod(math.factorial(c.multiplicity) * c.aut_order ** c.multiplicity
                         for c in self.classes)


def child_partition(t: RootedTree, v: Optional[int] = None) -> WreathDecomposition:
    """Children of v (default: the root) grouped by code; classes in lexicographic code order"""
    v = t.root if v is None else v
    kids = t.sorted_children(v)
    classes = tuple(
        WreathClass(t, code, tuple(group))
        for code, group in groupby(kids, key=lambda c: t.codes[c])
    )
    return WreathDecomposition(t, v, classes)


def wreath_aut_order(t: RootedTree) -> int:
    """prod_i k_i! * |A_i|^k_i, evaluated bottom-up"""
    orders = [1] * t.n
    for v in reversed(t.bfs_order):
        total = 1
        for _, group in groupby(t.sorted_children(v), key=lambda c: t.codes[c]):
            group = list(group)
            total *= math.factorial(len(group)) * orders[group[0]] ** len(group)
        orders[v] = total
    return orders[t.root]
