"""
Finite simple undirected graphs: complement, disjoint union, connectivity,
exact isomorphism testing and automorphism group generators.

Isomorphism and automorphism search is plain backtracking over vertex maps in
ascending vertex order, pruned by Weisfeiler-Lehman vertex hashes and by
adjacency with the vertices already placed. No canonical labeling is used.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

import config
import perm
from errors import CapExceededError, ValidationError
from perm import GenSet, Permutation

logger = logging.getLogger(__name__)


# ============= GRAPH =============
@dataclass(frozen=True)
class Graph:
    n: int
    edges: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"graph needs at least one vertex, got {self.n}")
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge ({u}, {v}) out of range 0..{self.n - 1}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, 'edges', frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'Graph':
        """Like the constructor but rejects duplicate edges instead of merging them"""
        seen = set()
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            seen.add(key)
        return cls(n, frozenset(seen))

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> 'Graph':
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), frozenset((index[u], index[v]) for u, v in g.edges()))

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def sorted_edges(self) -> List[Tuple[int, int]]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def path_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.path_graph(n))


def cycle_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.cycle_graph(n))


def complete_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(n))


def is_tree(x: Graph) -> bool:
    return nx.is_tree(x.to_networkx())


def is_connected(x: Graph) -> bool:
    return nx.is_connected(x.to_networkx())


def induced_subgraph(x: Graph, vertices: Sequence[int]) -> Graph:
    """Induced subgraph relabeled 0..k-1 in ascending vertex order"""
    vertices = sorted(vertices)
    index = {v: i for i, v in enumerate(vertices)}
    edges = [(index[u], index[v]) for u, v in x.edges if u in index and v in index]
    return Graph(len(vertices), frozenset(edges))


def is_automorphism(x: Graph, p: Permutation) -> bool:
    if p.degree != x.n:
        return False
    return all(x.has_edge(p(u), p(v)) for u, v in x.edges)


# ============= CONSTRUCTIONS =============
def complement(x: Graph) -> Graph:
    return Graph.from_networkx(nx.complement(x.to_networkx()))


def disjoint_union(parts: Sequence[Graph]) -> Tuple[Graph, List[int]]:
    """Union with vertices of parts[i] shifted by offsets[i]"""
    if not parts:
        raise ValidationError("disjoint union needs at least one graph")
    offsets = []
    edges = []
    total = 0
    for part in parts:
        offsets.append(total)
        edges.extend((u + total, v + total) for u, v in part.edges)
        total += part.n
    return Graph(total, frozenset(edges)), offsets


# ============= ISOMORPHISM SEARCH =============
def vertex_invariants(x: Graph) -> List[Tuple]:
    """Degree plus WL refinement hashes; equal for vertices related by any isomorphism"""
    hashes = nx.weisfeiler_lehman_subgraph_hashes(x.to_networkx(), iterations=max(1, x.n))
    return [(x.degree(v), tuple(hashes[v])) for v in range(x.n)]


class VertexMatcher:
    """Backtracking extension of partial vertex maps from x onto y"""

    def __init__(self, x: Graph, y: Graph, x_invariants: Optional[List[Tuple]] = None,
                 y_invariants: Optional[List[Tuple]] = None):
        self.x = x
        self.y = y
        inv_x = x_invariants if x_invariants is not None else vertex_invariants(x)
        inv_y = y_invariants if y_invariants is not None else vertex_invariants(y)
        by_class: Dict[Tuple, List[int]] = {}
        for w in range(y.n):
            by_class.setdefault(inv_y[w], []).append(w)
        self.candidates = [by_class.get(inv_x[v], []) for v in range(x.n)]
        self.nodes = 0

    def extend(self, fixed: Optional[Dict[int, int]] = None) -> Optional[Permutation]:
        x, y = self.x, self.y
        if x.n != y.n:
            return None
        fixed = dict(fixed or {})
        mapping: Dict[int, int] = {}
        placed: List[int] = []
        for u, w in fixed.items():
            if w in mapping.values() or w not in self.candidates[u]:
                return None
            if not self._consistent(u, w, mapping, placed):
                return None
            mapping[u] = w
            placed.append(u)
        order = [v for v in range(x.n) if v not in fixed]
        used = set(mapping.values())
        if self._backtrack(order, 0, mapping, placed, used):
            return Permutation(tuple(mapping[v] for v in range(x.n)))
        return None

    def _consistent(self, u: int, w: int, mapping: Dict[int, int], placed: List[int]) -> bool:
        adj_u = self.x.adjacency[u]
        adj_w = self.y.adjacency[w]
        for v in placed:
            if (v in adj_u) != (mapping[v] in adj_w):
                return False
        return True

    def _backtrack(self, order: List[int], pos: int, mapping: Dict[int, int],
                   placed: List[int], used: set) -> bool:
        if pos == len(order):
            return True
        u = order[pos]
        for w in self.candidates[u]:
            if w in used:
                continue
            self.nodes += 1
            if not self._consistent(u, w, mapping, placed):
                continue
            mapping[u] = w
            placed.append(u)
            used.add(w)
            if self._backtrack(order, pos + 1, mapping, placed, used):
                return True
            del mapping[u]
            placed.pop()
            used.discard(w)
        return False


def _check_cap(n: int):
    if n > config.ISO_SEARCH_CAP:
        raise CapExceededError('ISO_SEARCH_CAP', config.ISO_SEARCH_CAP, n)


def are_isomorphic(x: Graph, y: Graph) -> Optional[Permutation]:
    """Witness w with w(v) the image in y of vertex v of x, or None"""
    if x.n != y.n or len(x.edges) != len(y.edges):
        return None
    _check_cap(x.n)
    inv_x = vertex_invariants(x)
    inv_y = vertex_invariants(y)
    if sorted(inv_x) != sorted(inv_y):
        return None
    matcher = VertexMatcher(x, y, inv_x, inv_y)
    witness = matcher.extend()
    logger.debug("isomorphism search on %d vertices: %d nodes, %s", x.n, matcher.nodes,
                 'found' if witness else 'none')
    return witness


# ============= AUTOMORPHISMS =============
def automorphism_generators(x: Graph) -> GenSet:
    """Generators for Aut(x) along the point stabilizer chain of 0, 1, ..., n-1"""
    _check_cap(x.n)
    invariants = vertex_invariants(x)
    matcher = VertexMatcher(x, x, invariants, invariants)
    gens: List[Permutation] = []
    for level in range(x.n - 1, -1, -1):
        fixed = {v: v for v in range(level)}
        orbit = _orbit(level, gens)
        for c in range(level + 1, x.n):
            if c in orbit or invariants[c] != invariants[level]:
                continue
            g = matcher.extend({**fixed, level: c})
            if g is not None:
                gens.append(g)
                orbit = _orbit(level, gens)
        logger.debug("automorphism search level %d: orbit size %d", level, len(orbit))
    logger.debug("automorphism search on %d vertices: %d generators, %d nodes",
                 x.n, len(gens), matcher.nodes)
    return GenSet(x.n, tuple(gens))


def _orbit(point: int, gens: List[Permutation]) -> set:
    seen = {point}
    queue = deque([point])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = g(a)
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def automorphism_order(x: Graph) -> int:
    return perm.group_order(automorphism_generators(x))


# ============= COMPONENTS =============
@dataclass(frozen=True)
class IsoClass:
    representative: int
    members: Tuple[int, ...]
    # witnesses[i] maps the representative's vertices onto members[i]'s (local labels)
    witnesses: Tuple[Permutation, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ComponentDecomposition:
    parent: Graph
    components: Tuple[Tuple[int, ...], ...]
    iso_classes: Tuple[IsoClass, ...]

    def component_graph(self, index: int) -> Graph:
        return induced_subgraph(self.parent, self.components[index])


def connected_components(x: Graph) -> ComponentDecomposition:
    components = sorted((tuple(sorted(c)) for c in nx.connected_components(x.to_networkx())),
                        key=lambda c: c[0])
    graphs = [induced_subgraph(x, c) for c in components]
    classes: List[Tuple[int, List[int], List[Permutation]]] = []
    for i, g in enumerate(graphs):
        for rep, members, witnesses in classes:
            w = are_isomorphic(graphs[rep], g)
            if w is not None:
                members.append(i)
                witnesses.append(w)
                break
        else:
            classes.append((i, [i], [Permutation.identity(g.n)]))
    iso_classes = tuple(IsoClass(rep, tuple(m), tuple(w)) for rep, m, w in classes)
    return ComponentDecomposition(x, tuple(components), iso_classes)


def aut_order_by_components(x: Graph) -> int:
    """prod over iso-classes of m! * |Aut(C)|^m"""
    decomposition = connected_components(x)
    total = 1
    for cls in decomposition.iso_classes:
        rep = decomposition.component_graph(cls.representative)
        m = cls.multiplicity
        total *= math.factorial(m) * automorphism_order(rep) ** m
    return total
