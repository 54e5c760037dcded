"""
Representability decisions: is there a nontrivial homomorphism from a finite
group G into Aut(X)?

  - reduce_gi_to_abelian: graph isomorphism as representability of Z/pZ
  - decide_solvable_rep: solvable G on any graph, by a common prime factor
  - decide_perm_rep: nontrivial G -> S_n by exact search
  - decide_tree_rep: any G on a tree, recursing over the wreath decomposition
  - oracle_representable: brute force over all of Aut(X), used as ground truth
"""

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import primefactors, sieve
from sympy.utilities.iterables import partitions

import config
import graph_core
import perm
import table_group
import tree_alg
from errors import CapExceededError, InputError, NotSolvableError, ValidationError
from graph_core import Graph
from perm import GenSet, Permutation
from table_group import GroupKind, TableGroup

logger = logging.getLogger(__name__)

# Subgroup-lattice enumeration is only meant for the small cross-check groups
SUBGROUP_LATTICE_ORDER_CAP = 120


class Method(str, Enum):
    PRIME_FACTOR = 'prime_factor'
    RECURSIVE_TREE = 'recursive_tree'
    ORACLE_SEARCH = 'oracle_search'
    STAR_REDUCTION = 'star_reduction'


# ============= GROUP INPUT =============
@dataclass(frozen=True, eq=False)
class GroupInput:
    """A group given either by its Cayley table or by permutation generators"""
    table: Optional[TableGroup] = None
    genset: Optional[GenSet] = None

    def __post_init__(self):
        if (self.table is None) == (self.genset is None):
            raise InputError("group input needs exactly one of a table or a generating set")

    @classmethod
    def of(cls, group: Union['GroupInput', TableGroup, GenSet]) -> 'GroupInput':
        if isinstance(group, GroupInput):
            return group
        if isinstance(group, TableGroup):
            return cls(table=group)
        if isinstance(group, GenSet):
            return cls(genset=group)
        raise InputError(f"not a group: {type(group).__name__}")

    @property
    def kind(self) -> str:
        return 'table' if self.table is not None else 'perm'

    @cached_property
    def as_table(self) -> TableGroup:
        if self.table is not None:
            return self.table
        return table_group.table_from_genset(self.genset, name=f"permutation group of degree {self.genset.degree}")

    def order(self) -> int:
        if self.table is not None:
            return self.table.n
        return perm.group_order(self.genset)

    def abelianization_order(self) -> int:
        if self.table is not None:
            return table_group.abelianization_order(self.table)
        return perm.group_order(self.genset) // perm.group_order(perm.commutator_gens(self.genset))

    def is_solvable(self) -> bool:
        if self.table is not None:
            return table_group.is_solvable_table(self.table)
        return perm.is_solvable_perm(self.genset)

    def describe(self) -> str:
        if self.table is not None:
            return self.table.describe()
        return f"permutation group of degree {self.genset.degree} with {len(self.genset.gens)} generators"


# ============= WITNESSES AND VERDICTS =============
def extend_homomorphism(group: TableGroup, generators: Sequence[int],
                        images: Sequence[Permutation]) -> Optional[Dict[int, Permutation]]:
    """Extend generator images over the generated subgroup; None if some product disagrees"""
    if not images:
        raise ValidationError("no generator images to extend")
    identity = Permutation.identity(images[0].degree)
    phi: Dict[int, Permutation] = {0: identity}
    queue = [0]
    for h in queue:
        for s, img in zip(generators, images):
            k = group.mul(h, s)
            value = perm.compose(phi[h], img)
            known = phi.get(k)
            if known is None:
                phi[k] = value
                queue.append(k)
            elif known != value:
                return None
    return phi


@dataclass(frozen=True)
class HomWitness:
    """Images of a generating sequence of `group`, as permutations of the target's points"""
    group: TableGroup
    generators: Tuple[int, ...]
    images: Tuple[Permutation, ...]

    @property
    def degree(self) -> int:
        return self.images[0].degree if self.images else 0

    def image_map(self) -> Dict[int, Permutation]:
        phi = extend_homomorphism(self.group, self.generators, self.images)
        if phi is None:
            raise ValidationError("generator images violate the group law")
        return phi

    def validate(self, target: Optional[Graph] = None):
        if len(self.generators) != len(self.images) or not self.images:
            raise ValidationError("witness needs one image per generator")
        phi = self.image_map()
        if len(phi) != self.group.n:
            raise ValidationError("witness generators do not generate the group")
        if all(p.is_identity() for p in self.images):
            raise ValidationError("witness is the trivial homomorphism")
        if target is not None:
            for s, img in zip(self.generators, self.images):
                if not graph_core.is_automorphism(target, img):
                    raise ValidationError(f"image of element {s} is not an automorphism")

    def is_valid(self, target: Optional[Graph] = None) -> bool:
        try:
            self.validate(target)
        except ValidationError:
            return False
        return True

    def generator_label(self, index: int) -> str:
        element = self.generators[index]
        if self.group.labels is not None:
            return perm.cycle_notation(self.group.labels[element])
        return str(element)


@dataclass(frozen=True)
class Verdict:
    representable: bool
    method: Method
    witness: Optional[HomWitness] = None
    stats: Dict[str, float] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return 'REPRESENTABLE' if self.representable else 'NOT_REPRESENTABLE'


def _elapsed_ms(started: float) -> float:
    return round((time.perf_counter() - started) * 1000.0, 3)


# ============= HOMOMORPHISM SEARCH =============
@dataclass(frozen=True, eq=False)
class TargetPool:
    """Candidate images bucketed by element order"""
    elements: Tuple[Permutation, ...]
    by_order: Dict[int, Tuple[Permutation, ...]]

    @classmethod
    def of(cls, elements: Sequence[Permutation]) -> 'TargetPool':
        buckets: Dict[int, List[Permutation]] = {}
        for p in elements:
            buckets.setdefault(perm.element_order(p), []).append(p)
        return cls(tuple(elements), {k: tuple(v) for k, v in buckets.items()})

    def candidates(self, order: int) -> List[Permutation]:
        """Images whose order divides `order`; nontrivial ones first"""
        out: List[Permutation] = []
        for d in sorted(self.by_order):
            if d > 1 and order % d == 0:
                out.extend(self.by_order[d])
        out.extend(self.by_order.get(1, ()))
        return out


class HomomorphismSearch:
    """Backtracking over images of a minimal generating sequence.

    An image's order must divide its generator's order, and the law is
    re-checked on the subgroup generated so far after every assignment.
    """

    def __init__(self, group: TableGroup, pool: Optional[TargetPool],
                 first_choices: Optional[Sequence[Permutation]] = None):
        self.group = group
        self.pool = pool
        self.generators = table_group.minimal_generating_sequence(group)
        self.orders = [int(group.element_orders[s]) for s in self.generators]
        self.first_choices = first_choices
        self.nodes = 0

    def _candidates(self, i: int) -> List[Permutation]:
        if i == 0 and self.first_choices is not None:
            return [p for p in self.first_choices if self.orders[0] % perm.element_order(p) == 0]
        if self.pool is None:
            raise ValueError("search needs a target pool past the first generator")
        return self.pool.candidates(self.orders[i])

    def run(self) -> Optional[Tuple[Permutation, ...]]:
        if not self.generators:
            return None
        found = self._extend([])
        logger.debug("homomorphism search from %s: %d nodes, %s",
                      self.group.describe(), self.nodes, 'found' if found else 'none')
        return found

    def _extend(self, images: List[Permutation]) -> Optional[Tuple[Permutation, ...]]:
        i = len(images)
        if i == len(self.generators):
            return tuple(images)
        must_move = i == len(self.generators) - 1 and all(p.is_identity() for p in images)
        for candidate in self._candidates(i):
            if must_move and candidate.is_identity():
                continue
            self.nodes += 1
            images.append(candidate)
            if extend_homomorphism(self.group, self.generators[:i + 1], images) is not None:
                found = self._extend(images)
                if found is not None:
                    return found
            images.pop()
        return None


@lru_cache(maxsize=None)
def _symmetric_pool(n: int) -> TargetPool:
    return TargetPool.of([Permutation(p) for p in itertools.permutations(range(n))])


@lru_cache(maxsize=None)
def cycle_type_representatives(n: int) -> Tuple[Permutation, ...]:
    """One permutation per conjugacy class of S_n, cycles laid out on consecutive points"""
    reps = []
    for part in partitions(n):
        lengths = sorted((k for k, m in part.items() for _ in range(m)), reverse=True)
        images = list(range(n))
        start = 0
        for length in lengths:
            for i in range(start, start + length):
                images[i] = start + (i - start + 1) % length
            start += length
        reps.append(Permutation(tuple(images)))
    return tuple(sorted(reps, key=lambda p: (p.is_identity(), p.images)))


@lru_cache(maxsize=256)
def _perm_rep_search(group: TableGroup, n: int) -> Tuple[Optional[Tuple[Permutation, ...]], int]:
    # Conjugating a homomorphism keeps it one, so the first image may be a class representative
    cyclic = len(table_group.minimal_generating_sequence(group)) == 1
    search = HomomorphismSearch(group, None if cyclic else _symmetric_pool(n), cycle_type_representatives(n))
    return search.run(), search.nodes


# ============= PERMUTATION REPRESENTABILITY =============
def decide_perm_rep(g, n: int) -> Verdict:
    """Nontrivial homomorphism G -> S_n, found by exact search.

    A nontrivial action on n points has a nontrivial orbit of size at most
    min(n, |G|), so degrees are tried in ascending order and the first
    witness is padded with fixed points up to degree n.
    """
    started = time.perf_counter()
    if n < 1:
        raise InputError(f"degree must be positive, got {n}")
    group = GroupInput.of(g)
    table = group.as_table
    if n == 1 or table.n == 1:
        return Verdict(False, Method.STAR_REDUCTION, stats={'elapsed_ms': _elapsed_ms(started), 'search_nodes': 0})
    if table.n > config.GROUP_ORDER_CAP:
        raise CapExceededError('GROUP_ORDER_CAP', config.GROUP_ORDER_CAP, table.n)
    total = 0
    for k in range(2, min(n, table.n) + 1):
        if k > config.PERM_REP_DEGREE_CAP:
            raise CapExceededError('PERM_REP_DEGREE_CAP', config.PERM_REP_DEGREE_CAP, k)
        images, nodes = _perm_rep_search(table, k)
        total += nodes
        if images is not None:
            padded = tuple(Permutation(p.images + tuple(range(k, n))) for p in images)
            witness = HomWitness(table, tuple(table_group.minimal_generating_sequence(table)), padded)
            logger.debug("perm-rep %s into S%d: found on %d points", table.describe(), n, k)
            return Verdict(True, Method.STAR_REDUCTION, witness,
                           {'elapsed_ms': _elapsed_ms(started), 'search_nodes': total, 'orbit_size': k})
    logger.debug("perm-rep %s into S%d: none", table.describe(), n)
    return Verdict(False, Method.STAR_REDUCTION, stats={'elapsed_ms': _elapsed_ms(started), 'search_nodes': total})


def has_small_index_subgroup(g, n: int) -> bool:
    """A proper subgroup of index at most n; equivalent to a nontrivial action on n points"""
    table = GroupInput.of(g).as_table
    if table.n > SUBGROUP_LATTICE_ORDER_CAP:
        raise CapExceededError('SUBGROUP_LATTICE_ORDER_CAP', SUBGROUP_LATTICE_ORDER_CAP, table.n)
    return any(h.order < table.n and table.n // h.order <= n for h in table_group.subgroups(table))


def star_tree(n: int) -> Graph:
    """Hub 0 joined to leaves 1..n; Aut is S_n"""
    if n < 1:
        raise InputError(f"star needs at least one leaf, got {n}")
    return Graph(n + 1, frozenset((0, i) for i in range(1, n + 1)))


# ============= BRUTE-FORCE ORACLE =============
@lru_cache(maxsize=8)
def _automorphism_pool(x: Graph) -> TargetPool:
    sgs = perm.schreier_sims(graph_core.automorphism_generators(x))
    size = perm.order(sgs)
    if size > config.ORACLE_AUT_CAP:
        raise CapExceededError('ORACLE_AUT_CAP', config.ORACLE_AUT_CAP, size)
    return TargetPool.of(list(perm.elements(sgs)))


def oracle_representable(g, x: Graph) -> Verdict:
    """Search every assignment of automorphisms to a generating sequence"""
    started = time.perf_counter()
    if x.n > config.ORACLE_VERTEX_CAP:
        raise CapExceededError('ORACLE_VERTEX_CAP', config.ORACLE_VERTEX_CAP, x.n)
    table = GroupInput.of(g).as_table
    search = HomomorphismSearch(table, _automorphism_pool(x))
    images = search.run()
    witness = None
    if images is not None:
        witness = HomWitness(table, tuple(search.generators), images)
    return Verdict(images is not None, Method.ORACLE_SEARCH, witness,
                   {'elapsed_ms': _elapsed_ms(started), 'search_nodes': search.nodes})


# ============= SOLVABLE GROUPS =============
def _automorphism_of_order(x: Graph, p: int) -> Optional[Permutation]:
    sgs = perm.schreier_sims(graph_core.automorphism_generators(x))
    for e in itertools.islice(perm.elements(sgs), config.ORACLE_AUT_CAP):
        k = perm.element_order(e)
        if k % p == 0:
            return perm.power(e, k // p)
    return None


def _solvable_witness(group: GroupInput, x: Graph, common: int) -> Optional[HomWitness]:
    p = min(primefactors(common))
    try:
        a = _automorphism_of_order(x, p)
        if a is None:
            logger.debug("no automorphism of order %d within ORACLE_AUT_CAP elements", p)
            return None
        table = group.as_table
    except CapExceededError as e:
        logger.debug("solvable witness skipped: %s", e)
        return None
    search = HomomorphismSearch(table, TargetPool.of([perm.power(a, k) for k in range(p)]))
    images = search.run()
    if images is None:
        return None
    return HomWitness(table, tuple(search.generators), images)


def decide_solvable_rep(g, x: Graph, with_witness: bool = False) -> Verdict:
    """Solvable G is representable on X iff #G/G' and #Aut(X) share a prime factor"""
    started = time.perf_counter()
    group = GroupInput.of(g)
    if not group.is_solvable():
        raise NotSolvableError(f"{group.describe()} is not solvable")
    quotient = group.abelianization_order()
    aut = graph_core.aut_order_by_components(x)
    common = math.gcd(quotient, aut)
    logger.debug("solvable-rep: #G/G' = %d, #Aut(X) = %d, gcd = %d", quotient, aut, common)
    witness = _solvable_witness(group, x, common) if common > 1 and with_witness else None
    return Verdict(common > 1, Method.PRIME_FACTOR, witness, {'elapsed_ms': _elapsed_ms(started)})


# ============= GI TO ABELIAN =============
@dataclass(frozen=True)
class ShortCircuit:
    isomorphic: bool
    reason: str


@dataclass(frozen=True)
class ComponentSource:
    source: str  # 'X' or 'Y'
    offset: int
    size: int


@dataclass(frozen=True)
class ReductionOutput:
    z: Graph
    p: int
    group: TableGroup
    components: Tuple[ComponentSource, ...]
    # The graphs actually copied into z (complements when the inputs were disconnected)
    x: Graph
    y: Graph
    complemented: bool

    @property
    def n(self) -> int:
        return self.x.n


def reduce_gi_to_abelian(x: Graph, y: Graph) -> Union[ReductionOutput, ShortCircuit]:
    """Z = (p-1) copies of X plus one copy of Y; X ~ Y iff Z/pZ is representable on Z"""
    if x.n != y.n:
        return ShortCircuit(False, f"vertex counts differ: {x.n} != {y.n}")
    n = x.n
    if n == 1:
        return ShortCircuit(True, "single-vertex graphs")
    x_connected, y_connected = graph_core.is_connected(x), graph_core.is_connected(y)
    if x_connected != y_connected:
        return ShortCircuit(False, "exactly one graph is connected")
    # The complement of a disconnected graph is connected
    complemented = not x_connected
    if complemented:
        x, y = graph_core.complement(x), graph_core.complement(y)
    p = next(iter(sieve.primerange(n + 1, 2 * n)))
    z, offsets = graph_core.disjoint_union([x] * (p - 1) + [y])
    components = tuple(ComponentSource('X' if i < p - 1 else 'Y', off, n) for i, off in enumerate(offsets))
    logger.debug("gi-to-abelian: n = %d, p = %d, complemented = %s", n, p, complemented)
    return ReductionOutput(z, p, table_group.make_standard(GroupKind.CYCLIC, p), components, x, y, complemented)


def cyclic_automorphism(reduction: ReductionOutput, iso: Permutation) -> Permutation:
    """Order-p automorphism of Z from an isomorphism X -> Y.

    Copy i of X goes to copy i+1, the last X copy goes onto Y through iso,
    and Y returns to the first copy through iso^-1.
    """
    n, p = reduction.n, reduction.p
    x, y = reduction.x, reduction.y
    is_iso = (iso.degree == n and len(x.edges) == len(y.edges)
              and all(y.has_edge(iso(u), iso(v)) for u, v in x.edges))
    if not is_iso:
        raise ValidationError("not an isomorphism between the reduction's inputs")
    inv = perm.inverse(iso)
    offsets = [c.offset for c in reduction.components]
    images = list(range(reduction.z.n))
    for v in range(n):
        for i in range(p - 2):
            images[offsets[i] + v] = offsets[i + 1] + v
        images[offsets[p - 2] + v] = offsets[p - 1] + iso(v)
        images[offsets[p - 1] + v] = offsets[0] + inv(v)
    return Permutation(tuple(images))


@dataclass(frozen=True)
class ReductionCheck:
    isomorphic: bool
    representable: bool
    p: Optional[int]
    witness: Optional[HomWitness] = None

    @property
    def agrees(self) -> bool:
        return self.isomorphic == self.representable


def verify_reduction(x: Graph, y: Graph) -> ReductionCheck:
    """Run the reduction and compare its verdict with a direct isomorphism test"""
    reduction = reduce_gi_to_abelian(x, y)
    if isinstance(reduction, ShortCircuit):
        return ReductionCheck(reduction.isomorphic, reduction.isomorphic, None)
    iso = graph_core.are_isomorphic(reduction.x, reduction.y)
    verdict = decide_solvable_rep(reduction.group, reduction.z)
    witness = None
    if iso is not None:
        witness = HomWitness(reduction.group, (1,), (cyclic_automorphism(reduction, iso),))
    return ReductionCheck(iso is not None, verdict.representable, reduction.p, witness)


# ============= TREES =============
class TreeRepresentabilityDecider:
    """Recursion over child classes of a rooted tree, memoized by subtree code.

    A class of k >= 2 isomorphic children answers yes as soon as G -> S_k is
    nontrivial; otherwise each class representative is tried in turn.
    """

    def __init__(self, group: GroupInput):
        self.group = group
        self.table = group.as_table
        self.generators = tuple(table_group.minimal_generating_sequence(self.table))
        self.tree: Optional[tree_alg.RootedTree] = None
        self.memo: Dict[str, Optional[Tuple[int, Tuple[Permutation, ...]]]] = {}
        self.perm_rep: Dict[int, Verdict] = {}
        self.calls = 0
        self.memo_hits = 0

    def decide(self, tree: tree_alg.RootedTree) -> Optional[Tuple[Permutation, ...]]:
        self.tree = tree
        self.memo.clear()
        return self._represent(tree.root)

    def _perm_rep(self, k: int) -> Verdict:
        if k not in self.perm_rep:
            self.perm_rep[k] = decide_perm_rep(self.group, k)
        return self.perm_rep[k]

    def _represent(self, v: int) -> Optional[Tuple[Permutation, ...]]:
        self.calls += 1
        t = self.tree
        code = t.codes[v]
        if code in self.memo:
            self.memo_hits += 1
            entry = self.memo[code]
            if entry is None:
                return None
            u, images = entry
            return images if u == v else self._transport(images, u, v)

        result = None
        decomposition = tree_alg.child_partition(t, v)
        for cls in decomposition.classes:
            if cls.multiplicity < 2:
                continue
            verdict = self._perm_rep(cls.multiplicity)
            if verdict.representable:
                result = self._lift(cls.members, verdict.witness.images)
                break
        if result is None:
            for cls in decomposition.classes:
                result = self._represent(cls.members[0])
                if result is not None:
                    break
        logger.debug("tree-rep at vertex %d (%d classes): %s", v, decomposition.t, result is not None)
        self.memo[code] = None if result is None else (v, result)
        return result

    def _lift(self, members: Sequence[int], sigmas: Sequence[Permutation]) -> Tuple[Permutation, ...]:
        """Permute isomorphic sibling subtrees as each sigma permutes 0..k-1"""
        t = self.tree
        out = []
        for sigma in sigmas:
            images = list(range(t.n))
            for i, c in enumerate(members):
                for a, b in tree_alg.canonical_match(t, c, members[sigma(i)]).items():
                    images[a] = b
            out.append(Permutation(tuple(images)))
        return tuple(out)

    def _transport(self, images: Sequence[Permutation], u: int, v: int) -> Tuple[Permutation, ...]:
        """Move a witness supported on the subtree at u onto the subtree at v"""
        match = tree_alg.canonical_match(self.tree, u, v)
        out = []
        for pi in images:
            moved = list(range(self.tree.n))
            for a, b in match.items():
                moved[b] = match[pi(a)]
            out.append(Permutation(tuple(moved)))
        return tuple(out)


def decide_tree_rep(g, x: Graph) -> Verdict:
    started = time.perf_counter()
    group = GroupInput.of(g)
    rooting = tree_alg.root_tree(x)
    decider = TreeRepresentabilityDecider(group)
    images = decider.decide(rooting.tree)
    witness = None
    if images is not None:
        # The dummy root, when present, is the last vertex and fixed by every image
        witness = HomWitness(decider.table, decider.generators,
                             tuple(Permutation(p.images[:x.n]) for p in images))
    logger.debug("tree-rep on %d vertices: %d calls, %d memo hits", x.n, decider.calls, decider.memo_hits)
    return Verdict(images is not None, Method.RECURSIVE_TREE, witness, {
        'elapsed_ms': _elapsed_ms(started),
        'recursive_calls': decider.calls,
        'memo_hits': decider.memo_hits,
    })
