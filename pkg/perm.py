"""
Permutation groups presented by generators.

Permutations act on the right: images[i] is the image of point i, and
p * q applies p first, then q. Strong generating sets are built with a
deterministic Schreier-Sims whose base points increase in natural order.
"""

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Sequence, Tuple

import networkx as nx

import config
from errors import CapExceededError, DegreeMismatchError, ValidationError

logger = logging.getLogger(__name__)


# ============= PERMUTATIONS =============
@dataclass(frozen=True)
class Permutation:
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, 'images', images)
        if not images:
            raise ValidationError("permutation degree must be positive")
        if sorted(images) != list(range(len(images))):
            raise ValidationError(f"not a bijection on 0..{len(images) - 1}: {list(images)}")

    @classmethod
    def _trusted(cls, images: Tuple[int, ...]) -> 'Permutation':
        # Skips validation; only for images produced by composing valid permutations
        p = object.__new__(cls)
        object.__setattr__(p, 'images', images)
        return p

    @classmethod
    def identity(cls, degree: int) -> 'Permutation':
        if degree < 1:
            raise ValidationError("permutation degree must be positive")
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> 'Permutation':
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: 'Permutation') -> 'Permutation':
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def moved_points(self) -> List[int]:
        return [i for i, j in enumerate(self.images) if i != j]

    def __str__(self) -> str:
        return cycle_notation(self)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply p, then q"""
    if p.degree != q.degree:
        raise DegreeMismatchError(p.degree, q.degree)
    qi = q.images
    return Permutation._trusted(tuple(qi[i] for i in p.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, j in enumerate(p.images):
        inv[j] = i
    return Permutation._trusted(tuple(inv))


def power(p: Permutation, exponent: int) -> Permutation:
    if exponent < 0:
        p, exponent = inverse(p), -exponent
    result = Permutation.identity(p.degree)
    base = p
    while exponent:
        if exponent & 1:
            result = compose(result, base)
        base = compose(base, base)
        exponent >>= 1
    return result


def cycles(p: Permutation) -> List[List[int]]:
    """Nontrivial cycles, each starting at its smallest point"""
    seen = set()
    out = []
    for start in range(p.degree):
        if start in seen or p.images[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        j = p.images[start]
        while j != start:
            seen.add(j)
            cycle.append(j)
            j = p.images[j]
        out.append(cycle)
    return out


def element_order(p: Permutation) -> int:
    return math.lcm(1, *(len(c) for c in cycles(p)))


def commutator(x: Permutation, y: Permutation) -> Permutation:
    """[x, y] = x y x^-1 y^-1"""
    return compose(compose(compose(x, y), inverse(x)), inverse(y))


def cycle_notation(p: Permutation) -> str:
    out = ''.join('(' + ' '.join(map(str, c)) + ')' for c in cycles(p))
    return out or '()'


# ============= GENERATING SETS =============
@dataclass(frozen=True)
class GenSet:
    degree: int
    gens: Tuple[Permutation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'gens', tuple(self.gens))
        if self.degree < 1:
            raise ValidationError("generating set degree must be positive")
        for g in self.gens:
            if g.degree != self.degree:
                raise DegreeMismatchError(self.degree, g.degree)

    def nontrivial_gens(self) -> List[Permutation]:
        return [g for g in self.gens if not g.is_identity()]


@dataclass(frozen=True)
class StrongGenSet:
    """Base, transversals C_i of G^(i) in G^(i-1), and the strong generators.

    transversals[i] maps each point beta of the i-th basic orbit to a
    coset representative u with base[i]^u = beta. Treat as read-only.
    """
    degree: int
    base: Tuple[int, ...]
    transversals: Tuple[Dict[int, Permutation], ...]
    strong_gens: Tuple[Permutation, ...] = field(default=())


# ============= SCHREIER-SIMS =============
class _ChainBuilder:
    """Incremental stabilizer chain over the base 0, 1, ..., degree-1; each
    add() leaves every level closed under its Schreier generators. Levels
    whose basic orbit stays a single point are dropped by freeze()."""

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = Permutation.identity(degree)
        self.base: List[int] = list(range(degree))
        self.level_gens: List[List[Permutation]] = [[] for _ in range(degree)]
        self.transversals: List[Dict[int, Permutation]] = [{b: self.identity} for b in self.base]
        self.inverses: List[Dict[int, Permutation]] = [{b: self.identity} for b in self.base]

    def strip(self, g: Permutation, start: int = 0) -> Tuple[Permutation, int]:
        for i in range(start, len(self.base)):
            beta = g.images[self.base[i]]
            u_inv = self.inverses[i].get(beta)
            if u_inv is None:
                return g, i
            g = compose(g, u_inv)
        return g, len(self.base)

    def contains(self, g: Permutation, start: int = 0) -> bool:
        h, _ = self.strip(g, start)
        return h.is_identity()

    def add(self, g: Permutation, level: int = 0) -> bool:
        """Extend the group at `level` by g (g must fix base[:level]); True if it grew"""
        if self.contains(g, level):
            return False
        self.level_gens[level].append(g)
        self._extend_orbit(level)

        transversal = self.transversals[level]
        inverses = self.inverses[level]
        for beta, u in list(transversal.items()):
            for s in list(self.level_gens[level]):
                gamma = s.images[beta]
                schreier = compose(compose(u, s), inverses[gamma])
                if not schreier.is_identity():
                    self.add(schreier, level + 1)
        if len(transversal) > 1:
            logger.debug("schreier-sims: level %d orbit size %d", level, len(transversal))
        return True

    def _extend_orbit(self, level: int):
        transversal = self.transversals[level]
        inverses = self.inverses[level]
        gens = self.level_gens[level]
        queue = deque(transversal.keys())
        while queue:
            beta = queue.popleft()
            u = transversal[beta]
            for s in gens:
                gamma = s.images[beta]
                if gamma not in transversal:
                    v = compose(u, s)
                    transversal[gamma] = v
                    inverses[gamma] = inverse(v)
                    queue.append(gamma)

    def freeze(self) -> StrongGenSet:
        strong = []
        for gens in self.level_gens:
            for g in gens:
                if g not in strong:
                    strong.append(g)
        levels = [i for i, t in enumerate(self.transversals) if len(t) > 1]
        return StrongGenSet(
            degree=self.degree,
            base=tuple(self.base[i] for i in levels),
            transversals=tuple(dict(self.transversals[i]) for i in levels),
            strong_gens=tuple(strong),
        )


def schreier_sims(g: GenSet) -> StrongGenSet:
    builder = _ChainBuilder(g.degree)
    for gen in g.nontrivial_gens():
        builder.add(gen, 0)
    return builder.freeze()


def order(sgs: StrongGenSet) -> int:
    return math.prod(len(t) for t in sgs.transversals)


def group_order(g: GenSet) -> int:
    return order(schreier_sims(g))


def contains(sgs: StrongGenSet, p: Permutation) -> bool:
    if p.degree != sgs.degree:
        raise DegreeMismatchError(sgs.degree, p.degree)
    for point, transversal in zip(sgs.base, sgs.transversals):
        u = transversal.get(p.images[point])
        if u is None:
            return False
        p = compose(p, inverse(u))
    return p.is_identity()


def elements(sgs: StrongGenSet) -> Iterator[Permutation]:
    """Every group element exactly once: u_k * ... * u_1 * u_0 over transversal choices"""
    identity = Permutation.identity(sgs.degree)
    levels = [list(t.values()) for t in reversed(sgs.transversals)]
    for choice in itertools.product(*levels):
        g = identity
        for u in choice:
            g = compose(g, u)
        yield g


def exhaustive_closure(g: GenSet) -> FrozenSet[Permutation]:
    """All elements by closing under right multiplication; verification only"""
    if g.degree > config.CLOSURE_DEGREE_CAP:
        raise CapExceededError('CLOSURE_DEGREE_CAP', config.CLOSURE_DEGREE_CAP, g.degree)
    identity = Permutation.identity(g.degree)
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in g.gens:
            y = compose(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


# ============= ORBITS =============
def orbits(g: GenSet) -> List[List[int]]:
    """Orbit partition, blocks sorted and ordered by smallest point"""
    graph = nx.Graph()
    graph.add_nodes_from(range(g.degree))
    for s in g.gens:
        graph.add_edges_from((i, j) for i, j in enumerate(s.images) if i != j)
    blocks = [sorted(c) for c in nx.connected_components(graph)]
    return sorted(blocks, key=lambda b: b[0])


# ============= COMMUTATORS AND SOLVABILITY =============
def commutator_gens(g: GenSet) -> GenSet:
    """Generators of G': normal closure of the generator commutators"""
    gens = g.nontrivial_gens()
    builder = _ChainBuilder(g.degree)
    normal_gens: List[Permutation] = []
    work: List[Permutation] = []
    for a, b in itertools.combinations(gens, 2):
        c = commutator(a, b)
        if not c.is_identity() and builder.add(c, 0):
            normal_gens.append(c)
            work.append(c)
    while work:
        c = work.pop()
        for s in gens:
            conj = compose(compose(inverse(s), c), s)
            if builder.add(conj, 0):
                normal_gens.append(conj)
                work.append(conj)
    return GenSet(g.degree, tuple(normal_gens))


def derived_series(g: GenSet) -> List[GenSet]:
    """G, G', G'', ... stopping once the order no longer drops"""
    series = [g]
    current_order = group_order(g)
    while current_order > 1:
        nxt = commutator_gens(series[-1])
        nxt_order = group_order(nxt)
        if nxt_order == current_order:
            break
        series.append(nxt)
        current_order = nxt_order
    return series


def is_solvable_perm(g: GenSet) -> bool:
    return group_order(derived_series(g)[-1]) == 1
