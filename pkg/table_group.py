"""
Finite groups given by their full multiplication table.

Element 0 is always the identity and table[i][j] is the index of i*j.
Groups built from permutations keep the permutations as element labels,
with products read left factor first (the right-action convention of perm).
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation as SympyPermutation

import config
import perm
from errors import CapExceededError, ValidationError
from perm import GenSet, Permutation

logger = logging.getLogger(__name__)

# Caps from the documented constructor contract
SYMMETRIC_CAP = 6
CYCLIC_CAP = 1000
QUATERNION_ORDER = 8


# ============= TABLE GROUP =============
@dataclass(frozen=True, eq=False)
class TableGroup:
    table: np.ndarray
    labels: Optional[Tuple[Permutation, ...]] = None
    name: str = ''

    @property
    def n(self) -> int:
        return int(self.table.shape[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, TableGroup) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == 0, axis=1)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.n
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        current = idx.copy()
        for k in range(1, n + 1):
            hit = (current == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            current = self.table[current, idx]
        return orders

    def rows(self) -> List[List[int]]:
        return self.table.tolist()

    def describe(self) -> str:
        return self.name or f"table group of order {self.n}"


@dataclass(frozen=True)
class ElementSubset:
    parent: TableGroup
    members: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'members', tuple(sorted(set(int(m) for m in self.members))))

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, element: int) -> bool:
        return element in set(self.members)

    def is_subgroup(self) -> bool:
        if 0 not in self.members:
            return False
        idx = np.array(self.members)
        products = self.parent.table[np.ix_(idx, idx)]
        return bool(np.isin(products, idx).all()) and bool(np.isin(self.parent.inverses[idx], idx).all())

    def is_normal(self) -> bool:
        """Closed under conjugation by every element of the parent"""
        t = self.parent.table
        inv = self.parent.inverses
        idx = np.array(self.members)
        all_elems = np.arange(self.parent.n)
        # g^-1 h g for all g, h
        conj = t[t[inv[:, None], idx[None, :]], all_elems[:, None]]
        return bool(np.isin(conj, idx).all())


def validate_table(raw: Sequence[Sequence[int]], name: str = '') -> TableGroup:
    try:
        table = np.array(raw, dtype=np.int64)
    except (TypeError, ValueError):
        raise ValidationError("table rows must be integer sequences of equal length")
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise ValidationError(f"table must be a non-empty square matrix, got shape {table.shape}")
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise ValidationError(f"table entries must lie in 0..{n - 1}")
    expected = np.arange(n)
    if not (np.array_equal(table[0], expected) and np.array_equal(table[:, 0], expected)):
        raise ValidationError("element 0 is not a two-sided identity")
    sorted_rows = np.sort(table, axis=1)
    bad_rows = np.nonzero((sorted_rows != expected).any(axis=1))[0]
    if bad_rows.size:
        raise ValidationError(f"row {int(bad_rows[0])} is not a permutation of 0..{n - 1}")
    sorted_cols = np.sort(table, axis=0)
    bad_cols = np.nonzero((sorted_cols != expected[:, None]).any(axis=0))[0]
    if bad_cols.size:
        raise ValidationError(f"column {int(bad_cols[0])} is not a permutation of 0..{n - 1}")
    for a in range(n):
        # (a*b)*c against a*(b*c) over all b, c
        lhs = table[table[a]]
        rhs = table[a][table]
        diff = np.argwhere(lhs != rhs)
        if diff.size:
            b, c = (int(v) for v in diff[0])
            raise ValidationError(f"associativity fails for ({a}, {b}, {c})", witness=(a, b, c))
    table.setflags(write=False)
    return TableGroup(table=table, name=name)


# ============= SUBGROUPS =============
def subgroup_closure(g: TableGroup, gens: Iterable[int]) -> ElementSubset:
    gens = [int(x) for x in gens if int(x) != 0]
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for m in frontier:
            for s in gens:
                p = int(g.table[m, s])
                if p not in members:
                    members.add(p)
                    nxt.append(p)
        frontier = nxt
    return ElementSubset(g, tuple(members))


def commutator_subgroup(g: TableGroup, within: Optional[ElementSubset] = None) -> ElementSubset:
    """Subgroup generated by [x, y] = x y x^-1 y^-1 for x, y in `within` (default: all of g)"""
    idx = np.arange(g.n) if within is None else np.array(within.members)
    t = g.table
    inv = g.inverses[idx]
    xy = t[np.ix_(idx, idx)]
    comms = t[t[xy, inv[:, None]], inv[None, :]]
    return subgroup_closure(g, np.unique(comms).tolist())


def abelianization_order(g: TableGroup) -> int:
    return g.n // commutator_subgroup(g).order


def derived_series(g: TableGroup) -> List[ElementSubset]:
    series = [ElementSubset(g, tuple(range(g.n)))]
    while series[-1].order > 1:
        nxt = commutator_subgroup(g, series[-1])
        if nxt.order == series[-1].order:
            break
        series.append(nxt)
    logger.debug("derived series of %s: %s", g.describe(), [s.order for s in series])
    return series


def is_solvable_table(g: TableGroup) -> bool:
    return derived_series(g)[-1].order == 1


def is_abelian(g: TableGroup) -> bool:
    return bool(np.array_equal(g.table, g.table.T))


def subgroups(g: TableGroup) -> List[ElementSubset]:
    """Every subgroup, found by joining single elements onto known subgroups"""
    trivial = ElementSubset(g, (0,))
    found = {trivial.members: trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for h in frontier:
            inside = set(h.members)
            for e in range(g.n):
                if e in inside:
                    continue
                k = subgroup_closure(g, h.members + (e,))
                if k.members not in found:
                    found[k.members] = k
                    nxt.append(k)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (s.order, s.members))


def minimal_generating_sequence(g: TableGroup) -> List[int]:
    """Greedy by smallest index; each element strictly enlarges the closure"""
    seq: List[int] = []
    closure = {0}
    for e in range(g.n):
        if len(closure) == g.n:
            break
        if e not in closure:
            seq.append(e)
            closure = set(subgroup_closure(g, seq).members)
    return seq


# ============= PERMUTATION GROUPS AS TABLES =============
def table_from_permutations(perms: Sequence[Permutation], name: str = '') -> TableGroup:
    """Cayley table of a closed set of permutations; the identity is moved to index 0"""
    perms = list(dict.fromkeys(perms))
    if not perms:
        raise ValidationError("empty permutation set")
    if len(perms) > config.GROUP_ORDER_CAP:
        raise CapExceededError('GROUP_ORDER_CAP', config.GROUP_ORDER_CAP, len(perms))
    identity = Permutation.identity(perms[0].degree)
    if identity not in perms:
        raise ValidationError("permutation set does not contain the identity")
    perms.remove(identity)
    perms.insert(0, identity)
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            k = index.get(perm.compose(p, q))
            if k is None:
                raise ValidationError(f"permutation set not closed: {p} * {q}")
            table[i, j] = k
    table.setflags(write=False)
    return TableGroup(table=table, labels=tuple(perms), name=name)


def table_from_genset(g: GenSet, name: str = '') -> TableGroup:
    sgs = perm.schreier_sims(g)
    size = perm.order(sgs)
    if size > config.GROUP_ORDER_CAP:
        raise CapExceededError('GROUP_ORDER_CAP', config.GROUP_ORDER_CAP, size)
    elems = sorted(perm.elements(sgs), key=lambda p: p.images)
    return table_from_permutations(elems, name=name)


# ============= STANDARD GROUPS =============
class GroupKind(str, Enum):
    CYCLIC = 'cyclic'
    DIHEDRAL = 'dihedral'
    SYMMETRIC = 'symmetric'
    ALTERNATING = 'alternating'
    QUATERNION = 'quaternion'


_QUATERNION_UNITS = [
    # (sign, unit) of unit_a * unit_b for units 1, i, j, k
    [(0, 0), (0, 1), (0, 2), (0, 3)],
    [(0, 1), (1, 0), (0, 3), (1, 2)],
    [(0, 2), (1, 3), (1, 0), (0, 1)],
    [(0, 3), (0, 2), (1, 1), (1, 0)],
]


def _check_range(kind: GroupKind, n: int, low: int, high: int):
    if not (low <= n <= high):
        raise ValidationError(f"{kind.value} group needs {low} <= n <= {high}, got {n}")


def make_standard(kind, n: Optional[int] = None) -> TableGroup:
    kind = GroupKind(kind)
    if kind is GroupKind.QUATERNION:
        if n not in (None, QUATERNION_ORDER):
            raise ValidationError(f"quaternion group has fixed order {QUATERNION_ORDER}, got {n}")
        table = np.empty((8, 8), dtype=np.int64)
        for a, b in itertools.product(range(8), repeat=2):
            sign, unit = _QUATERNION_UNITS[a % 4][b % 4]
            table[a, b] = unit + 4 * (sign ^ (a // 4) ^ (b // 4))
        return validate_table(table, name='Q8')
    if n is None:
        raise ValidationError(f"{kind.value} group needs n")

    if kind is GroupKind.CYCLIC:
        _check_range(kind, n, 1, CYCLIC_CAP)
        r = np.arange(n)
        return validate_table(np.add.outer(r, r) % n, name=f"Z{n}")
    if kind is GroupKind.DIHEDRAL:
        _check_range(kind, n, 1, CYCLIC_CAP)
        # index a + n*b stands for r^a s^b, with s r^c = r^-c s
        idx = np.arange(2 * n)
        a, b = idx % n, idx // n
        rot = (a[:, None] + np.where(b[:, None] == 1, -a[None, :], a[None, :])) % n
        refl = b[:, None] ^ b[None, :]
        return validate_table(rot + n * refl, name=f"D{n}")

    _check_range(kind, n, 1, SYMMETRIC_CAP)
    perms = [Permutation(p) for p in itertools.permutations(range(n))]
    if kind is GroupKind.ALTERNATING:
        perms = [p for p in perms if SympyPermutation(list(p.images)).is_even]
        return table_from_permutations(perms, name=f"A{n}")
    return table_from_permutations(perms, name=f"S{n}")
