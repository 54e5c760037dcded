"""
Permutation arithmetic, Schreier-Sims and commutator machinery,
cross-checked against exhaustive closure and sympy.combinatorics.
"""

import itertools

import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup

import corpus
import perm
from conftest import cycles_genset
from errors import CapExceededError, DegreeMismatchError, ValidationError
from perm import GenSet, Permutation


def _sympy_group(g: GenSet) -> PermutationGroup:
    gens = [SympyPermutation(list(p.images)) for p in g.gens] or [SympyPermutation(list(range(g.degree)))]
    return PermutationGroup(gens)


# ============= ARITHMETIC =============
def test_compose_applies_left_factor_first():
    p = Permutation((1, 0, 2))
    q = Permutation((0, 2, 1))
    assert perm.compose(p, q) == Permutation((2, 0, 1))
    assert p * q == perm.compose(p, q)


def test_identity_and_inverse_laws():
    g = Permutation.from_cycles(5, (0, 3, 1), (2, 4))
    e = Permutation.identity(5)
    assert perm.compose(e, g) == g
    assert perm.compose(g, perm.inverse(g)).is_identity()
    assert perm.compose(perm.inverse(g), g).is_identity()


def test_power_and_order():
    g = Permutation.from_cycles(5, (0, 1, 2), (3, 4))
    assert perm.element_order(g) == 6
    assert perm.power(g, 6).is_identity()
    assert not perm.power(g, 3).is_identity()
    assert perm.power(g, -1) == perm.inverse(g)
    assert perm.element_order(Permutation.identity(3)) == 1


def test_cycle_notation():
    g = Permutation.from_cycles(5, (3, 1, 0), (2, 4))
    assert perm.cycles(g) == [[0, 3, 1], [2, 4]]
    assert perm.cycle_notation(g) == '(0 3 1)(2 4)'
    assert str(Permutation.identity(2)) == '()'


def test_commutator_of_commuting_elements_is_trivial():
    a = Permutation.from_cycles(4, (0, 1))
    b = Permutation.from_cycles(4, (2, 3))
    assert perm.commutator(a, b).is_identity()
    c = Permutation.from_cycles(4, (1, 2))
    assert not perm.commutator(a, c).is_identity()


def test_invalid_permutations_rejected():
    with pytest.raises(ValidationError):
        Permutation((0, 0, 1))
    with pytest.raises(ValidationError):
        Permutation(())
    with pytest.raises(DegreeMismatchError):
        perm.compose(Permutation.identity(2), Permutation.identity(3))
    with pytest.raises(DegreeMismatchError):
        GenSet(3, (Permutation.identity(4),))


# ============= SCHREIER-SIMS =============
@pytest.mark.parametrize('degree, gens, expected', [
    (3, [], 1),
    (2, [[(0, 1)]], 2),
    (5, [[(0, 1, 2, 3, 4)], [(0, 1)]], 120),
    (7, [[(0, 1, 2, 3, 4, 5, 6)]], 7),
    (4, [[(0, 1, 2)], [(1, 2, 3)]], 12),
])
def test_order_spot_values(degree, gens, expected):
    g = cycles_genset(degree, *gens)
    assert perm.order(perm.schreier_sims(g)) == expected


def test_order_matches_exhaustive_closure_on_random_gensets():
    for g in corpus.random_gensets(100, max_degree=7, seed=7):
        sgs = perm.schreier_sims(g)
        closure = perm.exhaustive_closure(g)
        assert perm.order(sgs) == len(closure)
        assert perm.order(sgs) == _sympy_group(g).order()


def test_contains_matches_closure():
    for g in corpus.random_gensets(20, max_degree=5, seed=3):
        sgs = perm.schreier_sims(g)
        closure = perm.exhaustive_closure(g)
        for gen in g.gens:
            assert perm.contains(sgs, gen)
        for images in itertools.permutations(range(g.degree)):
            p = Permutation(images)
            assert perm.contains(sgs, p) == (p in closure)


def test_contains_spot_values():
    a4 = perm.schreier_sims(cycles_genset(4, [(0, 1, 2)], [(1, 2, 3)]))
    assert perm.contains(a4, Permutation.identity(4))
    assert not perm.contains(a4, Permutation.from_cycles(4, (0, 1)))
    with pytest.raises(DegreeMismatchError):
        perm.contains(a4, Permutation.identity(5))


@pytest.mark.parametrize('degree, gens, base', [
    (3, [[(1, 2)], [(0, 1)]], (0, 1)),
    (3, [[(0, 1)], [(1, 2)]], (0, 1)),
    (4, [[(2, 3)]], (2,)),
    (5, [[(3, 4)], [(1, 2, 3)]], (1, 2, 3)),
    (4, [], ()),
])
def test_base_points_increase(degree, gens, base):
    sgs = perm.schreier_sims(cycles_genset(degree, *gens))
    assert sgs.base == base


def test_elements_lists_each_element_once(s4_gens):
    sgs = perm.schreier_sims(s4_gens)
    elems = list(perm.elements(sgs))
    assert len(elems) == 24
    assert set(elems) == perm.exhaustive_closure(s4_gens)


def test_exhaustive_closure_refuses_large_degree():
    with pytest.raises(CapExceededError):
        perm.exhaustive_closure(cycles_genset(9, [(0, 1)]))


# ============= ORBITS =============
@pytest.mark.parametrize('degree, gens, expected', [
    (3, [], [[0], [1], [2]]),
    (4, [[(0, 1)]], [[0, 1], [2], [3]]),
    (5, [[(0, 1, 2, 3, 4)]], [[0, 1, 2, 3, 4]]),
])
def test_orbits_spot_values(degree, gens, expected):
    assert perm.orbits(cycles_genset(degree, *gens)) == expected


def test_orbits_match_sympy():
    for g in corpus.random_gensets(30, max_degree=7, seed=11):
        ours = sorted(tuple(b) for b in perm.orbits(g))
        theirs = sorted(tuple(sorted(o)) for o in _sympy_group(g).orbits())
        assert ours == theirs


def test_orbit_sizes_divide_prime_cyclic_order():
    g = cycles_genset(8, [(0, 1, 2, 3, 4, 5, 6)])
    size = perm.group_order(g)
    for block in perm.orbits(g):
        assert size % len(block) == 0


# ============= COMMUTATORS AND SOLVABILITY =============
def test_commutator_subgroup_orders(s4_gens):
    cyclic = cycles_genset(5, [(0, 1, 2, 3, 4)])
    assert perm.group_order(perm.commutator_gens(cyclic)) == 1
    s3 = cycles_genset(3, [(0, 1, 2)], [(0, 1)])
    assert perm.group_order(perm.commutator_gens(s3)) == 3
    assert perm.group_order(perm.commutator_gens(s4_gens)) == 12


def test_commutator_subgroup_matches_sympy():
    for g in corpus.random_gensets(25, max_degree=6, seed=5):
        derived = perm.commutator_gens(g)
        theirs = _sympy_group(g).derived_subgroup()
        assert perm.group_order(derived) == theirs.order()
        sgs = perm.schreier_sims(g)
        for c in derived.gens:
            assert perm.contains(sgs, c)


def test_derived_series(s4_gens, a5_gens):
    assert [perm.group_order(h) for h in perm.derived_series(s4_gens)] == [24, 12, 4, 1]
    assert perm.is_solvable_perm(s4_gens)
    assert not perm.is_solvable_perm(a5_gens)
    assert perm.group_order(perm.commutator_gens(a5_gens)) == 60
    assert perm.is_solvable_perm(GenSet(3))


def test_solvability_matches_sympy():
    for g in corpus.random_gensets(25, max_degree=6, seed=9):
        assert perm.is_solvable_perm(g) == _sympy_group(g).is_solvable
