"""
Shared fixtures: small corpora built once per session.
"""

import pytest

import corpus
from graph_core import Graph
from perm import GenSet, Permutation


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: whole-corpus acceptance sweeps")


def cycles_genset(degree, *gens):
    """GenSet from generators written as lists of cycles"""
    return GenSet(degree, tuple(Permutation.from_cycles(degree, *g) for g in gens))


def graph(n, *edges):
    return Graph(n, frozenset(edges))


@pytest.fixture(scope='session')
def small_groups():
    return corpus.group_corpus(16)


@pytest.fixture(scope='session')
def tree_groups():
    return corpus.group_corpus(24)


@pytest.fixture(scope='session')
def small_connected_graphs():
    return corpus.connected_graphs(6)


@pytest.fixture(scope='session')
def trees_up_to_9():
    return corpus.all_trees(9)


@pytest.fixture(scope='session')
def trees_up_to_10():
    return corpus.all_trees(10)


@pytest.fixture
def s4_gens():
    return cycles_genset(4, [(0, 1, 2, 3)], [(0, 1)])


@pytest.fixture
def a5_gens():
    return cycles_genset(5, [(0, 1, 2, 3, 4)], [(0, 1, 2)])
