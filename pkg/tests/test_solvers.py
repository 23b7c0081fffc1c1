import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings

from opss import (
    BipartiteGraph,
    CapacityError,
    ValidationError,
    coverage_value,
    exhaustive_max_coverage,
    get_solver,
    greedy_max_coverage,
    lazy_greedy_max_coverage,
    random_graph,
)

from conftest import brute_union, graphs


def brute_optimum(g, budget):
    return max(
        len(brute_union(g, c)) for size in range(budget + 1) for c in combinations(range(g.n_left), size)
    )


class TestGreedy:
    def test_g0(self, g0):
        res = greedy_max_coverage(g0, 2)
        assert res.chosen == {0, 1} and res.value == 3

    def test_full_budget(self, g0):
        assert greedy_max_coverage(g0, 3).value == coverage_value(g0, range(3))

    def test_empty_graph_stops(self):
        res = greedy_max_coverage(BipartiteGraph(4, 3, ((),) * 4), 3)
        assert res.chosen == frozenset() and res.value == 0

    def test_tie_break_lowest_index(self):
        g = BipartiteGraph.from_sets(4, [[2, 3], [0, 1], [0, 1, 2]])
        # node 2 first; then 0 and 1 both gain one, so 0 wins
        assert greedy_max_coverage(g, 2).chosen == {0, 2}

    @pytest.mark.parametrize("budget", [0, 4])
    def test_bad_budget(self, g0, budget):
        with pytest.raises(ValidationError):
            greedy_max_coverage(g0, budget)

    @given(graphs(max_left=7))
    def test_value_consistent(self, g):
        for b in range(1, g.n_left + 1):
            res = greedy_max_coverage(g, b)
            assert len(res.chosen) <= b and res.value == coverage_value(g, res.chosen)

    def test_approximation(self):
        rng = np.random.default_rng(5)
        bound = 1 - 1 / math.e
        for _ in range(100):
            n, m = int(rng.integers(2, 11)), int(rng.integers(1, 13))
            g = random_graph(n, m, float(rng.uniform(0.1, 0.6)), rng)
            k = int(rng.integers(1, min(n, 4) + 1))
            assert greedy_max_coverage(g, k).value >= bound * exhaustive_max_coverage(g, k).value


class TestLazy:
    def test_g0(self, g0):
        assert lazy_greedy_max_coverage(g0, 2).chosen == greedy_max_coverage(g0, 2).chosen

    def test_matches_greedy_on_random_graphs(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            n, m = int(rng.integers(1, 31)), int(rng.integers(1, 40))
            g = random_graph(n, m, float(rng.uniform(0.02, 0.5)), rng)
            k = int(rng.integers(1, n + 1))
            eager, lazy = greedy_max_coverage(g, k), lazy_greedy_max_coverage(g, k)
            assert (lazy.chosen, lazy.value) == (eager.chosen, eager.value)

    def test_fewer_evaluations_on_large_graph(self):
        g = random_graph(200, 300, 0.05, np.random.default_rng(2))
        assert lazy_greedy_max_coverage(g, 20).evaluations < greedy_max_coverage(g, 20).evaluations

    @settings(max_examples=200)
    @given(graphs(max_left=8, max_right=6))
    def test_matches_greedy_with_ties(self, g):
        # few right nodes forces many equal gains
        for b in range(1, g.n_left + 1):
            assert lazy_greedy_max_coverage(g, b).chosen == greedy_max_coverage(g, b).chosen


class TestExhaustive:
    def test_g0(self, g0):
        assert exhaustive_max_coverage(g0, 2).value == 3
        assert exhaustive_max_coverage(g0, 3).value == 4

    def test_empty_graph(self):
        assert exhaustive_max_coverage(BipartiteGraph(2, 2, ((), ())), 1).value == 0

    def test_lexicographic_optimum(self):
        g = BipartiteGraph.from_sets(2, [[0], [1], [0, 1], [0, 1]])
        assert exhaustive_max_coverage(g, 2).chosen == {0, 1}
        assert exhaustive_max_coverage(g, 1).chosen == {2}

    @given(graphs(max_left=6))
    def test_matches_brute_force(self, g):
        for b in range(1, g.n_left + 1):
            res = exhaustive_max_coverage(g, b)
            assert res.value == brute_optimum(g, b) == coverage_value(g, res.chosen)
            assert len(res.chosen) <= b

    def test_capacity(self):
        g = random_graph(30, 5, 0.2, np.random.default_rng(0))
        with pytest.raises(CapacityError) as info:
            exhaustive_max_coverage(g, 15, cap=1000)
        assert info.value.cap == 1000


@pytest.mark.parametrize("name", ["greedy", "lazy", "exact"])
def test_relabel_invariance(name):
    solver = get_solver(name)
    rng = np.random.default_rng(8)
    for _ in range(20):
        g = random_graph(9, 12, 0.3, rng)
        perm = rng.permutation(12)
        assert solver(g, 3).value == solver(g.relabel_right(perm), 3).value


def test_unknown_solver():
    with pytest.raises(ValidationError):
        get_solver("simplex")
