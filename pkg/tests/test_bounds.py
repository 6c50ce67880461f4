import random

import pytest
from hypothesis import given, settings, strategies as st

from thinlab.bounds import (UnsupportedInput, almost_leaves_solution, check_bounds,
                            closed_form_binary, closed_form_mary, count_almost_leaves,
                            count_leaves, smallest_tree_size)
from thinlab.certify import check_consistent
from thinlab.thinness_engine import thinness
from thinlab.tree_core import (Tree, gen_complete_mary, gen_random_tree, gen_smallest_tree,
                               path_tree, spider_tree, star_tree)


def double_broom(handle: int, bristles: int) -> Tree:
    edges = [(i, i + 1) for i in range(handle - 1)]
    nxt = handle
    for end in (0, handle - 1):
        for _ in range(bristles):
            edges.append((end, nxt))
            nxt += 1
    return Tree.from_edges(nxt, edges)


class TestClosedForms:
    @pytest.mark.parametrize("m,h,k", [(3, 0, 1), (3, 5, 3), (4, 2, 2)])
    def test_mary(self, m, h, k):
        assert closed_form_mary(m, h) == k
        assert thinness(gen_complete_mary(m, h)) == k

    def test_mary_rejects_binary(self):
        with pytest.raises(ValueError):
            closed_form_mary(2, 3)

    @pytest.mark.parametrize("h,k", [(2, 1), (8, 3)])
    def test_binary(self, h, k):
        assert closed_form_binary(h) == k
        assert thinness(gen_complete_mary(2, h)) == k

    def test_binary_h17(self):
        t = gen_complete_mary(2, 17)
        assert t.n == 262_143
        assert closed_form_binary(17) == 6 == thinness(t)

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_mary_small_heights(self, m):
        for h in range(4):
            assert thinness(gen_complete_mary(m, h)) == closed_form_mary(m, h)

    def test_smallest_size(self):
        assert [smallest_tree_size(k) for k in (1, 2, 3)] == [1, 7, 25]


class TestCounts:
    def test_path(self):
        t = path_tree(5)
        assert count_leaves(t) == 2 and count_almost_leaves(t) == 2

    def test_star(self):
        t = star_tree(3)
        assert count_leaves(t) == 3 and count_almost_leaves(t) == 1

    def test_smallest_two(self):
        assert count_leaves(gen_smallest_tree(2)) == 3


class TestCheckBounds:
    def test_smallest_four_tight(self):
        t = gen_smallest_tree(4)
        assert t.n == 79
        report = check_bounds(t, thinness(t))
        entry = next(e for e in report.entries if e.name == "log3")
        assert entry.measured == 4 and entry.bound == pytest.approx(4.0)
        assert report.all_satisfied

    def test_binary_h8_degree_bound(self):
        t = gen_complete_mary(2, 8)
        report = check_bounds(t, 3)
        entry = next(e for e in report.entries if e.name == "diameter_deg3")
        assert entry.bound == 4 and entry.satisfied

    def test_single_vertex(self):
        report = check_bounds(Tree(1, [[]]), 1)
        assert report.all_satisfied

    def test_detects_wrong_thinness(self):
        report = check_bounds(path_tree(5), 3)
        assert {e.name for e in report.failed()} >= {"log3", "diameter"}

    def test_csv(self):
        csv = check_bounds(path_tree(4), 1).to_csv().splitlines()
        assert csv[0] == "name,bound,measured,relation,satisfied"
        assert all(line.endswith("true") for line in csv[1:])

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 500), st.integers(0, 10**6))
    def test_random_trees(self, n, seed):
        t = gen_random_tree(n, seed)
        assert check_bounds(t, thinness(t)).all_satisfied


class TestAlmostLeaves:
    def test_spider_three_legs(self):
        t = spider_tree([2, 2, 2])
        assert count_almost_leaves(t) == 3
        sol = almost_leaves_solution(t)
        assert sol.num_classes <= 2 and check_consistent(t, sol) is None

    def test_double_broom(self):
        t = double_broom(5, 3)
        assert count_almost_leaves(t) == 2
        sol = almost_leaves_solution(t)
        assert sol.num_classes == 1 == thinness(t)
        assert check_consistent(t, sol) is None

    @pytest.mark.parametrize("t", [star_tree(5), path_tree(2), path_tree(1)])
    def test_unsupported(self, t):
        with pytest.raises(UnsupportedInput):
            almost_leaves_solution(t)

    def test_random(self):
        rng = random.Random(11)
        done = 0
        while done < 300:
            t = gen_random_tree(rng.randint(2, 400), rng.randrange(10**9))
            t_al = count_almost_leaves(t)
            if t_al < 2:
                continue
            sol = almost_leaves_solution(t)
            assert sorted(sol.order) == list(range(t.n))
            assert sol.num_classes <= t_al - 1
            assert check_consistent(t, sol) is None
            done += 1
