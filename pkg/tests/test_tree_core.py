import pytest
from hypothesis import given, settings, strategies as st

from thinlab.caps import CapExceeded, Caps
from thinlab.tree_core import (ParseError, Tree, TreeError, canonical_form, dangling, diameter,
                               enumerate_labeled_trees, format_edge_list, gen_complete_mary,
                               gen_random_tree, gen_smallest_tree, parse_edge_list, path_tree,
                               relabel, root_at, star_tree, to_dot)


def connected(tree):
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in tree.adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == tree.n


def is_tree(tree):
    edges = list(tree.edges())
    sym = all(v in tree.adj[u] for v in range(tree.n) for u in tree.adj[v])
    return len(edges) == tree.n - 1 and connected(tree) and sym


class TestParse:
    def test_single_vertex(self):
        t = parse_edge_list("1\n")
        assert t.n == 1 and list(t.edges()) == []

    def test_path(self):
        t = parse_edge_list("3\n0 1\n1 2\n")
        assert t == path_tree(3)

    def test_duplicate_edge(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_edge_list("3\n0 1\n0 1\n")

    @pytest.mark.parametrize("text,line", [
        ("3\n0 1\n1 5\n", 3),
        ("4\n0 1\n1 2\n2 0\n", 4),
        ("3\n0 1\n", 3),
        ("3\n0 1\n1 2\n0 2\n", 4),
        ("x\n", 1),
        ("2\n0 0\n", 2),
        ("3\n0 1 2\n1 2\n", 2),
    ])
    def test_errors_name_line(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_edge_list(text)
        assert info.value.line == line

    def test_roundtrip(self):
        t = gen_random_tree(50, 3)
        assert parse_edge_list(format_edge_list(t)) == t

    def test_dot(self):
        dot = to_dot(path_tree(2))
        assert "0 -- 1" in dot


class TestRooting:
    def test_path_middle(self):
        assert root_at(path_tree(3), 1).children[1] == [0, 2]

    def test_single(self):
        r = root_at(Tree(1, [[]]), 0)
        assert r.children[0] == [] and r.parent[0] is None

    def test_star_rooted_at_leaf(self):
        r = root_at(star_tree(3), 1)
        assert r.parent[3] == 0 and r.parent[2] == 0 and r.parent[0] == 1
        assert r.parent[1] is None

    def test_out_of_range(self):
        with pytest.raises(TreeError):
            root_at(path_tree(3), 3)

    @given(st.integers(1, 60), st.integers(0, 10**6), st.data())
    def test_children_plus_parent_is_neighborhood(self, n, seed, data):
        t = gen_random_tree(n, seed)
        r = root_at(t, data.draw(st.integers(0, n - 1)))
        for v in range(n):
            nb = set(r.children[v]) | ({r.parent[v]} if r.parent[v] is not None else set())
            assert nb == set(t.adj[v])


class TestDangling:
    def test_path_ends(self):
        sub, ids = dangling(path_tree(3), 1, 2)
        assert sub.n == 1 and ids == [2]
        sub, ids = dangling(path_tree(3), 1, 0)
        assert sub.n == 1 and ids == [0]

    def test_smallest_two_arm_is_p2(self):
        t = gen_smallest_tree(2)
        center = next(v for v in range(t.n) if t.degree(v) == 3)
        for child in t.adj[center]:
            sub, _ = dangling(t, center, child)
            assert sub == path_tree(2)

    def test_not_an_edge(self):
        with pytest.raises(TreeError):
            dangling(path_tree(3), 0, 2)

    @given(st.integers(2, 60), st.integers(0, 10**6))
    def test_partition(self, n, seed):
        t = gen_random_tree(n, seed)
        for u, v in t.edges():
            a = set(dangling(t, u, v)[1])
            b = set(dangling(t, v, u)[1])
            assert a.isdisjoint(b) and a | b == set(range(n))


class TestGenerators:
    @pytest.mark.parametrize("m,h,n", [(3, 0, 1), (2, 2, 7), (3, 3, 40)])
    def test_mary_sizes(self, m, h, n):
        assert gen_complete_mary(m, h).n == n

    @pytest.mark.parametrize("m,h", [(2, 5), (3, 3), (5, 2)])
    def test_mary_leaves_at_depth_h(self, m, h):
        t = gen_complete_mary(m, h)
        depth = root_at(t, 0).depth()
        assert {depth[v] for v in range(t.n) if t.degree(v) <= 1} == {h}
        assert is_tree(t)

    @pytest.mark.parametrize("k,n", [(1, 1), (2, 7), (3, 25)])
    def test_smallest_sizes(self, k, n):
        t = gen_smallest_tree(k)
        assert t.n == n == 3 ** k - 2
        assert is_tree(t)

    def test_smallest_two_shape(self):
        t = gen_smallest_tree(2)
        assert sorted(t.degree(v) for v in range(7)) == [1, 1, 1, 2, 2, 2, 3]

    def test_size_cap(self):
        with pytest.raises(CapExceeded):
            gen_complete_mary(2, 10, Caps(size=100))

    def test_random_small(self):
        assert gen_random_tree(1, 5).n == 1
        assert list(gen_random_tree(2, 5).edges()) == [(0, 1)]

    def test_random_deterministic(self):
        assert gen_random_tree(8, 42) == gen_random_tree(8, 42)

    @given(st.integers(1, 200), st.integers(0, 10**6))
    def test_random_is_tree(self, n, seed):
        assert is_tree(gen_random_tree(n, seed))

    @pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 3), (4, 16), (5, 125)])
    def test_enumeration_counts(self, n, count):
        trees = list(enumerate_labeled_trees(n))
        assert len(trees) == count
        assert len({tuple(t.edges()) for t in trees}) == count
        assert all(is_tree(t) for t in trees)

    def test_enumeration_cap(self):
        with pytest.raises(CapExceeded):
            next(enumerate_labeled_trees(9))


class TestDiameterAndCanon:
    def test_diameter(self):
        assert diameter(Tree(1, [[]])) == 0
        assert diameter(path_tree(5)) == 4
        assert diameter(gen_complete_mary(2, 3)) == 6

    @settings(max_examples=50)
    @given(st.integers(1, 30), st.integers(0, 10**6), st.randoms())
    def test_canonical_form_isomorphism(self, n, seed, rnd):
        t = gen_random_tree(n, seed)
        perm = list(range(n))
        rnd.shuffle(perm)
        s = relabel(t, perm)
        code_t, list_t = canonical_form(t)
        code_s, list_s = canonical_form(s)
        assert code_t == code_s
        iso = dict(zip(list_t, list_s))
        assert all(s.has_edge(iso[u], iso[v]) for u, v in t.edges())
