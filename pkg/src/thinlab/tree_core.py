"""Trees over dense integer ids: parsing, rooting, dangling trees, generators."""

from __future__ import annotations

import gc
import heapq
import itertools
import random
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .caps import Caps, check_cap, load_caps


@contextmanager
def gc_paused() -> Iterator[None]:
    """Suspend the cyclic GC while building large acyclic structures."""
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


class TreeError(ValueError):
    """The input does not describe a tree."""


class ParseError(TreeError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class Tree:
    """An undirected tree on vertices ``0..n-1``.

    ``adj[v]`` lists the neighbors of ``v`` in insertion order; that order
    drives every deterministic traversal in the package.
    """

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: list[list[int]]) -> None:
        self.n = n
        self.adj = adj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Tree:
        if n < 1:
            raise TreeError("a tree needs at least one vertex")
        adj: list[list[int]] = [[] for _ in range(n)]
        count = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise TreeError(f"vertex id out of range in edge ({u}, {v})")
            if u == v:
                raise TreeError(f"self-loop at {u}")
            adj[u].append(v)
            adj[v].append(u)
            count += 1
        if count != n - 1:
            raise TreeError(f"expected {n - 1} edges, got {count}")
        tree = cls(n, adj)
        if len(_reach(tree, 0)) != n:
            # n-1 edges and a cycle (or duplicate) means disconnected
            raise TreeError("graph is not connected (or has a cycle)")
        return tree

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield u, v

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if len(self.adj[u]) <= len(self.adj[v]) else (v, u)
        return b in self.adj[a]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Tree(n={self.n}, edges={sorted(self.edges())})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.n == other.n and sorted(self.edges()) == sorted(other.edges())

    __hash__ = None  # type: ignore[assignment]


def _reach(tree: Tree, start: int) -> list[int]:
    seen = bytearray(tree.n)
    seen[start] = 1
    out = [start]
    adj = tree.adj
    for v in out:
        for w in adj[v]:
            if not seen[w]:
                seen[w] = 1
                out.append(w)
    return out


def parse_edge_list(text: str | Iterable[str]) -> Tree:
    """Parse the edge-list format: ``n`` on the first line, then ``u v`` lines.

    Errors name the first offending (1-based) line. Blank lines are skipped.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    numbered = [(i, ln.strip()) for i, ln in enumerate(lines, 1) if ln.strip()]
    if not numbered:
        raise ParseError(1, "empty input")
    first_line, header = numbered[0]
    try:
        n = int(header)
    except ValueError:
        raise ParseError(first_line, f"expected vertex count, got {header!r}") from None
    if n < 1:
        raise ParseError(first_line, "vertex count must be >= 1")

    adj: list[list[int]] = [[] for _ in range(n)]
    # union-find catches cycles and duplicates at the offending line
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    body = numbered[1:]
    for count, (lineno, content) in enumerate(body, 1):
        if count > n - 1:
            raise ParseError(lineno, f"too many edges (expected {n - 1})")
        parts = content.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 'u v', got {content!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer vertex id in {content!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(lineno, f"vertex id out of range 0..{n - 1}")
        if u == v:
            raise ParseError(lineno, f"self-loop at {u}")
        if v in adj[u]:
            raise ParseError(lineno, f"duplicate edge ({u}, {v})")
        ru, rv = find(u), find(v)
        if ru == rv:
            raise ParseError(lineno, f"edge ({u}, {v}) closes a cycle")
        parent[ru] = rv
        adj[u].append(v)
        adj[v].append(u)
    if len(body) < n - 1:
        last = body[-1][0] + 1 if body else first_line + 1
        raise ParseError(last, f"expected {n - 1} edges, got {len(body)} (disconnected)")
    return Tree(n, adj)


def read_edge_list(path: str) -> Tree:
    with open(path, encoding="ascii") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(tree: Tree) -> str:
    lines = [str(tree.n)]
    # BFS edge order keeps parse -> format round trips stable
    order = _reach(tree, 0)
    seen = bytearray(tree.n)
    for v in order:
        seen[v] = 1
        for w in tree.adj[v]:
            if not seen[w]:
                lines.append(f"{v} {w}")
    return "\n".join(lines) + "\n"


def to_dot(tree: Tree, name: str = "T", classes: Sequence[int] | None = None) -> str:
    out = [f"graph {name} {{"]
    for v in range(tree.n):
        label = f"{v}" if classes is None else f"{v}\\nc{classes[v]}"
        out.append(f'  {v} [label="{label}"];')
    for u, v in tree.edges():
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class RootedTree:
    """Parent/children view of a tree; ``bfs_order`` lists vertices top-down.

    The children of ``bfs_order[i]`` sit at positions
    ``child_start[i]:child_start[i + 1]`` of ``bfs_order``.
    """

    tree: Tree
    root: int
    parent: list[int | None] = field(repr=False)
    bfs_order: list[int] = field(repr=False)
    child_start: list[int] = field(repr=False)

    @property
    def n(self) -> int:
        return self.tree.n

    @cached_property
    def children(self) -> list[list[int]]:
        """Children of each vertex, in adjacency order (built on first use)."""
        order = self.bfs_order
        start = self.child_start
        out: list[list[int]] = [[] for _ in range(self.n)]
        with gc_paused():
            for i, v in enumerate(order):
                a, b = start[i], start[i + 1]
                if a < b:
                    out[v] = order[a:b]
        return out

    def depth(self) -> list[int]:
        d = [0] * self.n
        for v in self.bfs_order:
            p = self.parent[v]
            if p is not None:
                d[v] = d[p] + 1
        return d

    def ancestors(self, v: int) -> Iterator[int]:
        p = self.parent[v]
        while p is not None:
            yield p
            p = self.parent[p]

    def subtree_vertices(self, v: int) -> list[int]:
        out = [v]
        children = self.children
        for u in out:
            out.extend(children[u])
        return out


def root_at(tree: Tree, r: int) -> RootedTree:
    """BFS rooting; children keep adjacency order."""
    if not 0 <= r < tree.n:
        raise TreeError(f"root {r} out of range 0..{tree.n - 1}")
    n = tree.n
    adj = tree.adj
    parent: list[int | None] = [None] * n
    order = [r]
    start = []
    seen = bytearray(n)
    seen[r] = 1
    with gc_paused():
        for v in order:
            start.append(len(order))
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = 1
                    parent[w] = v
                    order.append(w)
    start.append(n)
    return RootedTree(tree, r, parent, order, start)


def dangling(tree: Tree, v: int, u: int) -> tuple[Tree, list[int]]:
    """Component of ``tree - (v, u)`` containing ``u``, relabeled.

    Returns the component and ``id_map`` with ``id_map[local] = original``;
    ``u`` becomes local vertex 0.
    """
    if not (0 <= v < tree.n and 0 <= u < tree.n) or u not in tree.adj[v]:
        raise TreeError(f"({v}, {u}) is not an edge")
    return induced_subtree(tree, u, blocked=v)


def induced_subtree(tree: Tree, start: int, blocked: int | None = None,
                    members: set[int] | None = None) -> tuple[Tree, list[int]]:
    """Connected piece around ``start`` avoiding ``blocked`` (and outside ``members``)."""
    local = {start: 0}
    id_map = [start]
    edges = []
    for a in id_map:
        for b in tree.adj[a]:
            if b == blocked or (members is not None and b not in members):
                continue
            if b not in local:
                local[b] = len(id_map)
                id_map.append(b)
                edges.append((local[a], local[b]))
    return Tree.from_edges(len(id_map), edges), id_map


def relabel(tree: Tree, perm: Sequence[int]) -> Tree:
    """Tree with vertex ``v`` renamed ``perm[v]``."""
    return Tree.from_edges(tree.n, ((perm[u], perm[v]) for u, v in tree.edges()))


def path_tree(n: int) -> Tree:
    return Tree.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def star_tree(leaves: int) -> Tree:
    return Tree.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def spider_tree(legs: Sequence[int]) -> Tree:
    """Center 0 with one path per entry of ``legs`` (entry = leg length)."""
    edges = []
    nxt = 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Tree.from_edges(nxt, edges)


def gen_complete_mary(m: int, h: int, caps: Caps | None = None) -> Tree:
    """Complete m-ary tree of height h, level-order ids, root 0."""
    if m < 1 or h < 0:
        raise ValueError("need m >= 1 and h >= 0")
    n = h + 1 if m == 1 else (m ** (h + 1) - 1) // (m - 1)
    check_cap("complete m-ary tree size", n, (caps or load_caps()).size)
    adj: list[list[int]] = [[] for _ in range(n)]
    for c in range(1, n):
        p = (c - 1) // m
        adj[p].append(c)
        adj[c].append(p)
    return Tree(n, adj)


def gen_smallest_tree(k: int, caps: Caps | None = None) -> Tree:
    """Smallest tree of thinness k (3^k - 2 vertices).

    For k > 1: a center with three children, each child attached to the root
    of a copy of the thinness-(k-1) tree.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    check_cap("smallest tree size", 3**k - 2, (caps or load_caps()).size)
    edges: list[tuple[int, int]] = []
    counter = itertools.count()

    def build(level: int) -> int:
        root = next(counter)
        if level == 1:
            return root
        for _ in range(3):
            arm = next(counter)
            edges.append((root, arm))
            edges.append((arm, build(level - 1)))
        return root

    build(k)
    return Tree.from_edges(3**k - 2, edges)


def prufer_decode(seq: Sequence[int], n: int) -> Tree:
    if n == 1:
        return Tree(1, [[]])
    if n == 2:
        return Tree(2, [[1], [0]])
    with gc_paused():
        return _prufer_decode(seq, n)


def _prufer_decode(seq: Sequence[int], n: int) -> Tree:
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    adj: list[list[int]] = [[] for _ in range(n)]
    for x in seq:
        leaf = heapq.heappop(leaves)
        adj[leaf].append(x)
        adj[x].append(leaf)
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    adj[u].append(v)
    adj[v].append(u)
    return Tree(n, adj)


def gen_random_tree(n: int, seed: int, caps: Caps | None = None) -> Tree:
    """Uniform random labeled tree (Prüfer decoding), deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_cap("random tree size", n, (caps or load_caps()).size)
    rng = random.Random(seed)
    seq = [rng.randrange(n) for _ in range(n - 2)] if n >= 3 else []
    return prufer_decode(seq, n)


def enumerate_labeled_trees(n: int, caps: Caps | None = None) -> Iterator[Tree]:
    """All n^(n-2) labeled trees on ``0..n-1`` (one per Prüfer sequence)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_cap("labeled tree enumeration n", n, (caps or load_caps()).labeled)
    if n <= 2:
        yield prufer_decode((), n)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def bfs_distances(tree: Tree, start: int) -> list[int]:
    dist = [-1] * tree.n
    dist[start] = 0
    queue = deque([start])
    adj = tree.adj
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def diameter(tree: Tree) -> int:
    d0 = bfs_distances(tree, 0)
    far = max(range(tree.n), key=d0.__getitem__)
    return max(bfs_distances(tree, far))


def leaves(tree: Tree) -> list[int]:
    return [v for v in range(tree.n) if len(tree.adj[v]) == 1]


def max_degree(tree: Tree) -> int:
    return max(map(len, tree.adj))


# -- canonical forms (used to share brute-force work across isomorphic trees)

def _centers(tree: Tree) -> list[int]:
    if tree.n <= 2:
        return list(range(tree.n))
    deg = [len(a) for a in tree.adj]
    layer = [v for v in range(tree.n) if deg[v] == 1]
    remaining = tree.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in tree.adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return layer


def _rooted_code(tree: Tree, root: int) -> tuple[str, list[int]]:
    """AHU code of the tree rooted at ``root`` plus a canonical preorder."""
    rt = root_at(tree, root)
    code: list[str] = [""] * tree.n
    for v in reversed(rt.bfs_order):
        code[v] = "(" + "".join(sorted(code[c] for c in rt.children[v])) + ")"
    order: list[int] = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        kids = sorted(rt.children[v], key=code.__getitem__)
        stack.extend(reversed(kids))
    return code[root], order


def canonical_form(tree: Tree) -> tuple[str, list[int]]:
    """Isomorphism-invariant code and a vertex listing aligned across isomorphic trees.

    Two trees with equal codes are isomorphic, and zipping their listings
    gives an isomorphism.
    """
    return min((_rooted_code(tree, c) for c in _centers(tree)), key=lambda t: t[0])
