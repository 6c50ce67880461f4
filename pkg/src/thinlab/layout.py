"""Optimal consistent solutions: path layouts stitched recursively.

A path ``P`` is chosen so that every component of ``T - N[P]`` has smaller
thinness; the components are solved recursively and merged around ``P``,
with ``N[P]`` placed in a fresh top class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .thinness_engine import NIL, InfoTable, SubtreeInfo, compute_thinness
from .tree_core import RootedTree, Tree, root_at


class LayoutError(ValueError):
    """Bad arguments to a layout routine (not a path, missing sub-solution...)."""


@dataclass
class ConsistentSolution:
    """A vertex order plus a class index (1-based) for each vertex."""

    order: list[int]
    classes: dict[int, int] = field(default_factory=dict)

    @property
    def num_classes(self) -> int:
        return len(set(self.classes.values()))

    @property
    def max_class(self) -> int:
        return max(self.classes.values(), default=0)

    def class_list(self, n: int | None = None) -> list[int]:
        n = len(self.order) if n is None else n
        return [self.classes[v] for v in range(n)]

    def to_text(self) -> str:
        order = " ".join(map(str, self.order))
        classes = " ".join(map(str, self.class_list()))
        return f"order: {order}\nclasses: {classes}\n"

    def to_json(self) -> str:
        return json.dumps({"order": self.order, "classes": self.class_list()})

    @classmethod
    def from_lists(cls, order: Sequence[int], classes: Sequence[int]) -> ConsistentSolution:
        return cls(list(order), dict(enumerate(classes)))

    @classmethod
    def from_text(cls, text: str) -> ConsistentSolution:
        text = text.strip()
        if text.startswith("{"):
            data = json.loads(text)
            return cls.from_lists(data["order"], data["classes"])
        fields_: dict[str, list[int]] = {}
        for line in text.splitlines():
            key, sep, rest = line.partition(":")
            if not sep or key.strip() not in ("order", "classes"):
                raise ValueError(f"unrecognized solution line {line!r}")
            fields_[key.strip()] = [int(tok) for tok in rest.split()]
        if set(fields_) != {"order", "classes"}:
            raise ValueError("solution needs 'order:' and 'classes:' lines")
        return cls.from_lists(fields_["order"], fields_["classes"])


Neighbors = Callable[[int], Iterable[int]]


def solution_given_path(tree: Tree, path: Sequence[int],
                        sub_solutions: Mapping[tuple[int, int], ConsistentSolution]
                        ) -> ConsistentSolution:
    """Merge solutions of the components of ``T - N[P]`` around the path ``P``.

    ``sub_solutions`` is keyed by the directed edge ``(v, u)`` whose dangling
    tree is the component (``v`` in ``N(P) - P``, ``u`` outside ``N[P]``).
    The result uses one class more than the largest sub-solution.
    """
    _check_path(tree, path)
    k = max((s.max_class for s in sub_solutions.values()), default=0)
    adj = tree.adj
    return _layout_along_path(path, adj.__getitem__, sub_solutions, k)


def _check_path(tree: Tree, path: Sequence[int]) -> None:
    if not path:
        raise LayoutError("path must have at least one vertex")
    if len(set(path)) != len(path) or any(not 0 <= v < tree.n for v in path):
        raise LayoutError(f"{list(path)} is not a simple path")
    for a, b in zip(path, path[1:]):
        if b not in tree.adj[a]:
            raise LayoutError(f"{list(path)} is not a path: ({a}, {b}) is not an edge")


def _layout_along_path(path: Sequence[int], neighbors: Neighbors,
                       sub_solutions: Mapping[tuple[int, int], ConsistentSolution],
                       k: int) -> ConsistentSolution:
    on_path = set(path)
    top = k + 1
    order: list[int] = []
    classes: dict[int, int] = {}
    for x in path:
        for v in neighbors(x):
            if v in on_path:
                continue
            order.append(v)
            classes[v] = top
            for u in neighbors(v):
                if u == x:
                    continue
                sub = sub_solutions.get((v, u))
                if sub is None:
                    raise LayoutError(f"missing solution for the component behind ({v}, {u})")
                order.extend(sub.order)
                classes.update(sub.classes)
        order.append(x)
        classes[x] = top
    return ConsistentSolution(order, classes)


class SubtreeView:
    """The part of a rooted tree still alive, seen through global vertex ids.

    Components of ``T - N[P]`` are separated by dead vertices, so each one is
    the set of alive descendants of its topmost vertex.
    """

    def __init__(self, rooted: RootedTree) -> None:
        self.rooted = rooted
        self.alive = bytearray(b"\x01") * rooted.n

    def children(self, v: int) -> list[int]:
        alive = self.alive
        return [c for c in self.rooted.children[v] if alive[c]]

    def parent(self, v: int) -> int | None:
        p = self.rooted.parent[v]
        return p if p is not None and self.alive[p] else None

    def neighbors(self, v: int) -> list[int]:
        kids = self.children(v)
        p = self.parent(v)
        return kids if p is None else [p, *kids]


def _child_k_neighbors(view: SubtreeView, v: int, k: int, table: InfoTable) -> list[int]:
    return [c for c in view.children(v)
            if any(table[g].thin >= k for g in view.children(c))]


def _descend(view: SubtreeView, start: int, k: int, table: InfoTable) -> list[int]:
    path = [start]
    v = start
    while True:
        nxt = _child_k_neighbors(view, v, k, table)
        if not nxt:
            return path
        if len(nxt) > 1:
            raise AssertionError(
                f"vertex {v} has {len(nxt)} child {k}-neighbors but is not critical")
        v = nxt[0]
        path.append(v)


def build_path(view: SubtreeView, root: int, table: InfoTable) -> list[int]:
    """Path whose closed neighborhood leaves only components of smaller thinness."""
    info = table[root]
    k = info.thin
    x = info.crit
    if x is NIL:
        return _descend(view, root, k, table)
    arms = _child_k_neighbors(view, x, k, table)
    if len(arms) != 2:
        raise AssertionError(f"critical vertex {x} has {len(arms)} child {k}-neighbors")
    left = _descend(view, arms[0], k, table)
    right = _descend(view, arms[1], k, table)
    return left[::-1] + [x] + right


def consistent_solution(tree: Tree, root: int = 0,
                        table: InfoTable | None = None) -> ConsistentSolution:
    """An optimal consistent solution; classes are numbered ``1..thin(T)``.

    ``table`` is the info table from :func:`compute_thinness` for the same
    root; it is copied, not modified.
    """
    if table is None:
        _, table = compute_thinness(tree, root)
    else:
        table = list(table)
    view = SubtreeView(root_at(tree, root))
    return _solve(view, root, table)


def _solve(view: SubtreeView, top: int, table: list[SubtreeInfo]) -> ConsistentSolution:
    k = table[top].thin
    x = table[top].crit
    path = build_path(view, top, table)

    on_path = set(path)
    # neighbor lists are snapshotted before N[P] dies
    nbrs = {v: view.neighbors(v) for v in path}
    for v in path:
        for u in nbrs[v]:
            if u not in on_path:
                nbrs[u] = view.neighbors(u)
    alive = view.alive
    for v in nbrs:
        alive[v] = 0

    # the component above the critical vertex keeps ``top`` as its root;
    # every ancestor of x except its parent drops the head of its lists
    upper: int | None = None
    if x is not NIL:
        p = view.rooted.parent[x]
        if p is not None and p in nbrs:
            h = view.rooted.parent[p]
            if h is not None and view.alive[h]:
                upper = h
                y: int | None = h
                while y is not None:
                    nxt = table[y].rest
                    if nxt is None or table[y].crit != x:
                        raise AssertionError(f"ancestor {y} does not list critical vertex {x}")
                    table[y] = nxt
                    y = view.parent(y)

    subs: dict[tuple[int, int], ConsistentSolution] = {}
    for xi in path:
        for v in nbrs[xi]:
            if v in on_path:
                continue
            for u in nbrs[v]:
                if u == xi:
                    continue
                comp_top = top if u == upper else u
                if table[comp_top].thin >= k:
                    raise AssertionError(
                        f"component at {comp_top} has thinness {table[comp_top].thin} >= {k}")
                subs[(v, u)] = _solve(view, comp_top, table)

    return _layout_along_path(path, nbrs.__getitem__, subs, k - 1)
