"""Closed forms and upper/lower bounds for tree thinness, plus a constructive
solution for trees with few almost-leaves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .layout import ConsistentSolution
from .tree_core import Tree, diameter, leaves, max_degree, root_at


class UnsupportedInput(ValueError):
    """The tree does not meet a construction's precondition."""


def closed_form_mary(m: int, h: int) -> int:
    """Thinness of the complete m-ary tree of height h, for m >= 3."""
    if m < 3:
        raise ValueError("m must be >= 3; use closed_form_binary for m = 2")
    if h < 0:
        raise ValueError("height must be >= 0")
    return (h + 2) // 2


def closed_form_binary(h: int) -> int:
    """Thinness of the complete binary tree of height h."""
    if h < 0:
        raise ValueError("height must be >= 0")
    return (h + 3) // 3


def smallest_tree_size(k: int) -> int:
    """Fewest vertices of a tree with thinness k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 3 ** k - 2


def count_leaves(tree: Tree) -> int:
    return len(leaves(tree))


def almost_leaves(tree: Tree) -> list[int]:
    """Non-leaves with at most one non-leaf neighbor."""
    adj = tree.adj
    is_leaf = [len(a) <= 1 for a in adj]
    return [v for v in range(tree.n)
            if not is_leaf[v] and sum(1 for u in adj[v] if not is_leaf[u]) <= 1]


def count_almost_leaves(tree: Tree) -> int:
    return len(almost_leaves(tree))


@dataclass(frozen=True)
class BoundEntry:
    name: str
    bound: float
    measured: int
    # "<=" means measured <= bound is required
    relation: str
    satisfied: bool


@dataclass
class BoundReport:
    thinness: int
    entries: list[BoundEntry] = field(default_factory=list)

    @property
    def all_satisfied(self) -> bool:
        return all(e.satisfied for e in self.entries)

    def failed(self) -> list[BoundEntry]:
        return [e for e in self.entries if not e.satisfied]

    def to_csv(self) -> str:
        lines = ["name,bound,measured,relation,satisfied"]
        for e in self.entries:
            bound = f"{e.bound:.6g}" if isinstance(e.bound, float) else str(e.bound)
            lines.append(f"{e.name},{bound},{e.measured},{e.relation},{str(e.satisfied).lower()}")
        return "\n".join(lines) + "\n"


def check_bounds(tree: Tree, k: int) -> BoundReport:
    """Evaluate every applicable bound against the measured thinness ``k``.

    Comparisons involving logarithms are done in exact integer arithmetic.
    """
    n = tree.n
    report = BoundReport(k)
    add = report.entries.append

    add(BoundEntry("log3", math.log(n + 2, 3), k, "<=", 3 ** k <= n + 2))

    if n >= 2:
        nleaves = count_leaves(tree)
        need = 3 ** (k - 1) + 3
        add(BoundEntry("leaves", need / 2, nleaves, ">=", 2 * nleaves >= need))

    d = diameter(tree)
    cap = (d + 4) // 4
    add(BoundEntry("diameter", cap, k, "<=", k <= cap))
    if max_degree(tree) <= 3:
        cap3 = (d + 8) // 6
        add(BoundEntry("diameter_deg3", cap3, k, "<=", k <= cap3))

    t_al = count_almost_leaves(tree)
    if t_al >= 2:
        add(BoundEntry("almost_leaves", t_al - 1, k, "<=", k <= t_al - 1))
    return report


def almost_leaves_solution(tree: Tree) -> ConsistentSolution:
    """A consistent solution with at most t-1 classes, t = number of almost-leaves.

    Strip the leaves, root what remains at one of its leaves, open a class at
    every other leaf and let each vertex continue its first child's class.
    The order is a postorder with each stripped leaf placed just before its
    neighbor, in that neighbor's class.
    """
    adj = tree.adj
    n = tree.n
    is_leaf = [len(a) <= 1 for a in adj]
    core = [v for v in range(n) if not is_leaf[v]]
    if len(core) < 2:
        raise UnsupportedInput(
            f"tree has {count_almost_leaves(tree)} almost-leaves; at least 2 are needed")
    # the core is a tree; its leaves are exactly the almost-leaves
    root = next(v for v in core if sum(1 for u in adj[v] if not is_leaf[u]) == 1)
    rooted = root_at(tree, root)
    kids = [[c for c in rooted.children[v] if not is_leaf[c]] for v in range(n)]

    classes: dict[int, int] = {}
    order: list[int] = []
    opened = 0
    # iterative postorder over the core
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        v, done = stack.pop()
        if not done:
            stack.append((v, True))
            for c in reversed(kids[v]):
                stack.append((c, False))
            continue
        if kids[v]:
            classes[v] = classes[kids[v][0]]
        else:
            opened += 1
            classes[v] = opened
        for u in adj[v]:
            if is_leaf[u]:
                order.append(u)
                classes[u] = classes[v]
        order.append(v)
    return ConsistentSolution(order, classes)
