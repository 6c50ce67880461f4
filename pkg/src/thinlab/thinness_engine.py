"""O(n log n) thinness of a tree via critical-vertex and thinness lists.

Every vertex ``v`` of the rooted tree gets a :class:`SubtreeInfo`, computed
bottom-up from the infos of its children and grandchildren. The info is a
linked list of (critical vertex, thinness) pairs: the first pair describes
the complete rooted subtree at ``v``; each further pair describes what is
left after cutting off the subtree hanging from the parent of the previous
critical vertex.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence, Union

from .tree_core import RootedTree, Tree, gc_paused, root_at


class _Nil(enum.Enum):
    NIL = "nil"

    def __repr__(self) -> str:
        return "NIL"


#: Marks the absence of a critical vertex.
NIL = _Nil.NIL

Critical = Union[int, _Nil]


class SubtreeInfo(NamedTuple):
    """Head cell of the paired critical-vertex / thinness lists.

    Immutable, so prepending shares the tail and dropping the head is just
    taking ``rest``.
    """

    crit: Critical
    thin: int
    rest: Optional["SubtreeInfo"] = None

    @property
    def crit_list(self) -> tuple[Critical, ...]:
        return tuple(cell.crit for cell in self.cells())

    @property
    def thin_list(self) -> tuple[int, ...]:
        return tuple(cell.thin for cell in self.cells())

    def cells(self) -> Iterator[SubtreeInfo]:
        cell: SubtreeInfo | None = self
        while cell is not None:
            yield cell
            cell = cell.rest

    @property
    def length(self) -> int:
        return sum(1 for _ in self.cells())

    def __repr__(self) -> str:
        return f"SubtreeInfo(crit={list(self.crit_list)}, thin={list(self.thin_list)})"

    @classmethod
    def from_lists(cls, crit_list: Sequence[Critical], thin_list: Sequence[int]) -> SubtreeInfo:
        if len(crit_list) != len(thin_list) or not crit_list:
            raise ValueError("lists must be nonempty and of equal length")
        info = None
        for c, t in zip(reversed(crit_list), reversed(thin_list)):
            info = cls(c, t, info)
        assert info is not None
        return info


LEAF = SubtreeInfo(NIL, 1)

# shared single-cell infos without a critical vertex; thinness stays small
_PLAIN = [SubtreeInfo(NIL, t) for t in range(64)]
_PLAIN[1] = LEAF


def _plain(k: int) -> SubtreeInfo:
    return _PLAIN[k] if k < len(_PLAIN) else SubtreeInfo(NIL, k)

InfoEntry = tuple[int, SubtreeInfo]
InfoTable = list[SubtreeInfo]


class EngineInvariantError(AssertionError):
    """Inputs to :func:`compute_lists` are inconsistent."""


@dataclass(frozen=True)
class SubtreeHandle:
    """A vertex inside an ambient rooted tree (constant-time parent/children)."""

    ambient: RootedTree
    vertex: int


def child_k_neighbors(handle: SubtreeHandle, k: int, child_info: Sequence[InfoEntry],
                      gchild_info: Sequence[InfoEntry]) -> list[int]:
    """Children ``v`` of the handle's vertex with a grandchild subtree of thinness >= k."""
    parent = handle.ambient.parent
    marked = {parent[g] for g, info in gchild_info if info.thin >= k}
    return [v for v, _ in child_info if v in marked]


def compute_lists(ambient: RootedTree, r: int, child_info: list[InfoEntry],
                  gchild_info: list[InfoEntry]) -> SubtreeInfo:
    """Info of the subtree rooted at ``r`` described by its child/grandchild infos.

    ``child_info`` and ``gchild_info`` may be edited during the call (when the
    parent of a deeper critical vertex has to be cut off) but are restored
    before returning.
    """
    if not child_info:
        return LEAF
    parent = ambient.parent
    k = max(info.thin for _, info in child_info)

    k_neighbors = set()
    for g, info in gchild_info:
        if info.thin >= k:
            k_neighbors.add(parent[g])
    if len(k_neighbors) >= 3:
        return _plain(k + 1)

    heavy = [entry for entry in child_info if entry[1].thin == k]
    with_crit = [entry for entry in heavy if entry[1].crit is not NIL]
    if not with_crit:
        return SubtreeInfo(r, k) if len(k_neighbors) == 2 else _plain(k)
    if len(heavy) > 1:
        return _plain(k + 1)

    v, v_info = with_crit[0]
    x = v_info.crit
    if x == v:
        return SubtreeInfo(v, k)

    undo = _cut_critical_parent(parent, v, v_info, k, child_info, gchild_info)
    try:
        reduced = compute_lists(ambient, r, child_info, gchild_info)
    finally:
        undo()
    if reduced.thin >= k:
        return _plain(k + 1)
    return SubtreeInfo(x, k, reduced)


def _cut_critical_parent(parent: list[int | None], v: int, v_info: SubtreeInfo, k: int,
                         child_info: list[InfoEntry], gchild_info: list[InfoEntry]):
    """Edit the info lists in place to describe the tree minus rooted(parent(x)).

    ``x`` is the critical vertex heading ``v_info``. Returns a callable that
    restores both lists exactly.
    """
    x = v_info.crit
    w = parent[x]
    vi = _index_of(child_info, v)
    old_child = child_info[vi]

    if w == v:
        # rooted(v) disappears entirely, along with v's child subtrees
        child_info.pop(vi)
        removed_g = _excise(gchild_info, lambda g: parent[g] == v)

        def undo() -> None:
            child_info.insert(vi, old_child)
            _reinsert(gchild_info, removed_g)
        return undo

    if v_info.rest is None:
        raise EngineInvariantError(f"critical list of {v} too short for cut at {w}")

    gi = -1
    for j, (g, info) in enumerate(gchild_info):
        if parent[g] == v and info.thin == k and info.crit is not NIL:
            gi = j
            break
    if gi < 0:
        raise EngineInvariantError(f"no grandchild of {v} carries critical vertex {x}")
    old_gchild = gchild_info[gi]
    g, g_info = old_gchild
    if g_info.crit != x:
        raise EngineInvariantError(f"grandchild {g} reports critical {g_info.crit}, expected {x}")

    child_info[vi] = (v, v_info.rest)
    if w == g:
        gchild_info.pop(gi)

        def undo() -> None:
            child_info[vi] = old_child
            gchild_info.insert(gi, old_gchild)
        return undo

    if g_info.rest is None:
        child_info[vi] = old_child
        raise EngineInvariantError(f"critical list of {g} too short for cut at {w}")
    gchild_info[gi] = (g, g_info.rest)

    def undo() -> None:
        child_info[vi] = old_child
        gchild_info[gi] = old_gchild
    return undo


def _index_of(entries: Sequence[InfoEntry], vertex: int) -> int:
    for i, (u, _) in enumerate(entries):
        if u == vertex:
            return i
    raise EngineInvariantError(f"vertex {vertex} missing from child info")


def _excise(entries: list[InfoEntry], drop) -> list[tuple[int, InfoEntry]]:
    removed = [(i, e) for i, e in enumerate(entries) if drop(e[0])]
    if removed:
        entries[:] = [e for e in entries if not drop(e[0])]
    return removed


def _reinsert(entries: list[InfoEntry], removed: list[tuple[int, InfoEntry]]) -> None:
    if not removed:
        return
    merged: list[InfoEntry] = []
    it = iter(entries)
    for i, e in removed:
        while len(merged) < i:
            merged.append(next(it))
        merged.append(e)
    merged.extend(it)
    entries[:] = merged


def compute_table(rooted: RootedTree) -> InfoTable:
    """Infos for every complete rooted subtree, filled bottom-up."""
    order = rooted.bfs_order
    start = rooted.child_start
    n = rooted.n
    # indexed by BFS position: children and grandchildren are contiguous slices
    by_pos: list[SubtreeInfo] = [LEAF] * n
    with gc_paused():
        for i in range(n - 1, -1, -1):
            a = start[i]
            b = start[i + 1]
            if a == b:
                continue
            ga = start[a]
            gb = start[b]
            if ga == gb:
                # all children are leaves: the LEAF info (thinness 1) is already right
                continue
            child_info = list(zip(order[a:b], by_pos[a:b]))
            gchild_info = list(zip(order[ga:gb], by_pos[ga:gb]))
            by_pos[i] = compute_lists(rooted, order[i], child_info, gchild_info)
        table: list[SubtreeInfo] = [LEAF] * n
        for v, info in zip(order, by_pos):
            table[v] = info
    return table


def compute_thinness(tree: Tree, root: int = 0) -> tuple[int, InfoTable]:
    """Thinness of ``tree`` and the per-vertex info table for the given root."""
    rooted = root_at(tree, root)
    table = compute_table(rooted)
    return table[root].thin, table


def thinness(tree: Tree, root: int = 0) -> int:
    return compute_thinness(tree, root)[0]


def dump_table_csv(table: Sequence[SubtreeInfo]) -> str:
    lines = ["vertex,thin_list,crit_list"]
    for v, info in enumerate(table):
        thins = ";".join(map(str, info.thin_list))
        crits = ";".join("nil" if c is NIL else str(c) for c in info.crit_list)
        lines.append(f"{v},{thins},{crits}")
    return "\n".join(lines) + "\n"
