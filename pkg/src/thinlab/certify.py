"""Independent checks and brute-force oracles for thinness.

Nothing here uses the fast engine: consistency is checked directly from the
definition, the per-order optimum comes from a chain partition of the
auxiliary graph's complement, and the two thinness oracles are exhaustive
order search and the recursive saturation characterization.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .caps import Caps, check_cap, load_caps
from .layout import ConsistentSolution
from .tree_core import Tree


class MalformedSolution(ValueError):
    """The order is not a permutation of the vertices or a class is invalid."""


class AuxInvariantError(AssertionError):
    """The non-edge relation of the auxiliary graph is not transitive."""


class Violation(NamedTuple):
    """``u`` before ``v`` before ``w``, same class for u and v, w adjacent to u only."""

    u: int
    v: int
    w: int


def _positions(n: int, order: Sequence[int]) -> list[int]:
    if len(order) != n:
        raise MalformedSolution(f"order has {len(order)} entries, expected {n}")
    pos = [-1] * n
    for i, v in enumerate(order):
        if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
            raise MalformedSolution(f"order entry {v!r} is not a vertex id")
        if pos[v] >= 0:
            raise MalformedSolution(f"vertex {v} appears twice in the order")
        pos[v] = i
    return pos


def check_consistent(tree: Tree, sol: ConsistentSolution) -> Violation | None:
    """``None`` if consistent, else the violation smallest by (pos w, pos v, pos u)."""
    n = tree.n
    pos = _positions(n, sol.order)
    cls: list[int] = []
    for v in range(n):
        c = sol.classes.get(v)
        if c is None:
            raise MalformedSolution(f"vertex {v} has no class")
        if not isinstance(c, (int, np.integer)) or c < 1:
            raise MalformedSolution(f"vertex {v} has invalid class {c!r}")
        cls.append(int(c))

    members: dict[int, list[int]] = {}
    for v in sol.order:
        members.setdefault(cls[v], []).append(pos[v])

    order = sol.order
    adj = tree.adj
    for pw, w in enumerate(order):
        # earliest earlier neighbor of w in each class
        first: dict[int, int] = {}
        nbr_pos = set()
        for u in adj[w]:
            pu = pos[u]
            nbr_pos.add(pu)
            if pu < pw:
                c = cls[u]
                if c not in first or pu < first[c]:
                    first[c] = pu
        best: tuple[int, int] | None = None
        for c, pu in first.items():
            plist = members[c]
            i = bisect_right(plist, pu)
            j = bisect_left(plist, pw)
            while i < j and plist[i] in nbr_pos:
                i += 1
            if i < j and (best is None or plist[i] < best[0]):
                best = (plist[i], pu)
        if best is not None:
            return Violation(order[best[1]], order[best[0]], w)
    return None


@dataclass
class AuxGraph:
    """G_< for a fixed order, stored as bitsets over order positions.

    ``later[i]`` has bit ``j`` (``j > i``) set when the vertices at positions
    ``i`` and ``j`` may not share a class.
    """

    n: int
    order: list[int]
    pos: list[int]
    later: list[int]

    def has_edge(self, a: int, b: int) -> bool:
        i, j = sorted((self.pos[a], self.pos[b]))
        return i != j and bool(self.later[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (earlier, later) vertex pairs, sorted by positions."""
        out = []
        for i, bits in enumerate(self.later):
            j = 0
            while bits:
                if bits & 1:
                    out.append((self.order[i], self.order[j]))
                bits >>= 1
                j += 1
        return out

    def non_edge_successors(self, i: int) -> int:
        """Positions ``j > i`` not adjacent to position ``i``."""
        full = (1 << self.n) - 1
        return ~self.later[i] & full & ~((1 << (i + 1)) - 1)


def build_aux_graph(tree: Tree, order: Sequence[int], caps: Caps | None = None) -> AuxGraph:
    """Exact G_< : (v, w) with v before w is an edge iff some z after w is adjacent to v but not w."""
    caps = caps or load_caps()
    n = tree.n
    check_cap("auxiliary graph", n, caps.aux)
    pos = _positions(n, order)
    later = [0] * n
    adj = tree.adj
    for z in range(n):
        pz = pos[z]
        nbr_bits = 0
        for y in adj[z]:
            nbr_bits |= 1 << pos[y]
        candidates = ((1 << pz) - 1) & ~nbr_bits
        for v in adj[z]:
            pv = pos[v]
            if pv < pz:
                later[pv] |= candidates & ~((1 << (pv + 1)) - 1)
    return AuxGraph(n, list(order), pos, later)


def _assert_transitive(aux: AuxGraph) -> None:
    succ = [aux.non_edge_successors(i) for i in range(aux.n)]
    for i in range(aux.n):
        reach = 0
        bits = succ[i]
        j = 0
        while bits:
            if bits & 1:
                reach |= succ[j]
            bits >>= 1
            j += 1
        if reach & ~succ[i]:
            raise AuxInvariantError(f"non-edge relation not transitive at position {i}")


def min_classes_for_order(tree: Tree, order: Sequence[int], caps: Caps | None = None,
                          check_transitive: bool = True) -> tuple[int, dict[int, int]]:
    """Fewest classes consistent with ``order`` and one optimal class map.

    Classes are chains of the non-edge relation (a partial order); a minimum
    chain cover is ``n`` minus a maximum matching on that relation.
    """
    aux = build_aux_graph(tree, order, caps)
    n = aux.n
    if n == 0:
        return 0, {}
    if check_transitive:
        _assert_transitive(aux)
    rows: list[int] = []
    cols: list[int] = []
    for i in range(n):
        bits = aux.non_edge_successors(i) >> (i + 1)
        j = i + 1
        while bits:
            if bits & 1:
                rows.append(i)
                cols.append(j)
            bits >>= 1
            j += 1
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    # match[i] = position following i in its chain, or -1
    match = maximum_bipartite_matching(graph, perm_type="column")
    has_pred = [False] * n
    for j in match:
        if j >= 0:
            has_pred[j] = True
    classes: dict[int, int] = {}
    count = 0
    for start in range(n):
        if has_pred[start]:
            continue
        count += 1
        i = int(start)
        while i >= 0:
            classes[aux.order[i]] = count
            i = int(match[i])
    return count, classes


def _max_clique(nbrs: Sequence[int], cand: int) -> int:
    """Size of the largest clique inside bitset ``cand`` (tiny graphs only)."""
    if not cand:
        return 0
    best = 0
    while cand:
        if cand.bit_count() <= best:
            break
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        size = 1 + _max_clique(nbrs, cand & nbrs[v])
        if size > best:
            best = size
    return best


def thinness_by_order_enumeration(tree: Tree, caps: Caps | None = None) -> int:
    """Minimum over all orders of the clique number of G_<.

    Search over order prefixes. Once ``v`` and ``w`` are placed (v first), the
    edge v-w of G_< is already decided: a witness z is either placed after w
    or not yet placed, hence after w. So a prefix whose graph has a clique of
    size k+1 can be pruned, and failed prefixes are memoized by (placed set,
    graph on it), which determines every completion.
    """
    caps = caps or load_caps()
    n = tree.n
    check_cap("order enumeration", n, caps.enum)
    if n <= 1:
        return 1
    nb = [0] * n
    for v in range(n):
        for u in tree.adj[v]:
            nb[v] |= 1 << u
    full = (1 << n) - 1

    def feasible(k: int) -> bool:
        dead: set[tuple[int, tuple[int, ...]]] = set()
        g = [0] * n

        def extend(placed: int) -> bool:
            if placed == full:
                return True
            key = (placed, tuple(g))
            if key in dead:
                return False
            rest = full & ~placed
            bits = rest
            while bits:
                low = bits & -bits
                w = low.bit_length() - 1
                bits ^= low
                future = rest & ~low
                # v placed joins w if some unplaced z != w sees v but not w
                witnessed = 0
                zs = future & ~nb[w]
                while zs:
                    zl = zs & -zs
                    witnessed |= nb[zl.bit_length() - 1]
                    zs ^= zl
                new = witnessed & placed
                if new and 1 + _max_clique(g, new) > k:
                    continue
                g[w] = new
                touched = new
                while touched:
                    tl = touched & -touched
                    g[tl.bit_length() - 1] |= low
                    touched ^= tl
                ok = extend(placed | low)
                touched = new
                while touched:
                    tl = touched & -touched
                    g[tl.bit_length() - 1] &= ~low
                    touched ^= tl
                g[w] = 0
                if ok:
                    return True
            dead.add(key)
            return False

        return extend(0)

    k = 1
    while not feasible(k):
        k += 1
    return k


class _CharOracle:
    """Thinness via saturation, over connected vertex sets held as bitmasks."""

    def __init__(self, tree: Tree) -> None:
        self.tree = tree
        self.nb = [sum(1 << u for u in tree.adj[v]) for v in range(tree.n)]
        self.memo: dict[tuple[int, int], bool] = {}

    def side(self, region: int, y: int, z: int) -> int:
        """Vertices of ``region`` reachable from z without crossing y."""
        nb = self.nb
        allowed = region & ~(1 << y)
        seen = 1 << z
        frontier = seen
        while frontier:
            grow = 0
            f = frontier
            while f:
                low = f & -f
                grow |= nb[low.bit_length() - 1]
                f ^= low
            frontier = grow & allowed & ~seen
            seen |= frontier
        return seen

    def at_least(self, region: int, k: int) -> bool:
        """thin(region) >= k."""
        if k <= 1:
            return region != 0
        key = (region, k)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        nb = self.nb
        edge_ok: dict[tuple[int, int], bool] = {}

        def heavy(y: int, z: int) -> bool:
            r = edge_ok.get((y, z))
            if r is None:
                r = self.at_least(self.side(region, y, z), k - 1)
                edge_ok[(y, z)] = r
            return r

        result = False
        bits = region
        while bits and not result:
            low = bits & -bits
            x = low.bit_length() - 1
            bits ^= low
            count = 0
            for y in _members(nb[x] & region):
                if any(heavy(y, z) for z in _members(nb[y] & region & ~low)):
                    count += 1
                    if count >= 3:
                        result = True
                        break
        self.memo[key] = result
        return result

    def thinness(self, region: int) -> int:
        k = 1
        while self.at_least(region, k + 1):
            k += 1
        return k


def _members(bits: int) -> Iterable[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def thinness_by_characterization(tree: Tree, caps: Caps | None = None) -> int:
    """Smallest k such that no vertex has three k-neighbors."""
    caps = caps or load_caps()
    check_cap("characterization oracle", tree.n, caps.oracle)
    oracle = _CharOracle(tree)
    return oracle.thinness((1 << tree.n) - 1)


def dangling_thinness(tree: Tree, v: int, u: int, caps: Caps | None = None) -> int:
    """thin(dangling(v, u)) by the characterization oracle."""
    caps = caps or load_caps()
    check_cap("characterization oracle", tree.n, caps.oracle)
    if u not in tree.adj[v]:
        raise ValueError(f"({v}, {u}) is not an edge")
    oracle = _CharOracle(tree)
    return oracle.thinness(oracle.side((1 << tree.n) - 1, v, u))


def k_neighborhood(tree: Tree, x_set: Iterable[int], k: int,
                   caps: Caps | None = None) -> set[int]:
    """Neighbors v of X (outside X) with a neighbor u outside X and thin(dangling(v, u)) >= k."""
    caps = caps or load_caps()
    check_cap("characterization oracle", tree.n, caps.oracle)
    xs = set(x_set)
    if not xs:
        raise ValueError("x_set must be nonempty")
    oracle = _CharOracle(tree)
    full = (1 << tree.n) - 1
    out = set()
    for x in xs:
        for v in tree.adj[x]:
            if v in xs or v in out:
                continue
            if any(u not in xs and oracle.at_least(oracle.side(full, v, u), k)
                   for u in tree.adj[v]):
                out.add(v)
    return out
