"""Shortest-path trees, ancestry/LCA indexing and heavy-path decomposition."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graph import UNREACHABLE, ParameterError, SearchResult, WeightedGraph, dijkstra


class ShortestPathTree:
    """A rooted spanning tree of the vertices reachable from ``root``.

    Besides parent/distance/level arrays it keeps a preorder of the tree so
    that ``v`` lies in the subtree of ``a`` iff
    ``tin[a] <= tin[v] < tout[a]``.  Unreachable vertices have
    ``dist == UNREACHABLE``, ``level == -1`` and ``tin == -1``.
    """

    def __init__(
        self,
        root: int,
        parent: Sequence[int],
        dist: Sequence[float],
        parent_edge: Optional[Sequence[int]] = None,
        m: Optional[int] = None,
    ):
        n = len(parent)
        if not 0 <= root < n:
            raise ParameterError(f"root {root} outside 0..{n - 1}")
        self.root = root
        self.n = n
        self.parent = list(parent)
        self.dist = list(dist)
        self.parent_edge = list(parent_edge) if parent_edge is not None else [-1] * n
        children: list[list[int]] = [[] for _ in range(n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                children[p].append(v)
        self.children = children

        level = [-1] * n
        tin = [-1] * n
        tout = [-1] * n
        order: list[int] = []
        level[root] = 0
        stack = [(root, False)]
        while stack:
            v, leaving = stack.pop()
            if leaving:
                tout[v] = len(order)
                continue
            tin[v] = len(order)
            order.append(v)
            stack.append((v, True))
            for c in reversed(children[v]):
                level[c] = level[v] + 1
                stack.append((c, False))
        self.level = level
        self.tin = tin
        self.tout = tout
        self.order = order

        # Per-edge membership flags, used to prefer tree edges on ties.
        self.edge_flags: Optional[list[bool]] = None
        if m is not None:
            flags = [False] * m
            for e in self.parent_edge:
                if e >= 0:
                    flags[e] = True
            self.edge_flags = flags

    @classmethod
    def from_search(cls, g: WeightedGraph, res: SearchResult) -> "ShortestPathTree":
        return cls(res.source, res.parent, res.dist, res.parent_edge, g.m)

    # -- queries -----------------------------------------------------------

    def reachable(self, v: int) -> bool:
        return self.tin[v] >= 0

    def is_ancestor(self, a: int, v: int) -> bool:
        """True iff ``a`` is ``v`` or an ancestor of ``v``."""
        ta = self.tin[a]
        return ta >= 0 and ta <= self.tin[v] < self.tout[a]

    def subtree(self, v: int) -> list[int]:
        return self.order[self.tin[v]:self.tout[v]]

    def subtree_size(self, v: int) -> int:
        return self.tout[v] - self.tin[v]

    def depth_distance(self, a: int, v: int) -> float:
        """Tree distance between ``v`` and its ancestor ``a``."""
        return self.dist[v] - self.dist[a]

    def path_up(self, v: int, a: int) -> list[int]:
        """Vertices from ``v`` up to its ancestor ``a`` (both included)."""
        path = [v]
        while v != a:
            v = self.parent[v]
            if v < 0:
                raise ParameterError(f"{a} is not an ancestor of {path[0]}")
            path.append(v)
        return path

    def path_down(self, a: int, v: int) -> list[int]:
        """Vertices from ancestor ``a`` down to ``v``."""
        path = self.path_up(v, a)
        path.reverse()
        return path

    def root_path(self, v: int) -> list[int]:
        return self.path_down(self.root, v)

    def edges(self) -> list[tuple[int, int]]:
        """Tree edges as ``(parent, child)`` pairs in preorder of the child."""
        return [(self.parent[v], v) for v in self.order if v != self.root]

    def ancestor_at(self, v: int, lvl: int) -> int:
        while self.level[v] > lvl:
            v = self.parent[v]
        return v


def build_spt(g: WeightedGraph, root: int) -> ShortestPathTree:
    """Shortest-path tree of ``g`` from ``root``.

    Ties between equally short parents go to the smallest parent id.
    """
    if not 0 <= root < g.n:
        raise ParameterError(f"root {root} outside 0..{g.n - 1}")
    return ShortestPathTree.from_search(g, dijkstra(g, root))


def _edge_ids(g: WeightedGraph, removed: Iterable) -> frozenset[int]:
    ids = set()
    for e in removed:
        if isinstance(e, int):
            ids.add(e)
        else:
            ids.add(g.edge_id(e[0], e[1]))
    return frozenset(ids)


def restricted_spt(
    g: WeightedGraph,
    root: int,
    removed: Iterable = (),
    base: Optional[ShortestPathTree] = None,
) -> ShortestPathTree:
    """Shortest-path tree of ``g`` minus ``removed`` (edge ids or pairs).

    When ``base`` is given, ties prefer edges of ``base``.
    """
    flags = base.edge_flags if base is not None else None
    res = dijkstra(g, root, _edge_ids(g, removed), preferred=flags)
    return ShortestPathTree.from_search(g, res)


def reroute_subtree(
    g: WeightedGraph,
    t: ShortestPathTree,
    sub: int,
    removed: frozenset[int] | set[int],
    banned: Optional[int] = None,
) -> SearchResult:
    """Shortest paths from the root of ``t`` after deleting edges and/or a
    vertex that all lie inside the subtree of ``sub`` (or on its parent edge).

    Vertices outside that subtree keep their tree distance and tree parent,
    so only the subtree is searched.  The result equals a full
    ``dijkstra(..., preferred=t.edge_flags)`` run.
    """
    flags = t.edge_flags
    dist = list(t.dist)
    parent = list(t.parent)
    pedge = list(t.parent_edge)
    lo, hi = t.tin[sub], t.tout[sub]
    tin = t.tin
    inside = t.order[lo:hi]
    for v in inside:
        dist[v] = UNREACHABLE
        parent[v] = -1
        pedge[v] = -1
    adj = g.adj
    heap = []
    for v in inside:
        if v == banned:
            continue
        best = UNREACHABLE
        for u, w, eid in adj[v]:
            if eid in removed or u == banned or lo <= tin[u] < hi:
                continue
            du = dist[u]
            if du == UNREACHABLE:
                continue
            nd = du + w
            if nd < best or (nd == best and _prefer(u, eid, parent[v], pedge[v], flags)):
                best = nd
                parent[v] = u
                pedge[v] = eid
        if best < UNREACHABLE:
            dist[v] = best
            heap.append((best, v))
    heapq.heapify(heap)
    done = set()
    if banned is not None:
        done.add(banned)
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w, eid in adj[u]:
            if v in done or eid in removed or not lo <= tin[v] < hi:
                continue
            nd = d + w
            cur = dist[v]
            if nd < cur:
                dist[v] = nd
                parent[v] = u
                pedge[v] = eid
                push(heap, (nd, v))
            elif nd == cur and _prefer(u, eid, parent[v], pedge[v], flags):
                parent[v] = u
                pedge[v] = eid
    return SearchResult(t.root, dist, parent, pedge)


def _prefer(u, eid, old_u, old_eid, flags) -> bool:
    if old_u < 0:
        return True
    if flags is not None and flags[eid] != flags[old_eid]:
        return flags[eid]
    return u < old_u


class LcaIndex:
    """Euler tour plus sparse table; ``query`` is O(1) after O(n log n)
    preprocessing."""

    def __init__(self, t: ShortestPathTree):
        self.tree = t
        euler: list[int] = []
        first = [-1] * t.n
        if t.n:
            stack = [(t.root, 0)]
            while stack:
                v, i = stack.pop()
                if i == 0:
                    first[v] = len(euler)
                euler.append(v)
                kids = t.children[v]
                if i < len(kids):
                    stack.append((v, i + 1))
                    stack.append((kids[i], 0))
        self.euler = euler
        self.first = first
        level = t.level
        size = len(euler)
        logs = [0] * (size + 1)
        for i in range(2, size + 1):
            logs[i] = logs[i >> 1] + 1
        self.logs = logs
        table = [euler[:]]
        j = 1
        while (1 << j) <= size:
            prev = table[-1]
            half = 1 << (j - 1)
            row = []
            for i in range(size - (1 << j) + 1):
                a, b = prev[i], prev[i + half]
                row.append(a if level[a] <= level[b] else b)
            table.append(row)
            j += 1
        self.table = table

    def query(self, u: int, v: int) -> int:
        l, r = self.first[u], self.first[v]
        if l < 0 or r < 0:
            raise ParameterError("LCA query on a vertex outside the tree")
        if l > r:
            l, r = r, l
        j = self.logs[r - l + 1]
        row = self.table[j]
        a, b = row[l], row[r - (1 << j) + 1]
        level = self.tree.level
        return a if level[a] <= level[b] else b


def lca(idx: LcaIndex, u: int, v: int) -> int:
    return idx.query(u, v)


@dataclass
class PathDecomposition:
    """Edge-disjoint ancestor-to-leaf paths covering every tree edge.

    ``paths[i][0]`` is the vertex the path hangs from (the tree root for the
    first path); ``depth[i]`` is the recursion level that produced it and
    ``child[x]`` the vertex following ``x`` on its path.
    """

    paths: list[list[int]]
    depth: list[int]
    child: dict[int, int] = field(default_factory=dict)

    def edge_count(self) -> int:
        return sum(len(p) - 1 for p in self.paths)


def decompose(t: ShortestPathTree) -> PathDecomposition:
    """Recursively split ``t`` along heavy root-to-leaf paths.

    Every subtree detached by a path hangs off a light child and therefore
    holds fewer than half of the vertices of the tree it came from.
    """
    size = [0] * t.n
    for v in reversed(t.order):
        size[v] = 1 + sum(size[c] for c in t.children[v])
    heavy = [-1] * t.n
    for v in t.order:
        best = -1
        for c in t.children[v]:
            if best < 0 or size[c] > size[best] or (size[c] == size[best] and c < best):
                best = c
        heavy[v] = best

    paths: list[list[int]] = []
    depth: list[int] = []
    child: dict[int, int] = {}
    stack: list[tuple[int, int, int]] = [(t.root, -1, 0)]
    while stack:
        start, attach, d = stack.pop()
        path = [] if attach < 0 else [attach]
        v = start
        while v >= 0:
            path.append(v)
            v = heavy[v]
        own = path[1:] if attach >= 0 else path
        for a, b in zip(own, own[1:]):
            child[a] = b
        if attach >= 0 or len(path) > 1:
            paths.append(path)
            depth.append(d)
        for x in reversed(own):
            for c in reversed(t.children[x]):
                if c != heavy[x]:
                    stack.append((c, x, d + 1))
    return PathDecomposition(paths, depth, child)
