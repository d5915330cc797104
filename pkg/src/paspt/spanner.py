"""Greedy (2k-1)-spanners and Thorup-Zwick approximate distance oracles.

Both are applied to the small auxiliary graphs built per vertex by the
fault-tolerant constructions, so they favour simplicity over asymptotics.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Optional

from .graph import UNREACHABLE, ParameterError, WeightedGraph


@dataclass(frozen=True)
class Spanner:
    k: int
    n: int
    edges: tuple[tuple[int, int, float], ...]

    def graph(self) -> WeightedGraph:
        return WeightedGraph(self.n, self.edges)


def _bounded_distance(adj: list[list[tuple[int, float]]], s: int, t: int, bound: float) -> float:
    dist = {s: 0.0}
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if u == t:
            return d
        if d > dist.get(u, UNREACHABLE) or d > bound:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd <= bound and nd < dist.get(v, UNREACHABLE):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return UNREACHABLE


def build_spanner(g: WeightedGraph, k: int) -> Spanner:
    """Greedy spanner: scan edges by weight (then id) and keep an edge only
    if the spanner built so far has no path within ``(2k-1)`` times its
    weight."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    if k == 1:
        return Spanner(1, g.n, g.edges)
    stretch = 2 * k - 1
    adj: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    kept = []
    for u, v, w in sorted(g.edges, key=lambda e: (e[2], e[0], e[1])):
        if _bounded_distance(adj, u, v, stretch * w) > stretch * w:
            kept.append((u, v, w))
            adj[u].append((v, w))
            adj[v].append((u, w))
    return Spanner(k, g.n, tuple(kept))


class Probe:
    """Counts table lookups performed by a query."""

    __slots__ = ("hits",)

    def __init__(self) -> None:
        self.hits = 0

    def tick(self, n: int = 1) -> None:
        self.hits += n


class SmallDistanceOracle:
    """Thorup-Zwick ``(2k-1)``-approximate distance oracle.

    ``table[v]`` maps every vertex of the bunch of ``v`` and every pivot of
    ``v`` to ``(distance, next hop towards it)``; ``pivot[i][v]`` is the
    nearest vertex of the i-th sample level.
    """

    def __init__(self, n: int, k: int, levels: list[set[int]],
                 pivot: list[list[int]], table: list[dict[int, tuple[float, int]]]):
        self.n = n
        self.k = k
        self.levels = levels
        self.pivot = pivot
        self.table = table

    def entries(self) -> int:
        return sum(len(t) for t in self.table)

    def distance(self, u: int, v: int, probe: Optional[Probe] = None) -> float:
        w, _, _ = self._meet(u, v, probe)
        if w < 0:
            return UNREACHABLE
        return self.table[u][w][0] + self.table[v][w][0]

    def path(self, u: int, v: int) -> Optional[list[int]]:
        start = u
        w, u, v = self._meet(u, v, None)
        if w < 0:
            return None
        left = self._walk(u, w)
        right = self._walk(v, w)
        right.reverse()
        path = left + right[1:]
        if path[0] != start:
            path.reverse()
        return path

    def _meet(self, u: int, v: int, probe: Optional[Probe]) -> tuple[int, int, int]:
        # Returns (meeting vertex, u, v) with the possibly swapped endpoints.
        tick = probe.tick if probe is not None else (lambda n=1: None)
        if u == v:
            return u, u, v
        w, i = u, 0
        while True:
            tick()
            if w in self.table[v]:
                tick(2)
                return w, u, v
            i += 1
            if i >= self.k:
                return -1, u, v
            u, v = v, u
            tick()
            w = self.pivot[i][u]
            if w < 0:
                return -1, u, v

    def _walk(self, v: int, w: int) -> list[int]:
        path = [v]
        while v != w:
            v = self.table[v][w][1]
            path.append(v)
        return path

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "levels": [sorted(a) for a in self.levels],
            "pivot": self.pivot,
            "table": [[[w, d, h] for w, (d, h) in sorted(t.items())] for t in self.table],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SmallDistanceOracle":
        table = [{w: (float(dd), h) for w, dd, h in t} for t in d["table"]]
        return cls(d["n"], d["k"], [set(a) for a in d["levels"]], d["pivot"], table)


def _components(g: WeightedGraph) -> list[int]:
    comp = [-1] * g.n
    for s in range(g.n):
        if comp[s] >= 0:
            continue
        comp[s] = s
        stack = [s]
        while stack:
            u = stack.pop()
            for v, _, _ in g.adj[u]:
                if comp[v] < 0:
                    comp[v] = s
                    stack.append(v)
    return comp


def _nearest(g: WeightedGraph, sources: set[int]) -> tuple[list[float], list[int], list[int]]:
    # Multi-source Dijkstra: distance to the set, owning source, forest parent.
    n = g.n
    dist = [UNREACHABLE] * n
    owner = [-1] * n
    parent = [-1] * n
    heap = []
    for s in sorted(sources):
        dist[s] = 0.0
        owner[s] = s
        parent[s] = s
        heap.append((0.0, s, s))
    heapq.heapify(heap)
    done = [False] * n
    while heap:
        d, src, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w, _ in g.adj[u]:
            nd = d + w
            if nd < dist[v] or (nd == dist[v] and not done[v] and owner[u] < owner[v]):
                dist[v] = nd
                owner[v] = owner[u]
                parent[v] = u
                heapq.heappush(heap, (nd, owner[u], v))
    return dist, owner, parent


def build_small_oracle(g: WeightedGraph, k: int, seed: int = 0) -> SmallDistanceOracle:
    """Build the oracle with sample levels drawn from ``random.Random(seed)``."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    n = g.n
    rng = random.Random(seed)
    prob = n ** (-1.0 / k) if n else 0.0
    levels: list[set[int]] = [set(range(n))]
    for _ in range(1, k):
        levels.append({v for v in sorted(levels[-1]) if rng.random() < prob})
    if k > 1:
        # Every component needs a top-level sample, or queries inside it
        # could run out of pivots.
        comp = _components(g)
        covered = {comp[v] for v in levels[k - 1]}
        for c in sorted(set(comp)):
            if c not in covered:
                for lvl in levels[1:]:
                    lvl.add(c)
    levels.append(set())

    table: list[dict[int, tuple[float, int]]] = [dict() for _ in range(n)]
    pivot: list[list[int]] = []
    near = [_nearest(g, a) for a in levels]
    for i in range(k):
        dist_i, owner_i, parent_i = near[i]
        pivot.append(owner_i)
        next_dist = near[i + 1][0]
        for w in sorted(levels[i] - levels[i + 1]):
            # Cluster of w: vertices strictly closer to w than to level i+1.
            dist = {w: 0.0}
            heap = [(0.0, w)]
            hop = {w: w}
            while heap:
                d, u = heapq.heappop(heap)
                if d > dist[u]:
                    continue
                if w not in table[u]:
                    table[u][w] = (d, hop[u])
                for v, wt, _ in g.adj[u]:
                    nd = d + wt
                    if nd < next_dist[v] and nd < dist.get(v, UNREACHABLE):
                        dist[v] = nd
                        hop[v] = u
                        heapq.heappush(heap, (nd, v))
                    elif nd == dist.get(v) and u < hop[v]:
                        hop[v] = u
        for v in range(n):
            p = owner_i[v]
            if p >= 0 and p not in table[v]:
                table[v][p] = (dist_i[v], parent_i[v] if v != p else p)
    return SmallDistanceOracle(n, k, levels[:k], pivot, table)


def oracle_distance(o: SmallDistanceOracle, u: int, v: int) -> float:
    return o.distance(u, v)


def oracle_path(o: SmallDistanceOracle, u: int, v: int) -> Optional[list[tuple[int, int]]]:
    """Edges of the walk realising ``oracle_distance(o, u, v)``."""
    p = o.path(u, v)
    if p is None:
        return None
    return list(zip(p, p[1:]))
