"""Undirected positively weighted graphs, file readers and Dijkstra.

Vertices are the integers ``0..n-1``.  Every edge is stored once as
``(u, v, w)`` with ``u < v`` and gets a stable integer id (its position in
``WeightedGraph.edges``).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

UNREACHABLE = math.inf
"""Distance reported for vertices that cannot be reached."""


class ParameterError(ValueError):
    """Raised when an operation is called with infeasible parameters."""


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class WeightedGraph:
    """Immutable undirected graph with strictly positive edge weights."""

    __slots__ = ("n", "edges", "adj", "_index")

    def __init__(self, n: int, edges: Iterable[Sequence[float]]):
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        self.n = n
        index: dict[tuple[int, int], int] = {}
        stored = []
        adj: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not w > 0 or math.isinf(w):
                raise ParameterError(f"edge ({u}, {v}) has non-positive or infinite weight {w}")
            key = edge_key(u, v)
            if key in index:
                raise ParameterError(f"duplicate edge {key}")
            eid = len(stored)
            index[key] = eid
            stored.append((key[0], key[1], w))
            adj[u].append((v, w, eid))
            adj[v].append((u, w, eid))
        self.edges: tuple[tuple[int, int, float], ...] = tuple(stored)
        self.adj = adj
        self._index = index

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        return self._index[edge_key(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._index

    def weight(self, u: int, v: int) -> float:
        return self.edges[self._index[edge_key(u, v)]][2]

    def path_weight(self, path: Sequence[int]) -> float:
        return sum(self.weight(a, b) for a, b in zip(path, path[1:]))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def _merge(edges: Iterable[tuple[int, int, float]]) -> dict[tuple[int, int], float]:
    # Undirected view of possibly repeated arcs: keep the lightest copy.
    merged: dict[tuple[int, int], float] = {}
    for u, v, w in edges:
        if u == v:
            continue
        key = edge_key(u, v)
        if key not in merged or w < merged[key]:
            merged[key] = w
    return merged


def parse_dimacs(text: str) -> WeightedGraph:
    """Parse a DIMACS shortest-path ``.gr`` document (1-based ids)."""
    n = None
    arcs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "sp":
                raise ParameterError(f"line {lineno}: malformed problem line")
            n = int(parts[2])
        elif parts[0] == "a":
            if n is None:
                raise ParameterError(f"line {lineno}: arc before problem line")
            if len(parts) != 4:
                raise ParameterError(f"line {lineno}: malformed arc line")
            arcs.append((int(parts[1]) - 1, int(parts[2]) - 1, float(parts[3])))
        else:
            raise ParameterError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise ParameterError("missing problem line 'p sp n m'")
    merged = _merge(arcs)
    return WeightedGraph(n, ((u, v, w) for (u, v), w in merged.items()))


def parse_edge_list(text: str) -> WeightedGraph:
    """Parse ``u v w`` lines with 0-based ids; ``#`` starts a comment."""
    arcs = []
    n = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParameterError(f"line {lineno}: expected 'u v w'")
        u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        if u < 0 or v < 0:
            raise ParameterError(f"line {lineno}: negative vertex id")
        n = max(n, u + 1, v + 1)
        arcs.append((u, v, w))
    merged = _merge(arcs)
    return WeightedGraph(n, ((u, v, w) for (u, v), w in merged.items()))


def read_graph(path: str | Path) -> WeightedGraph:
    """Read a graph file, choosing the DIMACS parser for ``.gr`` files or
    documents that start with a ``c``/``p`` line."""
    text = Path(path).read_text(encoding="utf-8")
    head = next((ln.split()[0] for ln in text.splitlines() if ln.strip()), "")
    if str(path).endswith(".gr") or head in ("c", "p"):
        return parse_dimacs(text)
    return parse_edge_list(text)


def format_weight(w: float) -> str:
    if math.isfinite(w) and w == int(w):
        return str(int(w))
    return repr(w)


def format_edge_list(g: WeightedGraph) -> str:
    return "".join(f"{u} {v} {format_weight(w)}\n" for u, v, w in g.edges)


def format_dimacs(g: WeightedGraph) -> str:
    lines = [f"p sp {g.n} {2 * g.m}"]
    for u, v, w in g.edges:
        lines.append(f"a {u + 1} {v + 1} {format_weight(w)}")
        lines.append(f"a {v + 1} {u + 1} {format_weight(w)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Single-source shortest paths
# ---------------------------------------------------------------------------

@dataclass
class SearchResult:
    """Raw Dijkstra output: distance, parent vertex and parent edge id."""

    source: int
    dist: list[float]
    parent: list[int]
    parent_edge: list[int]

    def reachable(self, v: int) -> bool:
        return self.dist[v] != UNREACHABLE

    def path_to(self, v: int) -> Optional[list[int]]:
        if self.dist[v] == UNREACHABLE:
            return None
        path = [v]
        while v != self.source:
            v = self.parent[v]
            path.append(v)
        path.reverse()
        return path


def dijkstra(
    g: WeightedGraph,
    source: int,
    removed: frozenset[int] | set[int] = frozenset(),
    banned: Optional[int] = None,
    preferred: Optional[Sequence[bool]] = None,
    stop_at: Optional[int] = None,
) -> SearchResult:
    """Shortest paths from ``source`` in ``g`` minus the edge ids in
    ``removed`` and minus vertex ``banned``.

    Among equally short routes a vertex takes the parent edge flagged in
    ``preferred`` (indexed by edge id), then the smallest parent id.  The
    search stops once ``stop_at`` is settled; other vertices may then carry
    tentative values.
    """
    n = g.n
    adj = g.adj
    dist = [UNREACHABLE] * n
    parent = [-1] * n
    pedge = [-1] * n
    done = [False] * n
    if banned is not None:
        done[banned] = True
    dist[source] = 0.0
    heap = [(0.0, source)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == stop_at:
            break
        for v, w, eid in adj[u]:
            if done[v] or eid in removed:
                continue
            nd = d + w
            cur = dist[v]
            if nd < cur:
                dist[v] = nd
                parent[v] = u
                pedge[v] = eid
                push(heap, (nd, v))
            elif nd == cur and _better(u, eid, parent[v], pedge[v], preferred):
                parent[v] = u
                pedge[v] = eid
    return SearchResult(source, dist, parent, pedge)


def _better(u: int, eid: int, old_u: int, old_eid: int, preferred) -> bool:
    if preferred is not None:
        a, b = preferred[eid], preferred[old_eid]
        if a != b:
            return a
    return u < old_u
