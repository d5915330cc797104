"""Path failures and fault-tolerant subgraphs of a shortest-path tree."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .graph import ParameterError, WeightedGraph, dijkstra, edge_key, format_weight
from .tree import ShortestPathTree, build_spt

VARIANTS = ("general", "two_path")


@dataclass(frozen=True)
class PathFailure:
    """``length`` consecutive tree edges ending at ``deepest``.

    ``edges`` lists ``(parent, child)`` pairs from the top of the failed
    span down to ``deepest``.
    """

    deepest: int
    length: int
    edges: tuple[tuple[int, int], ...]

    @property
    def top(self) -> int:
        """Highest vertex cut off from the root by the failure."""
        return self.edges[0][1]


def path_failure(t: ShortestPathTree, v: int, length: int) -> PathFailure:
    if length < 1:
        raise ParameterError("a path failure has at least one edge")
    if not t.reachable(v) or t.level[v] < length:
        raise ParameterError(f"vertex {v} is not {length} levels below the root")
    edges = []
    c = v
    for _ in range(length):
        p = t.parent[c]
        edges.append((p, c))
        c = p
    edges.reverse()
    return PathFailure(v, length, tuple(edges))


@dataclass(frozen=True)
class FtStructure:
    """Tree ``base`` plus ``extra`` non-tree edges, built for up to ``f``
    consecutive failures with spanner parameter ``k``."""

    base: ShortestPathTree = field(compare=False)
    tree_edges: tuple[tuple[int, int, float], ...]
    extra: tuple[tuple[int, int, float], ...]
    f: int
    k: int
    variant: str

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def edge_count(self) -> int:
        return len(self.tree_edges) + len(self.extra)

    @cached_property
    def graph(self) -> WeightedGraph:
        return WeightedGraph(self.n, self.tree_edges + self.extra)

    def distances(self, fail: PathFailure) -> list[float]:
        """Exact distances from the root in ``H - F``."""
        if fail.length > self.f:
            raise ParameterError(f"failure of {fail.length} edges exceeds f = {self.f}")
        h = self.graph
        removed = frozenset(h.edge_id(p, c) for p, c in fail.edges)
        return dijkstra(h, self.base.root, removed).dist

    def dumps(self) -> str:
        lines = [f"paspt v1 {self.n} {self.f} {self.k} {self.variant} {self.base.root}"]
        lines += [f"{u} {v} {format_weight(w)}" for u, v, w in self.extra]
        return "\n".join(lines) + "\n"


def tree_edge_list(g: WeightedGraph, t: ShortestPathTree) -> tuple[tuple[int, int, float], ...]:
    return tuple(sorted(g.edges[t.parent_edge[v]] for v in t.order if v != t.root))


def make_structure(g: WeightedGraph, t: ShortestPathTree, extra_keys: Iterable[tuple[int, int]],
                   f: int, k: int, variant: str) -> FtStructure:
    keys = {edge_key(u, v) for u, v in extra_keys}
    tree = tree_edge_list(g, t)
    keys -= {(u, v) for u, v, _ in tree}
    extra = tuple(sorted((u, v, g.weight(u, v)) for u, v in keys))
    return FtStructure(t, tree, extra, f, k, variant)


def structure_distance(h: FtStructure, fail: PathFailure,
                       targets: Optional[Iterable[int]] = None) -> list[float]:
    dist = h.distances(fail)
    if targets is None:
        return dist
    return [dist[t] for t in targets]


def loads_structure(text: str, g: WeightedGraph) -> FtStructure:
    """Inverse of :meth:`FtStructure.dumps`; the tree is rebuilt from ``g``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParameterError("empty structure file")
    head = lines[0].split()
    if len(head) != 7 or head[:2] != ["paspt", "v1"]:
        raise ParameterError("not a 'paspt v1' structure file")
    n, f, k, variant, root = int(head[2]), int(head[3]), int(head[4]), head[5], int(head[6])
    if n != g.n:
        raise ParameterError(f"structure has {n} vertices, graph has {g.n}")
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}")
    t = build_spt(g, root)
    extra = []
    for ln in lines[1:]:
        u, v, w = ln.split()
        u, v = int(u), int(v)
        if not g.has_edge(u, v):
            raise ParameterError(f"edge ({u}, {v}) is not in the graph")
        extra.append((u, v, float(w)))
    return FtStructure(t, tree_edge_list(g, t), tuple(extra), f, k, variant)
