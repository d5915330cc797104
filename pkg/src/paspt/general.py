"""Fault-tolerant SPT for up to ``f`` consecutive failures on a root path.

For every vertex ``v`` the last ``min(f, level(v))`` tree edges above ``v``
are removed, which splits the tree into components.  The cheapest non-tree
edge between each pair of components (measured as a detour through the
component roots) is recorded in a small auxiliary graph; its edges, or the
edges of a ``(2k-1)``-spanner of it, are added to the tree.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .graph import ParameterError, WeightedGraph, edge_key
from .spanner import build_spanner
from .structure import FtStructure, make_structure
from .tree import ShortestPathTree, build_spt


@dataclass(frozen=True)
class AuxEdge:
    """Edge between components ``i < j``; ``x`` lies in component ``i``,
    ``y`` in component ``j`` and ``(x, y)`` is the witness graph edge."""

    i: int
    j: int
    weight: float
    x: int
    y: int


@dataclass
class AuxGraph:
    owner: int
    roots: list[int]
    failed: list[tuple[int, int]]
    edges: dict[tuple[int, int], AuxEdge] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.roots)

    def graph(self) -> WeightedGraph:
        return WeightedGraph(self.size, [(e.i, e.j, e.weight) for _, e in sorted(self.edges.items())])

    def oriented(self, a: int, b: int) -> tuple[int, int]:
        """Witness endpoints ordered as (end in component a, end in component b)."""
        e = self.edges[(a, b) if a < b else (b, a)]
        return (e.x, e.y) if e.i == a else (e.y, e.x)


def build_aux_graph(g: WeightedGraph, t: ShortestPathTree, v: int, f: int) -> AuxGraph:
    """Auxiliary graph of ``v``: components of the tree minus the last
    ``min(f, level(v))`` edges above ``v``, joined by their best crossing
    edges.  Component 0 is the root's component."""
    if f < 1:
        raise ParameterError("f must be >= 1")
    lv = t.level[v]
    if lv <= 0:
        return AuxGraph(v, [t.root], [])
    s = min(f, lv)
    path = t.path_up(v, t.ancestor_at(v, lv - s))
    path.reverse()
    # path = z_{l-s}, ..., z_l ; components are rooted at z_{l-s+1..l}
    roots = [t.root] + path[1:]
    failed = list(zip(path, path[1:]))
    index = {z: j for j, z in enumerate(path[1:], 1)}
    failed_ids = {t.parent_edge[z] for z in path[1:]}
    top = path[1]

    dist, parent = t.dist, t.parent
    comp: dict[int, int] = {}
    members = t.subtree(top)
    for u in members:
        comp[u] = index[u] if u in index else comp[parent[u]]
    rootdist = [dist[r] for r in roots]
    rootdist[0] = 0.0

    best: dict[tuple[int, int], tuple[float, tuple[int, int], int, int]] = {}
    for u in members:
        cu = comp[u]
        du = dist[u] - rootdist[cu]
        for y, w, eid in g.adj[u]:
            cy = comp.get(y)
            if cy is None:
                cy = 0
            elif cy == cu or y < u:
                continue
            if eid in failed_ids:
                continue
            val = du + w + dist[y] - rootdist[cy]
            if cu < cy:
                pair, x_, y_ = (cu, cy), u, y
            else:
                pair, x_, y_ = (cy, cu), y, u
            cand = (val, edge_key(u, y), x_, y_)
            old = best.get(pair)
            if old is None or cand[:2] < old[:2]:
                best[pair] = cand
    edges = {pair: AuxEdge(pair[0], pair[1], val, x, y) for pair, (val, _, x, y) in sorted(best.items())}
    return AuxGraph(v, roots, failed, edges)


def _selected_witnesses(g: WeightedGraph, t: ShortestPathTree, v: int, f: int, k: int) -> list[tuple[int, int]]:
    aux = build_aux_graph(g, t, v, f)
    if not aux.edges:
        return []
    if k == 1:
        chosen = aux.edges.values()
    else:
        sp = build_spanner(aux.graph(), k)
        chosen = [aux.edges[(a, b)] for a, b, _ in sp.edges]
    return sorted(edge_key(e.x, e.y) for e in chosen)


def build_paspt(g: WeightedGraph, root: int, f: int, k: int = 1,
                tree: Optional[ShortestPathTree] = None, workers: int = 1) -> FtStructure:
    """Tree plus the witness edges of every auxiliary graph (or of a
    ``(2k-1)``-spanner of it when ``k > 1``)."""
    if f < 1 or k < 1:
        raise ParameterError("f and k must be >= 1")
    t = tree if tree is not None else build_spt(g, root)
    vertices = [v for v in t.order if v != t.root]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            chunks = list(pool.map(lambda v: _selected_witnesses(g, t, v, f, k), vertices))
    else:
        chunks = [_selected_witnesses(g, t, v, f, k) for v in vertices]
    keys = set()
    for c in chunks:
        keys.update(c)
    return make_structure(g, t, keys, f, k, "general")
