"""Stretch-3 structure and oracle for up to two consecutive failed edges.

Notation used throughout: the failed pair is ``(y, x), (x, k)``; ``z`` is
the child following ``x`` on its heavy path.  After removing ``x`` the tree
falls apart into ``U_x`` (the root side), ``T(z)`` and the "other" subtrees
``O_x`` hanging from the remaining children of ``x``.

Per processed ``x`` the builder keeps replacement paths towards ``x`` and
``z``, the first edge entering each light child subtree on a detour from
``x``, and the shortest-path tree of ``G - x`` restricted to ``O_x``.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Container, Iterable, Optional, Sequence

from .graph import UNREACHABLE, ParameterError, WeightedGraph, dijkstra, edge_key
from .oracle import QueryAnswer, join
from .structure import FtStructure, PathFailure, make_structure
from .tree import LcaIndex, ShortestPathTree, build_spt, decompose, reroute_subtree

ORACLE2_MAGIC = "paspt2-oracle v1"


# -- single failures ------------------------------------------------------

@dataclass
class SwapEdgeTable:
    """``swap[c] = (u, v, w, value)``: best edge reconnecting ``T(c)`` after
    the tree edge above ``c`` fails; ``v`` lies inside ``T(c)``."""

    swap: dict[int, tuple[int, int, float, float]] = field(default_factory=dict)

    def edges(self) -> list[tuple[int, int]]:
        return sorted(edge_key(u, v) for u, v, _, _ in self.swap.values())

    def get(self, c: int) -> Optional[tuple[int, int, float, float]]:
        return self.swap.get(c)


def build_easpt3(g: WeightedGraph, t: ShortestPathTree) -> SwapEdgeTable:
    """For every tree edge ``(p, c)`` pick the crossing non-tree edge
    minimising ``d(u) + w + d_T(v, c)``; ties go to the smaller edge key.

    Each non-tree edge ``(a, b)`` crosses exactly the cuts of the tree edges
    between ``a`` (or ``b``) and their lowest common ancestor, so walking
    those two tree paths enumerates all of its candidate cuts.
    """
    lca = LcaIndex(t)
    flags = t.edge_flags
    dist, parent = t.dist, t.parent
    best: dict[int, tuple[float, tuple[int, int], int, int, float]] = {}
    for eid, (a, b, w) in enumerate(g.edges):
        if (flags is not None and flags[eid]) or not (t.reachable(a) and t.reachable(b)):
            continue
        if flags is None and (parent[a] == b or parent[b] == a):
            continue
        top = lca.query(a, b)
        key = (a, b)
        for inner, outer in ((a, b), (b, a)):
            c = inner
            while c != top:
                val = dist[outer] + w + dist[inner] - dist[c]
                old = best.get(c)
                if old is None or (val, key) < old[:2]:
                    best[c] = (val, key, outer, inner, w)
                c = parent[c]
    return SwapEdgeTable({c: (u, v, w, val) for c, (val, _, u, v, w) in sorted(best.items())})


# -- helpers --------------------------------------------------------------

class Subtree:
    """Vertex set of ``T(root)`` with O(1) membership."""

    def __init__(self, t: ShortestPathTree, root: int):
        self.t = t
        self.root = root

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and self.t.is_ancestor(self.root, v)


def first_last(p: Sequence[int], sub: Container[int]) -> list[tuple[int, int]]:
    """Edges of ``p`` up to its first vertex in ``sub`` and from its last
    vertex in ``sub`` onwards; all edges when ``p`` misses ``sub``."""
    hits = [i for i, v in enumerate(p) if v in sub]
    edges = list(zip(p, p[1:]))
    if not hits:
        return edges
    i, j = hits[0], hits[-1]
    return edges[:i] + edges[j:]


@dataclass(frozen=True)
class CompactPath:
    """A replacement path ``r ~> s -> ... -> target`` stored by its pieces.

    ``s`` is the last vertex outside ``T(x)``; the route up to ``s`` is the
    tree path.  When the path meets ``T(z)``, ``q``/``q2`` are its first and
    last vertices there and ``head = path[s..q]``, ``tail = path[q2..]``;
    otherwise ``q == q2 == -1`` and ``head`` runs to the target.
    ``x_ref`` is ``(piece, index)`` of ``x`` in head (0) or tail (1).
    """

    target: int
    s: int
    head: tuple[int, ...]
    head_len: float
    q: int = -1
    q2: int = -1
    tail: tuple[int, ...] = ()
    tail_len: float = 0.0
    x_ref: Optional[tuple[int, int]] = None

    @classmethod
    def from_path(cls, g: WeightedGraph, t: ShortestPathTree, path: Sequence[int],
                  x: int, z: int) -> "CompactPath":
        si = max(i for i, v in enumerate(path) if not t.is_ancestor(x, v))
        inz = [i for i in range(si, len(path)) if t.is_ancestor(z, path[i])]
        if inz:
            qi, q2i = inz[0], inz[-1]
            head, tail = tuple(path[si:qi + 1]), tuple(path[q2i:])
            q, q2 = path[qi], path[q2i]
        else:
            head, tail, q, q2 = tuple(path[si:]), (), -1, -1
        x_ref = None
        for piece, seq in enumerate((head, tail)):
            if x in seq:
                x_ref = (piece, seq.index(x))
                break
        return cls(path[-1], path[si], head, g.path_weight(head), q, q2, tail,
                   g.path_weight(tail) if tail else 0.0, x_ref)

    def to_list(self) -> list:
        return [self.target, self.s, list(self.head), self.head_len, self.q, self.q2,
                list(self.tail), self.tail_len, list(self.x_ref) if self.x_ref else None]

    @classmethod
    def from_list(cls, d: list) -> "CompactPath":
        target, s, head, hl, q, q2, tail, tl, xr = d
        return cls(target, s, tuple(head), float(hl), q, q2, tuple(tail), float(tl),
                   tuple(xr) if xr else None)


def _compact(g, t, path, x, z) -> Optional[CompactPath]:
    return None if path is None else CompactPath.from_path(g, t, path, x, z)


@dataclass
class XRecord:
    """Everything stored for one processed vertex ``x``.

    ``others[u] = (parent in SPT(G - x), q, segment length, root child)``
    for every ``u`` in ``O_x``; the parent is ``-1`` when ``u`` is cut off
    in ``G - x``.  ``child_edges[c] = (u, q, w)``.
    """

    x: int
    z: int
    xpath: Optional[CompactPath]
    alt_child: int
    xpath_alt: Optional[CompactPath]
    zpath: Optional[CompactPath]
    zpath_alt: dict[int, Optional[CompactPath]]
    child_edges: dict[int, tuple[int, int, float]]
    others: dict[int, tuple[int, int, float, int]]

    def entries(self) -> int:
        n = len(self.child_edges) + len(self.others)
        for cp in (self.xpath, self.xpath_alt, self.zpath, *self.zpath_alt.values()):
            if cp is not None:
                n += 1 + len(cp.head) + len(cp.tail)
        return n


# -- per-vertex protection ------------------------------------------------

@dataclass
class _Work:
    record: XRecord
    edges: set[tuple[int, int]]


def processed_vertices(t: ShortestPathTree) -> list[tuple[int, int]]:
    """``(x, z)`` for every internal non-root ``x`` along its heavy path."""
    dec = decompose(t)
    out = []
    for path, depth in zip(dec.paths, dec.depth):
        for x in (path if depth == 0 else path[1:]):
            if x != t.root and t.children[x]:
                out.append((x, dec.child[x]))
    return out


def _protect(g: WeightedGraph, t: ShortestPathTree, x: int, z: int) -> _Work:
    e_hat = t.parent_edge[x]
    kids = t.children[x]
    child_eid = {c: t.parent_edge[c] for c in kids}
    edges: set[tuple[int, int]] = set()
    runs: dict[frozenset[int], list] = {}

    def paths_without(*extra: int):
        key = frozenset((e_hat, *extra))
        if key not in runs:
            runs[key] = reroute_subtree(g, t, x, key)
        return runs[key]

    def add_path(p):
        edges.update(edge_key(a, b) for a, b in zip(p, p[1:]))

    sub_z = Subtree(t, z)
    base = paths_without()

    # Paths protecting x.
    px = base.path_to(x)
    alt_child, px_alt = -1, None
    if px is not None:
        edges.update(edge_key(a, b) for a, b in first_last(px, sub_z))
        if len(px) > 1 and px[-2] in child_eid:
            alt_child = px[-2]
            px_alt = paths_without(child_eid[alt_child]).path_to(x)
            if px_alt is not None:
                edges.update(edge_key(a, b) for a, b in first_last(px_alt, sub_z))

    # Paths protecting z.
    pz = base.path_to(z)
    pz_alt: dict[int, Optional[list[int]]] = {}
    if pz is not None:
        add_path(pz)
        for a, b in zip(pz, pz[1:]):
            c = b if a == x else a if b == x else -1
            if c in child_eid:
                pz_alt[c] = paths_without(child_eid[c]).path_to(z)
                if pz_alt[c] is not None:
                    add_path(pz_alt[c])

    # First edge entering each light child subtree on a detour from x.
    child_edges: dict[int, tuple[int, int, float]] = {}
    for c in kids:
        if c == z:
            continue
        res = dijkstra(g, x, frozenset((e_hat, child_eid[c])), preferred=t.edge_flags, stop_at=c)
        p = res.path_to(c)
        if p is None:
            continue
        i = next(i for i, v in enumerate(p) if t.is_ancestor(c, v))
        u, q = p[i - 1], p[i]
        child_edges[c] = (u, q, g.weight(u, q))
        edges.add(edge_key(u, q))

    # Shortest paths avoiding x, kept only where they enter O_x.
    gx = reroute_subtree(g, t, x, frozenset((e_hat,)), banned=x)
    others: dict[int, tuple[int, int, float, int]] = {}
    members = []
    for c in kids:
        if c != z:
            members.extend((u, c) for u in t.subtree(c))
    members.sort(key=lambda uc: (gx.dist[uc[0]], uc[0]))
    for u, c in members:
        d = gx.dist[u]
        if d == UNREACHABLE:
            others[u] = (-1, -1, UNREACHABLE, c)
            continue
        p = gx.parent[u]
        edges.add(edge_key(p, u))
        if p in others:
            q = others[p][1]
        else:
            q = p
        others[u] = (p, q, d - gx.dist[q], c)

    rec = XRecord(
        x, z,
        _compact(g, t, px, x, z), alt_child, _compact(g, t, px_alt, x, z),
        _compact(g, t, pz, x, z), {c: _compact(g, t, p, x, z) for c, p in pz_alt.items()},
        child_edges, others,
    )
    return _Work(rec, edges)


def _run(g: WeightedGraph, t: ShortestPathTree, workers: int) -> list[_Work]:
    todo = processed_vertices(t)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda xz: _protect(g, t, *xz), todo))
    return [_protect(g, t, x, z) for x, z in todo]


def build_paspt2(g: WeightedGraph, root: int, tree: Optional[ShortestPathTree] = None,
                 workers: int = 1) -> FtStructure:
    """Tree plus swap edges plus the per-vertex protection edges."""
    t = tree if tree is not None else build_spt(g, root)
    keys = set(build_easpt3(g, t).edges())
    for w in _run(g, t, workers):
        keys |= w.edges
    return make_structure(g, t, keys, 2, 1, "two_path")


# -- oracle ---------------------------------------------------------------

class Oracle2:
    """Constant-time 3-approximate distances after one or two consecutive
    failed tree edges."""

    def __init__(self, t: ShortestPathTree, swaps: SwapEdgeTable, records: dict[int, XRecord]):
        self.tree = t
        self.lca = LcaIndex(t)
        self.swaps = swaps
        self.records = records

    def entries(self) -> int:
        return len(self.swaps.swap) + sum(r.entries() for r in self.records.values())

    # tree helpers
    def _tdist(self, a: int, b: int) -> float:
        d = self.tree.dist
        return d[a] + d[b] - 2 * d[self.lca.query(a, b)]

    def _tpath(self, a: int, b: int) -> list[int]:
        l = self.lca.query(a, b)
        return join(self.tree.path_up(a, l), self.tree.path_down(l, b))

    def query(self, fail: PathFailure, t: int, want_path: bool = False) -> QueryAnswer:
        tr = self.tree
        self._validate(fail)
        if not tr.reachable(t):
            return QueryAnswer(UNREACHABLE)
        if fail.length == 1:
            cands = self._single(fail.edges[0], t)
        else:
            (_, x), (_, k) = fail.edges
            cands = self._double(x, k, t)
        best = None
        for val, route in cands:
            if val != UNREACHABLE and (best is None or val < best[0]):
                best = (val, route)
        if best is None:
            return QueryAnswer(UNREACHABLE)
        return QueryAnswer(best[0], best[1]() if want_path else None)

    def distance(self, fail: PathFailure, t: int) -> float:
        return self.query(fail, t).distance

    def _validate(self, fail: PathFailure) -> None:
        tr = self.tree
        if not 1 <= fail.length <= 2 or len(fail.edges) != fail.length:
            raise ParameterError("this oracle handles one or two failed edges")
        for p, c in fail.edges:
            if not (0 <= c < tr.n and tr.parent[c] == p):
                raise ParameterError(f"({p}, {c}) is not a tree edge")
        if fail.length == 2 and fail.edges[0][1] != fail.edges[1][0]:
            raise ParameterError("failed edges are not consecutive")

    def _single(self, e: tuple[int, int], t: int):
        tr = self.tree
        c = e[1]
        if not tr.is_ancestor(c, t):
            return [(tr.dist[t], lambda: tr.root_path(t))]
        sw = self.swaps.get(c)
        if sw is None:
            return []
        u, v, w, _ = sw
        return [(tr.dist[u] + w + self._tdist(v, t), lambda: join(tr.root_path(u), self._tpath(v, t)))]

    def _double(self, x: int, k: int, t: int):
        tr = self.tree
        d = tr.dist
        if not tr.is_ancestor(x, t):
            return [(d[t], lambda: tr.root_path(t))]
        rec = self.records[x]
        z = rec.z

        zp = rec.zpath_alt[k] if k in rec.zpath_alt else rec.zpath
        if zp is None:
            zval = UNREACHABLE
        else:
            zval = d[zp.s] + zp.head_len + d[zp.q] - d[z]

        def zroute() -> list[int]:
            return join(tr.root_path(zp.s), list(zp.head), tr.path_up(zp.q, z))

        xp = rec.xpath_alt if k == rec.alt_child else rec.xpath
        if xp is None:
            xval, xroute = UNREACHABLE, None
        elif xp.q < 0:
            xval = d[xp.s] + xp.head_len

            def xroute() -> list[int]:
                return join(tr.root_path(xp.s), list(xp.head))
        elif k != z:
            xval = d[xp.s] + xp.head_len + d[xp.q] - d[x]

            def xroute() -> list[int]:
                return join(tr.root_path(xp.s), list(xp.head), tr.path_up(xp.q, x))
        else:
            xval = zval + d[xp.q2] - d[z] + xp.tail_len

            def xroute() -> list[int]:
                return join(zroute(), tr.path_down(z, xp.q2), list(xp.tail))

        if t == x:
            return [(xval, xroute)]
        if tr.is_ancestor(z, t):
            return [(zval + d[t] - d[z], lambda: join(zroute(), tr.path_down(z, t)))]

        par, q, seg, c = rec.others[t]
        cands = []
        if par >= 0:
            def walk() -> list[int]:
                out = [t]
                while out[-1] != q:
                    out.append(rec.others[out[-1]][0])
                out.reverse()
                return out

            if not tr.is_ancestor(x, q):
                cands.append((d[q] + seg, lambda: join(tr.root_path(q), walk())))
            else:
                cands.append((zval + d[q] - d[z] + seg,
                              lambda: join(zroute(), tr.path_down(z, q), walk())))
        if c != k:
            cands.append((xval + d[t] - d[x], lambda: join(xroute(), tr.path_down(x, t))))
        elif c in rec.child_edges:
            u, qc, w = rec.child_edges[c]
            rest = w + self._tdist(qc, t)

            def down() -> list[int]:
                return join([u], self._tpath(qc, t))

            if not tr.is_ancestor(x, u):
                cands.append((d[u] + rest, lambda: join(tr.root_path(u), down())))
            else:
                cands.append((xval + d[u] - d[x] + rest,
                              lambda: join(xroute(), tr.path_down(x, u), down())))
                if tr.is_ancestor(z, u):
                    cands.append((zval + d[u] - d[z] + rest,
                                  lambda: join(zroute(), tr.path_down(z, u), down())))
        return cands

    # -- serialisation -----------------------------------------------------

    def dumps(self) -> str:
        tr = self.tree
        enc = lambda cp: cp.to_list() if cp is not None else None  # noqa: E731
        body = {
            "n": tr.n,
            "root": tr.root,
            "parent": tr.parent,
            "dist": [None if x == UNREACHABLE else x for x in tr.dist],
            "swap": [[c, u, v, w, val] for c, (u, v, w, val) in sorted(self.swaps.swap.items())],
            "records": [
                {
                    "x": r.x, "z": r.z,
                    "xpath": enc(r.xpath), "alt_child": r.alt_child, "xpath_alt": enc(r.xpath_alt),
                    "zpath": enc(r.zpath),
                    "zpath_alt": [[c, enc(p)] for c, p in sorted(r.zpath_alt.items())],
                    "child_edges": [[c, *e] for c, e in sorted(r.child_edges.items())],
                    "others": [[u, p, q, None if s == UNREACHABLE else s, c]
                               for u, (p, q, s, c) in sorted(r.others.items())],
                }
                for _, r in sorted(self.records.items())
            ],
        }
        return ORACLE2_MAGIC + "\n" + json.dumps(body, separators=(",", ":")) + "\n"

    @classmethod
    def loads(cls, body: str) -> "Oracle2":
        d = json.loads(body)
        dec = lambda cp: CompactPath.from_list(cp) if cp is not None else None  # noqa: E731
        t = ShortestPathTree(d["root"], d["parent"],
                             [UNREACHABLE if x is None else float(x) for x in d["dist"]])
        swaps = SwapEdgeTable({c: (u, v, float(w), float(val)) for c, u, v, w, val in d["swap"]})
        records = {}
        for r in d["records"]:
            records[r["x"]] = XRecord(
                r["x"], r["z"], dec(r["xpath"]), r["alt_child"], dec(r["xpath_alt"]),
                dec(r["zpath"]), {c: dec(p) for c, p in r["zpath_alt"]},
                {c: (u, q, float(w)) for c, u, q, w in r["child_edges"]},
                {u: (p, q, UNREACHABLE if s is None else float(s), c) for u, p, q, s, c in r["others"]},
            )
        return cls(t, swaps, records)


def build_oracle2(g: WeightedGraph, root: int, tree: Optional[ShortestPathTree] = None,
                  workers: int = 1) -> Oracle2:
    t = tree if tree is not None else build_spt(g, root)
    swaps = build_easpt3(g, t)
    records = {w.record.x: w.record for w in _run(g, t, workers)}
    return Oracle2(t, swaps, records)


def query2(o: Oracle2, fail: PathFailure, t: int, want_path: bool = False) -> QueryAnswer:
    return o.query(fail, t, want_path)


def failure_from_edges(t: ShortestPathTree, edges: Iterable[tuple[int, int]]) -> PathFailure:
    """Build a failure from explicit tree edges, oriented parent to child
    and ordered top-down; anything that is not a consecutive run of tree
    edges is rejected."""
    oriented = []
    for a, b in edges:
        if t.parent[b] == a:
            oriented.append((a, b))
        elif t.parent[a] == b:
            oriented.append((b, a))
        else:
            raise ParameterError(f"({a}, {b}) is not a tree edge")
    oriented.sort(key=lambda e: t.level[e[1]])
    for (_, c), (p, _) in zip(oriented, oriented[1:]):
        if c != p:
            raise ParameterError("failed edges are not consecutive")
    if not oriented:
        raise ParameterError("no failed edge given")
    return PathFailure(oriented[-1][1], len(oriented), tuple(oriented))
