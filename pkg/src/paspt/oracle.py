"""Sensitivity oracles answering root distances after a path failure.

Both oracles keep the auxiliary graph of every vertex.  ``OracleConst``
additionally stores exact all-pairs distances of each auxiliary graph and,
for every failure length and every cut-off component root, the entry point
minimising ``d_T(z) + d_U(z, r_h)``, which makes a distance query a constant
number of lookups.  ``OracleCompact`` stores a Thorup-Zwick oracle per
auxiliary graph instead and tries all admissible entry points at query time.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .general import AuxEdge, AuxGraph, build_aux_graph
from .graph import UNREACHABLE, ParameterError, WeightedGraph
from .spanner import Probe, SmallDistanceOracle, build_small_oracle
from .structure import PathFailure
from .tree import LcaIndex, ShortestPathTree, build_spt

ORACLE_MAGIC = "paspt-oracle v1"


@dataclass
class QueryAnswer:
    distance: float
    path: Optional[list[int]] = None
    lookups: int = 0

    @property
    def reachable(self) -> bool:
        return self.distance != UNREACHABLE

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.path, self.path[1:])) if self.path else []


def _tick(probe: Optional[Probe], n: int = 1) -> None:
    if probe is not None:
        probe.tick(n)


def join(*segments: list[int]) -> list[int]:
    """Concatenate vertex sequences that share their junction vertices."""
    out: list[int] = []
    for seg in segments:
        if out and seg and out[-1] == seg[0]:
            out.extend(seg[1:])
        else:
            out.extend(seg)
    return out


def _apsp(size: int, edges: dict[tuple[int, int], AuxEdge]) -> tuple[list[list[float]], list[list[int]]]:
    inf = UNREACHABLE
    d = [[0.0 if i == j else inf for j in range(size)] for i in range(size)]
    nxt = [[j if i == j else -1 for j in range(size)] for i in range(size)]
    for (i, j), e in edges.items():
        d[i][j] = d[j][i] = e.weight
        nxt[i][j], nxt[j][i] = j, i
    for m in range(size):
        dm = d[m]
        for i in range(size):
            dim = d[i][m]
            if dim == inf:
                continue
            di, ni = d[i], nxt[i]
            for j in range(size):
                nd = dim + dm[j]
                if nd < di[j]:
                    di[j] = nd
                    ni[j] = ni[m]
    return d, nxt


def _enc(x: float):
    return None if x == UNREACHABLE else x


def _dec(x) -> float:
    return UNREACHABLE if x is None else float(x)


class _AuxOracle:
    """State shared by both oracles: the tree, its LCA index and one
    auxiliary graph per vertex."""

    kind = ""

    def __init__(self, t: ShortestPathTree, f: int, k: int, aux: dict[int, AuxGraph]):
        self.tree = t
        self.f = f
        self.k = k
        self.lca = LcaIndex(t)
        self.aux = aux

    def _check(self, fail: PathFailure) -> None:
        if fail.length > self.f:
            raise ParameterError(f"failure of {fail.length} edges exceeds f = {self.f}")

    def _locate(self, fail: PathFailure, t: int, probe: Optional[Probe]) -> Optional[int]:
        """Component root of ``t`` after the failure, or ``None`` when ``t``
        stays in the root's component."""
        tr = self.tree
        v, eta = fail.deepest, fail.length
        _tick(probe, 3)
        u = self.lca.query(v, t)
        if tr.level[u] <= tr.level[v] - eta:
            return None
        return u

    def _expand(self, aux: AuxGraph, hops: list[int]) -> list[int]:
        tr = self.tree
        segs = [tr.root_path(aux.roots[hops[0]])]
        for a, b in zip(hops, hops[1:]):
            x, y = aux.oriented(a, b)
            segs.append(tr.path_down(aux.roots[a], x))
            segs.append(tr.path_up(y, aux.roots[b]))
        return join(*segs)

    def _finish(self, fail: PathFailure, t: int, want_path: bool, probe: Probe) -> QueryAnswer:
        tr = self.tree
        if not tr.reachable(t) or not tr.reachable(fail.deepest):
            return QueryAnswer(UNREACHABLE, None, probe.hits)
        u = self._locate(fail, t, probe)
        if u is None:
            _tick(probe)
            return QueryAnswer(tr.dist[t], tr.root_path(t) if want_path else None, probe.hits)
        aux = self.aux[fail.deepest]
        h = len(aux.roots) - 1 - (tr.level[fail.deepest] - tr.level[u])
        value, hops = self._route(fail, aux, h, probe, want_path)
        if value == UNREACHABLE:
            return QueryAnswer(UNREACHABLE, None, probe.hits)
        _tick(probe, 2)
        dist = value + tr.dist[t] - tr.dist[u]
        path = join(self._expand(aux, hops), tr.path_down(u, t)) if want_path else None
        return QueryAnswer(dist, path, probe.hits)

    def _route(self, fail, aux, h, probe, want_path):
        raise NotImplementedError

    def query(self, fail: PathFailure, t: int, want_path: bool = False) -> QueryAnswer:
        self._check(fail)
        return self._finish(fail, t, want_path, Probe())

    # -- serialisation -----------------------------------------------------

    def _dump_base(self) -> dict:
        tr = self.tree
        return {
            "kind": self.kind,
            "n": tr.n,
            "root": tr.root,
            "f": self.f,
            "k": self.k,
            "parent": tr.parent,
            "dist": [_enc(d) for d in tr.dist],
            "aux": [[v, a.roots, [[e.i, e.j, e.weight, e.x, e.y] for e in a.edges.values()]]
                    for v, a in sorted(self.aux.items())],
        }

    @staticmethod
    def _load_base(d: dict) -> tuple[ShortestPathTree, dict[int, AuxGraph]]:
        t = ShortestPathTree(d["root"], d["parent"], [_dec(x) for x in d["dist"]])
        aux = {}
        for v, roots, edges in d["aux"]:
            es = {(i, j): AuxEdge(i, j, float(w), x, y) for i, j, w, x, y in edges}
            failed = list(zip(roots[1:], roots[2:]))
            if len(roots) > 1:
                failed.insert(0, (t.parent[roots[1]], roots[1]))
            aux[v] = AuxGraph(v, roots, failed, es)
        return t, aux

    def dumps(self) -> str:
        return ORACLE_MAGIC + "\n" + json.dumps(self._dump(), separators=(",", ":")) + "\n"

    def _dump(self) -> dict:
        raise NotImplementedError


class OracleConst(_AuxOracle):
    """Constant query time, exact all-pairs tables per auxiliary graph."""

    kind = "const"

    def __init__(self, t, f, aux, apsp, selection):
        super().__init__(t, f, 1, aux)
        self.apsp = apsp
        self.selection = selection

    def entries(self) -> int:
        return sum(len(d) ** 2 for d, _ in self.apsp.values()) + len(self.selection)

    def _route(self, fail, aux, h, probe, want_path):
        _tick(probe)
        entry = self.selection.get((fail.deepest, fail.length, aux.roots[h]))
        if entry is None:
            return UNREACHABLE, []
        z, value = entry
        hops = []
        if want_path:
            nxt = self.apsp[fail.deepest][1]
            a = aux.roots.index(z)
            hops = [a]
            while a != h:
                a = nxt[a][h]
                hops.append(a)
        return value, hops

    def distance(self, fail: PathFailure, t: int, probe: Optional[Probe] = None) -> float:
        self._check(fail)
        return self._finish(fail, t, False, probe if probe is not None else Probe()).distance

    def _dump(self) -> dict:
        d = self._dump_base()
        d["apsp"] = [[v, [[_enc(x) for x in row] for row in dd], nx] for v, (dd, nx) in sorted(self.apsp.items())]
        d["selection"] = [[v, eta, rh, z, val] for (v, eta, rh), (z, val) in sorted(self.selection.items())]
        return d

    @classmethod
    def _load(cls, d: dict) -> "OracleConst":
        t, aux = cls._load_base(d)
        apsp = {v: ([[_dec(x) for x in row] for row in dd], nx) for v, dd, nx in d["apsp"]}
        selection = {(v, eta, rh): (z, float(val)) for v, eta, rh, z, val in d["selection"]}
        return cls(t, d["f"], aux, apsp, selection)


class OracleCompact(_AuxOracle):
    """Thorup-Zwick oracle per auxiliary graph; queries scan the at most
    ``f`` admissible entry points."""

    kind = "compact"

    def __init__(self, t, f, k, aux, small):
        super().__init__(t, f, k, aux)
        self.small = small

    def entries(self) -> int:
        return sum(o.entries() for o in self.small.values())

    def _route(self, fail, aux, h, probe, want_path):
        tr = self.tree
        small = self.small[fail.deepest]
        s = len(aux.roots) - 1
        best, best_z = UNREACHABLE, -1
        for z in range(0, s - fail.length + 1):
            _tick(probe)
            base = 0.0 if z == 0 else tr.dist[aux.roots[z]]
            val = base + small.distance(z, h, probe)
            if val < best:
                best, best_z = val, z
        if best_z < 0:
            return UNREACHABLE, []
        hops = small.path(best_z, h) if want_path else []
        return best, hops

    def _dump(self) -> dict:
        d = self._dump_base()
        d["small"] = [[v, o.to_dict()] for v, o in sorted(self.small.items())]
        return d

    @classmethod
    def _load(cls, d: dict) -> "OracleCompact":
        t, aux = cls._load_base(d)
        small = {v: SmallDistanceOracle.from_dict(o) for v, o in d["small"]}
        return cls(t, d["f"], d["k"], aux, small)


def _aux_tables(g: WeightedGraph, t: ShortestPathTree, f: int) -> dict[int, AuxGraph]:
    return {v: build_aux_graph(g, t, v, f) for v in t.order if v != t.root}


def build_oracle_const(g: WeightedGraph, root: int, f: int,
                       tree: Optional[ShortestPathTree] = None) -> OracleConst:
    if f < 1:
        raise ParameterError("f must be >= 1")
    t = tree if tree is not None else build_spt(g, root)
    aux = _aux_tables(g, t, f)
    apsp = {}
    selection = {}
    for v, a in aux.items():
        d, nxt = _apsp(a.size, a.edges)
        apsp[v] = (d, nxt)
        s = a.size - 1
        base = [0.0] + [t.dist[r] for r in a.roots[1:]]
        for eta in range(1, s + 1):
            admissible = range(0, s - eta + 1)
            for h in range(s - eta + 1, s + 1):
                best, best_z = UNREACHABLE, -1
                for z in admissible:
                    val = base[z] + d[z][h]
                    if val < best:
                        best, best_z = val, z
                if best_z >= 0:
                    selection[(v, eta, a.roots[h])] = (a.roots[best_z], best)
    return OracleConst(t, f, aux, apsp, selection)


def build_oracle_compact(g: WeightedGraph, root: int, f: int, k: int, seed: int = 0,
                         tree: Optional[ShortestPathTree] = None) -> OracleCompact:
    if f < 1 or k < 1:
        raise ParameterError("f and k must be >= 1")
    t = tree if tree is not None else build_spt(g, root)
    aux = _aux_tables(g, t, f)
    small = {v: build_small_oracle(a.graph(), k, seed) for v, a in aux.items()}
    return OracleCompact(t, f, k, aux, small)


def query_distance_const(o: OracleConst, fail: PathFailure, t: int,
                         probe: Optional[Probe] = None) -> float:
    return o.distance(fail, t, probe)


def query_path_const(o: OracleConst, fail: PathFailure, t: int) -> QueryAnswer:
    return o.query(fail, t, want_path=True)


def query_compact(o: OracleCompact, fail: PathFailure, t: int, want_path: bool = False) -> QueryAnswer:
    return o.query(fail, t, want_path)


def load_oracle(text: str):
    """Load any oracle written by ``dumps`` (general or two-path)."""
    head, _, body = text.partition("\n")
    head = head.strip()
    if head == ORACLE_MAGIC:
        d = json.loads(body)
        if d["kind"] == "const":
            return OracleConst._load(d)
        if d["kind"] == "compact":
            return OracleCompact._load(d)
        raise ParameterError(f"unknown oracle kind {d['kind']!r}")
    from .twopath import ORACLE2_MAGIC, Oracle2
    if head == ORACLE2_MAGIC:
        return Oracle2.loads(body)
    raise ParameterError("unrecognised oracle header")
