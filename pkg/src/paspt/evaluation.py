"""Experiment harness: graph generators, failure sampling, the exact
reference distances and stretch measurement.

All randomness comes from :class:`random.Random` (Mersenne Twister
MT19937) seeded with the configured integer seed, so results reproduce
across platforms and Python versions that keep that generator stable.
"""
from __future__ import annotations

import csv
import io
import math
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as sp_dijkstra

from .general import build_paspt
from .graph import UNREACHABLE, ParameterError, WeightedGraph, read_graph
from .structure import VARIANTS, FtStructure, PathFailure, path_failure
from .tree import ShortestPathTree, build_spt
from .twopath import build_paspt2

WEIGHT_LO = 100
WEIGHT_HI = 100_000
ER_RETRIES = 100

Seed = Union[int, random.Random]


def _rng(seed: Seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _weighted(n: int, pairs: Iterable[tuple[int, int]], rng: random.Random, lo: int, hi: int) -> WeightedGraph:
    if lo > hi or lo <= 0:
        raise ParameterError("weights need 0 < lo <= hi")
    return WeightedGraph(n, [(u, v, float(rng.randint(lo, hi))) for u, v in sorted(pairs)])


def _connected(n: int, pairs: Sequence[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comps = n
    for u, v in pairs:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            comps -= 1
    return comps <= 1


def _pair(n: int, idx: int) -> tuple[int, int]:
    # Inverse of the row-major numbering of pairs i < j.
    total = n * (n - 1) // 2
    rest = total - 1 - idx
    k = (math.isqrt(8 * rest + 1) - 1) // 2
    i = n - 2 - k
    j = idx - (total - (k + 1) * (k + 2) // 2) + i + 1
    return i, j


def gen_er(n: int, m: int, seed: Seed, lo: int = WEIGHT_LO, hi: int = WEIGHT_HI) -> WeightedGraph:
    """Uniform G(n, m) graph, redrawn until connected."""
    if n < 1 or m < n - 1 or m > n * (n - 1) // 2:
        raise ParameterError(f"no connected simple graph with n={n}, m={m}")
    rng = _rng(seed)
    total = n * (n - 1) // 2
    for _ in range(ER_RETRIES):
        pairs = [_pair(n, i) for i in rng.sample(range(total), m)]
        if _connected(n, pairs):
            return _weighted(n, pairs, rng, lo, hi)
    raise ParameterError(f"no connected G({n}, {m}) sample in {ER_RETRIES} draws")


def gen_ba(n: int, m: int, seed: Seed, lo: int = WEIGHT_LO, hi: int = WEIGHT_HI) -> WeightedGraph:
    """Preferential attachment hitting exactly ``m`` edges.

    With ``a`` the largest value such that ``a * (n - a) <= m`` the graph
    starts as a star on ``a + 1`` vertices and every later vertex attaches
    to ``a`` distinct earlier vertices chosen proportionally to degree; the
    first ``m - a * (n - a)`` of them attach one extra edge.
    """
    if n < 2 or m < n - 1:
        raise ParameterError(f"no connected graph with n={n}, m={m}")
    a = 1
    while 2 * (a + 1) <= n and (a + 1) * (n - a - 1) <= m:
        a += 1
    rem = m - a * (n - a)
    if rem > n - a - 1:
        raise ParameterError(f"preferential attachment cannot reach m={m} for n={n}")
    rng = _rng(seed)
    pairs = [(0, v) for v in range(1, a + 1)]
    ends = [0] * a + list(range(1, a + 1))
    for v in range(a + 1, n):
        want = a + 1 if v - a - 1 < rem else a
        chosen: set[int] = set()
        while len(chosen) < want:
            chosen.add(rng.choice(ends))
        for u in sorted(chosen):
            pairs.append((u, v))
            ends += (u, v)
    return _weighted(n, pairs, rng, lo, hi)


def gen_grid(rows: int, cols: int, seed: Seed, lo: int = WEIGHT_LO, hi: int = WEIGHT_HI) -> WeightedGraph:
    """``rows x cols`` grid, vertices numbered row by row."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ParameterError("grid needs at least two vertices")
    pairs = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                pairs.append((v, v + 1))
            if r + 1 < rows:
                pairs.append((v, v + cols))
    return _weighted(rows * cols, pairs, _rng(seed), lo, hi)


def sample_failure(t: ShortestPathTree, f: int, len_range: tuple[int, int], seed: Seed) -> PathFailure:
    """Length uniform in ``len_range`` (capped by ``f`` and the tree depth),
    then the deepest vertex uniform among vertices at least that deep."""
    rng = _rng(seed)
    depth = max(t.level)
    lo, hi = max(1, len_range[0]), min(len_range[1], f, depth)
    if lo > hi:
        raise ParameterError(f"no failure of length {len_range[0]}..{len_range[1]} fits a tree of depth {depth}")
    length = rng.randint(lo, hi)
    pool = [v for v in range(t.n) if t.level[v] >= length]
    return path_failure(t, rng.choice(pool), length)


@lru_cache(maxsize=8)
def _csr_parts(g: WeightedGraph):
    arr = np.array(g.edges, dtype=float).reshape(-1, 3)
    return arr[:, 0].astype(np.int64), arr[:, 1].astype(np.int64), arr[:, 2]


def brute_force_distances(g: WeightedGraph, root: int, fail: Optional[PathFailure] = None,
                          removed: Iterable[tuple[int, int]] = ()) -> list[float]:
    """Exact distances from ``root`` in ``G - F`` (scipy's Dijkstra)."""
    u, v, w = _csr_parts(g)
    keep = np.ones(len(w), dtype=bool)
    gone = list(fail.edges) if fail is not None else []
    gone += list(removed)
    for a, b in gone:
        keep[g.edge_id(a, b)] = False
    mat = csr_matrix((w[keep], (u[keep], v[keep])), shape=(g.n, g.n))
    d = sp_dijkstra(mat, directed=False, indices=root)
    return [float(x) for x in d]


def relaxation_distances(g: WeightedGraph, root: int, fail: Optional[PathFailure] = None) -> list[float]:
    """Bellman-Ford on ``G - F``; slow, used only to cross-check
    :func:`brute_force_distances`."""
    gone = {g.edge_id(a, b) for a, b in fail.edges} if fail is not None else set()
    dist = [UNREACHABLE] * g.n
    dist[root] = 0.0
    for _ in range(g.n):
        changed = False
        for eid, (a, b, w) in enumerate(g.edges):
            if eid in gone:
                continue
            if dist[a] + w < dist[b]:
                dist[b] = dist[a] + w
                changed = True
            if dist[b] + w < dist[a]:
                dist[a] = dist[b] + w
                changed = True
        if not changed:
            break
    return dist


class StretchBoundError(AssertionError):
    """A measured stretch left the range its structure guarantees."""


def stretch_bound(variant: str, k: int, length: int) -> int:
    return 3 if variant == "two_path" else (2 * k - 1) * (2 * length + 1)


@dataclass
class ExperimentConfig:
    label: str
    family: str
    n: int = 0
    m: int = 0
    rows: int = 0
    cols: int = 0
    path: Optional[str] = None
    seed: int = 0
    lo: int = WEIGHT_LO
    hi: int = WEIGHT_HI
    f: int = 10
    k: int = 1
    trials: int = 100
    variant: str = "general"
    len_range: Optional[tuple[int, int]] = None
    root: Optional[int] = None

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ParameterError("weight range needs lo <= hi")
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.variant not in VARIANTS:
            raise ParameterError(f"unknown variant {self.variant!r}")
        if self.variant == "two_path" and self.f != 2:
            raise ParameterError("the two_path variant handles f = 2 only")
        if self.len_range is not None:
            self.len_range = (int(self.len_range[0]), int(self.len_range[1]))

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ParameterError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    def graph(self) -> WeightedGraph:
        if self.family == "er":
            return gen_er(self.n, self.m, self.seed, self.lo, self.hi)
        if self.family == "ba":
            return gen_ba(self.n, self.m, self.seed, self.lo, self.hi)
        if self.family == "grid":
            return gen_grid(self.rows, self.cols, self.seed, self.lo, self.hi)
        if self.family == "file":
            if not self.path:
                raise ParameterError("family 'file' needs a path")
            return read_graph(self.path)
        raise ParameterError(f"unknown graph family {self.family!r}")

    def lengths(self) -> tuple[int, int]:
        if self.len_range is not None:
            return self.len_range
        return (2, self.f) if self.f >= 2 else (1, 1)


CSV_HEADER = ("graph", "n", "m", "variant", "f", "k", "edges_H", "avg_stretch",
              "max_stretch", "disconnected", "build_ms", "query_us")


@dataclass
class ReportRow:
    graph: str
    n: int
    m: int
    variant: str
    f: int
    k: int
    edges_h: int
    avg_stretch: Optional[float]
    max_stretch: Optional[float]
    disconnected: int
    build_ms: Optional[float] = None
    query_us: Optional[float] = None
    ratios: list[float] = field(default_factory=list, repr=False)

    def cells(self, timing: bool = True) -> list[str]:
        def num(x: Optional[float], fmt: str) -> str:
            return "" if x is None else format(x, fmt)

        return [self.graph, str(self.n), str(self.m), self.variant, str(self.f), str(self.k),
                str(self.edges_h), num(self.avg_stretch, ".6f"), num(self.max_stretch, ".6f"),
                str(self.disconnected),
                num(self.build_ms, ".1f") if timing else "",
                num(self.query_us, ".1f") if timing else ""]


def build_structure(g: WeightedGraph, root: int, variant: str, f: int, k: int,
                    tree: Optional[ShortestPathTree] = None) -> FtStructure:
    if variant == "two_path":
        return build_paspt2(g, root, tree=tree)
    return build_paspt(g, root, f, k, tree=tree)


def measure(g: WeightedGraph, h: FtStructure, fail: PathFailure, variant: str, k: int) -> tuple[list[float], int]:
    """Stretch ratios over the vertices the failure detaches in the tree
    (and that ``G - F`` still reaches), plus the number of detached ones."""
    t = h.base
    d_g = brute_force_distances(g, t.root, fail)
    d_h = h.distances(fail)
    bound = stretch_bound(variant, k, fail.length)
    ratios = []
    detached = t.subtree(fail.top)
    for v in detached:
        if d_g[v] == UNREACHABLE:
            continue
        ratio = d_h[v] / d_g[v]
        if not 1.0 <= ratio <= bound:
            raise StretchBoundError(
                f"vertex {v}: d_H={d_h[v]} d_G={d_g[v]} ratio {ratio} outside [1, {bound}]")
        ratios.append(ratio)
    return ratios, len(detached)


def run_experiment(cfg: ExperimentConfig) -> ReportRow:
    g = cfg.graph()
    rng = random.Random(cfg.seed)
    root = cfg.root if cfg.root is not None else rng.randrange(g.n)
    t = build_spt(g, root)
    start = time.perf_counter()
    h = build_structure(g, root, cfg.variant, cfg.f, cfg.k, tree=t)
    build_ms = (time.perf_counter() - start) * 1000.0

    ratios: list[float] = []
    detached = 0
    elapsed = 0.0
    queries = 0
    for _ in range(cfg.trials):
        fail = sample_failure(t, cfg.f, cfg.lengths(), rng)
        start = time.perf_counter()
        r, d = measure(g, h, fail, cfg.variant, cfg.k)
        elapsed += time.perf_counter() - start
        queries += d
        ratios += r
        detached += d
    avg = sum(ratios) / len(ratios) if ratios else None
    top = max(ratios) if ratios else None
    query_us = elapsed * 1e6 / queries if queries else None
    return ReportRow(cfg.label, g.n, g.m, cfg.variant, cfg.f, cfg.k, h.edge_count,
                     avg, top, detached, build_ms, query_us, ratios)


def write_csv(rows: Iterable[ReportRow], out: Optional[io.TextIOBase] = None, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.cells(timing))
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def table1_configs(trials: int = 100, seed: int = 1) -> list[ExperimentConfig]:
    """The nine synthetic rows of the reference experiment.  Grid sizes are
    the nearest rectangular grids to the reported vertex counts."""
    return [
        ExperimentConfig("ERD-1", "er", n=500, m=50_000, seed=seed, trials=trials),
        ExperimentConfig("ERD-2", "er", n=1000, m=50_000, seed=seed, trials=trials),
        ExperimentConfig("ERD-3", "er", n=5000, m=50_000, seed=seed, trials=trials),
        ExperimentConfig("BAR-1", "ba", n=500, m=1491, seed=seed, trials=trials),
        ExperimentConfig("BAR-2", "ba", n=1000, m=2991, seed=seed, trials=trials),
        ExperimentConfig("BAR-3", "ba", n=5000, m=14_991, seed=seed, trials=trials),
        ExperimentConfig("GRI-1", "grid", rows=20, cols=25, seed=seed, trials=trials),
        ExperimentConfig("GRI-2", "grid", rows=25, cols=40, seed=seed, trials=trials),
        ExperimentConfig("GRI-3", "grid", rows=50, cols=100, seed=seed, trials=trials),
    ]
