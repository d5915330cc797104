import itertools
import random

import pytest

from paspt.graph import UNREACHABLE, WeightedGraph

G1_EDGES = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 4, 10), (4, 3, 1), (4, 2, 5)]


@pytest.fixture
def g1() -> WeightedGraph:
    return WeightedGraph(5, G1_EDGES)


def path_graph(n: int, w: float = 1.0) -> WeightedGraph:
    return WeightedGraph(n, [(i, i + 1, w) for i in range(n - 1)])


def random_tree(n: int, seed: int) -> WeightedGraph:
    rng = random.Random(seed)
    return WeightedGraph(n, [(rng.randrange(v), v, rng.randint(1, 9)) for v in range(1, n)])


def random_connected(n: int, extra: int, seed: int, lo: int = 1, hi: int = 20) -> WeightedGraph:
    """A random spanning tree plus ``extra`` random chords."""
    rng = random.Random(seed)
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    pairs = [p for p in itertools.combinations(range(n), 2) if p not in edges]
    edges |= set(rng.sample(pairs, min(extra, len(pairs))))
    return WeightedGraph(n, [(u, v, rng.randint(lo, hi)) for u, v in sorted(edges)])


def enumerate_distances(g: WeightedGraph, root: int, removed=()) -> list[float]:
    """Shortest distances by exhaustive enumeration of simple paths."""
    gone = {tuple(sorted(e)) for e in removed}
    best = [UNREACHABLE] * g.n
    best[root] = 0.0

    def walk(v, seen, d):
        for u, w, _ in g.adj[v]:
            if u in seen or tuple(sorted((u, v))) in gone:
                continue
            if d + w < best[u]:
                best[u] = d + w
            seen.add(u)
            walk(u, seen, d + w)
            seen.discard(u)

    walk(root, {root}, 0.0)
    return best
