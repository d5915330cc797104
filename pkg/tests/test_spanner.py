import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paspt.graph import UNREACHABLE, WeightedGraph
from paspt.spanner import (Probe, SmallDistanceOracle, build_small_oracle, build_spanner,
                           oracle_distance, oracle_path)

from conftest import random_connected


def apsp(g: WeightedGraph) -> list[list[float]]:
    d = [[0.0 if i == j else UNREACHABLE for j in range(g.n)] for i in range(g.n)]
    for u, v, w in g.edges:
        d[u][v] = d[v][u] = min(d[u][v], w)
    for k, i, j in itertools.product(range(g.n), repeat=3):
        if d[i][k] + d[k][j] < d[i][j]:
            d[i][j] = d[i][k] + d[k][j]
    return d


def test_k1_is_identity(g1):
    assert build_spanner(g1, 1).edges == g1.edges


def test_triangle_k2():
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    sp = build_spanner(g, 2)
    assert len(sp.edges) >= 2
    d = apsp(sp.graph())
    for u, v, w in g.edges:
        assert d[u][v] <= 3 * w


def test_complete_graph_k2():
    g = WeightedGraph(10, [(u, v, 1) for u, v in itertools.combinations(range(10), 2)])
    sp = build_spanner(g, 2)
    assert len(sp.edges) <= 2 * 2 * 10 ** 1.5
    assert max(max(r) for r in apsp(sp.graph())) <= 3


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 14), st.integers(0, 30), st.integers(2, 4), st.integers(0, 10_000))
def test_spanner_stretch(n, extra, k, seed):
    g = random_connected(n, extra, seed)
    sp = build_spanner(g, k)
    full, thin = apsp(g), apsp(sp.graph())
    for u, v in itertools.combinations(range(n), 2):
        assert thin[u][v] <= (2 * k - 1) * full[u][v]


def test_exact_oracle_k1():
    g = random_connected(12, 15, 4)
    o = build_small_oracle(g, 1)
    d = apsp(g)
    for u, v in itertools.product(range(12), repeat=2):
        assert oracle_distance(o, u, v) == d[u][v]
        p = oracle_path(o, u, v)
        assert sum(g.weight(a, b) for a, b in p) == d[u][v]


def test_single_edge_oracle():
    g = WeightedGraph(2, [(0, 1, 7)])
    for k in (1, 2, 3):
        assert oracle_distance(build_small_oracle(g, k), 0, 1) == 7


def test_same_vertex():
    o = build_small_oracle(random_connected(6, 3, 1), 2)
    assert oracle_distance(o, 3, 3) == 0
    assert oracle_path(o, 3, 3) == []


@pytest.mark.parametrize("seed", range(20))
def test_oracle_k2_stretch_and_paths(seed):
    g = random_connected(8, 8, seed)
    o = build_small_oracle(g, 2, seed)
    d = apsp(g)
    for u, v in itertools.product(range(8), repeat=2):
        q = oracle_distance(o, u, v)
        assert d[u][v] <= q <= 3 * d[u][v]
        p = oracle_path(o, u, v)
        assert sum(g.weight(a, b) for a, b in p) == q
        if p:
            assert p[0][0] == u and p[-1][1] == v


def test_disconnected_pair():
    g = WeightedGraph(4, [(0, 1, 1), (2, 3, 1)])
    for k in (1, 2):
        o = build_small_oracle(g, k)
        assert oracle_distance(o, 0, 3) == UNREACHABLE
        assert oracle_path(o, 0, 3) is None
        assert oracle_distance(o, 2, 3) == 1


def test_query_cost_is_order_k():
    g = random_connected(40, 80, 2)
    for k in (1, 2, 3):
        o = build_small_oracle(g, k, 5)
        for u, v in itertools.combinations(range(40), 2):
            probe = Probe()
            o.distance(u, v, probe)
            assert probe.hits <= 3 * k + 1


def test_serialisation_roundtrip():
    g = random_connected(15, 20, 9)
    o = build_small_oracle(g, 3, 1)
    back = SmallDistanceOracle.from_dict(o.to_dict())
    for u, v in itertools.product(range(15), repeat=2):
        assert back.distance(u, v) == o.distance(u, v)
        assert back.path(u, v) == o.path(u, v)


def test_seed_determinism():
    g = random_connected(30, 40, 3)
    assert build_small_oracle(g, 2, 7).to_dict() == build_small_oracle(g, 2, 7).to_dict()
