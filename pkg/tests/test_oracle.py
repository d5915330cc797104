import random

import pytest

from paspt.evaluation import brute_force_distances
from paspt.graph import UNREACHABLE, ParameterError, WeightedGraph
from paspt.oracle import (OracleCompact, OracleConst, build_oracle_compact, build_oracle_const, load_oracle,
                          query_compact, query_distance_const, query_path_const)
from paspt.spanner import Probe
from paspt.structure import path_failure
from paspt.tree import build_spt

from conftest import random_connected


@pytest.fixture
def const_g1(g1):
    return build_oracle_const(g1, 0, 2)


def test_selection_g1(const_g1):
    # Only the root component is admissible once both edges above 3 fail.
    assert const_g1.selection[(3, 2, 3)] == (0, 11)
    assert const_g1.selection[(3, 2, 2)][0] == 0


def test_query_g1(g1, const_g1):
    fail = path_failure(const_g1.tree, 3, 2)
    assert query_distance_const(const_g1, fail, 3) == 11
    assert brute_force_distances(g1, 0, fail)[3] == 11
    assert query_distance_const(const_g1, fail, 4) == 12
    ans = query_path_const(const_g1, fail, 3)
    assert ans.path == [0, 4, 3] and g1.path_weight(ans.path) == 11


def test_root_component_is_exact(const_g1):
    fail = path_failure(const_g1.tree, 3, 2)
    for t in (0, 1):
        ans = query_path_const(const_g1, fail, t)
        assert ans.distance == const_g1.tree.dist[t]
        assert ans.path == const_g1.tree.root_path(t)


def test_leaf_single_failure():
    g = random_connected(20, 30, 6)
    o = build_oracle_const(g, 0, 3)
    t = o.tree
    for v in range(20):
        if t.children[v] or v == 0:
            continue
        aux = o.aux[v]
        s = aux.size - 1
        d, _ = o.apsp[v]
        want = min(([0.0] + [t.dist[r] for r in aux.roots[1:]])[z] + d[z][s] for z in range(s))
        if want == UNREACHABLE:
            assert (v, 1, v) not in o.selection
        else:
            assert o.selection[(v, 1, v)][1] == want


def test_level_one_has_one_entry():
    g = random_connected(20, 30, 2)
    o = build_oracle_const(g, 0, 3)
    for v in range(20):
        if o.tree.level[v] == 1:
            assert [key for key in o.selection if key[0] == v] == [(v, 1, v)]


def test_compact_matches_const_g1(g1, const_g1):
    o = build_oracle_compact(g1, 0, 2, 1)
    fail = path_failure(o.tree, 3, 2)
    assert query_compact(o, fail, 3).distance == 11


def test_length_above_f(const_g1):
    with pytest.raises(ParameterError):
        const_g1.query(path_failure(const_g1.tree, 3, 3), 3)


def test_unreachable_component():
    g = WeightedGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 5)])
    o = build_oracle_const(g, 0, 2)
    fail = path_failure(o.tree, 2, 2)
    assert o.distance(fail, 2) == 6  # 0 -> 3 -> 2
    cut = WeightedGraph(3, [(0, 1, 1), (1, 2, 1)])
    o = build_oracle_const(cut, 0, 1)
    assert o.query(path_failure(o.tree, 2, 1), 2, True).distance == UNREACHABLE


@pytest.mark.parametrize("seed", range(4))
def test_compact_k2_exhaustive(seed):
    g = random_connected(60, 120, seed)
    t = build_spt(g, 0)
    for f in (2, 4):
        o = build_oracle_compact(g, 0, f, 2, seed, tree=t)
        for v in range(60):
            for eta in range(1, min(f, t.level[v]) + 1):
                fail = path_failure(t, v, eta)
                d = brute_force_distances(g, 0, fail)
                for x in range(60):
                    ans = o.query(fail, x, x % 7 == 0)
                    if d[x] == UNREACHABLE:
                        assert ans.distance == UNREACHABLE
                        continue
                    assert d[x] <= ans.distance <= 3 * (2 * eta + 1) * d[x]
                    assert ans.lookups <= 10 * f * 2
                    if ans.path:
                        assert g.path_weight(ans.path) == ans.distance


def test_paths_avoid_failure_and_resum():
    g = random_connected(50, 90, 12)
    o = build_oracle_const(g, 0, 4)
    rng = random.Random(0)
    deep = [v for v in range(50) if o.tree.level[v] >= 1]
    for _ in range(1000):
        v = rng.choice(deep)
        eta = rng.randint(1, min(4, o.tree.level[v]))
        fail = path_failure(o.tree, v, eta)
        ans = o.query(fail, rng.randrange(50), True)
        if ans.distance == UNREACHABLE:
            continue
        assert g.path_weight(ans.path) == ans.distance
        used = {frozenset(e) for e in ans.edges()}
        assert not used & {frozenset(e) for e in fail.edges}


def test_lookup_count_const():
    g = random_connected(80, 200, 3)
    o = build_oracle_const(g, 0, 5)
    for v in range(80):
        for eta in range(1, min(5, o.tree.level[v]) + 1):
            fail = path_failure(o.tree, v, eta)
            for x in range(80):
                probe = Probe()
                o.distance(fail, x, probe)
                assert probe.hits <= 10


@pytest.mark.parametrize("kind", ["const", "compact"])
def test_roundtrip(kind):
    g = random_connected(40, 80, 5)
    o = build_oracle_const(g, 0, 3) if kind == "const" else build_oracle_compact(g, 0, 3, 2, 4)
    text = o.dumps()
    assert text.startswith("paspt-oracle v1\n")
    back = load_oracle(text)
    assert type(back) is type(o)
    rng = random.Random(1)
    for _ in range(300):
        v = rng.randrange(1, 40)
        eta = rng.randint(1, min(3, o.tree.level[v]))
        fail = path_failure(o.tree, v, eta)
        x = rng.randrange(40)
        assert back.query(fail, x, True) == o.query(fail, x, True)


def test_bad_header():
    with pytest.raises(ParameterError):
        load_oracle("nope\n{}")
