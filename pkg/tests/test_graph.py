import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paspt.graph import (UNREACHABLE, ParameterError, WeightedGraph, dijkstra, format_dimacs,
                         format_edge_list, parse_dimacs, parse_edge_list, read_graph)
from paspt.tree import (LcaIndex, build_spt, decompose, lca, reroute_subtree, restricted_spt)

from conftest import enumerate_distances, path_graph, random_connected, random_tree


def test_rejects_bad_edges():
    with pytest.raises(ParameterError):
        WeightedGraph(2, [(0, 0, 1)])
    with pytest.raises(ParameterError):
        WeightedGraph(2, [(0, 1, 0)])
    with pytest.raises(ParameterError):
        WeightedGraph(2, [(0, 1, math.inf)])
    with pytest.raises(ParameterError):
        WeightedGraph(2, [(0, 1, 1), (1, 0, 2)])
    with pytest.raises(ParameterError):
        WeightedGraph(2, [(0, 2, 1)])


def test_edges_are_symmetric(g1):
    assert g1.weight(3, 2) == g1.weight(2, 3) == 1
    assert g1.edge_id(4, 0) == g1.edge_id(0, 4)
    assert g1.has_edge(2, 4) and not g1.has_edge(0, 3)


def test_dimacs_roundtrip_and_merge():
    text = "c comment\np sp 3 4\na 1 2 5\na 2 1 5\na 2 3 7\na 3 2 4\n"
    g = parse_dimacs(text)
    assert g.n == 3 and g.edges == ((0, 1, 5.0), (1, 2, 4.0))
    assert parse_dimacs(format_dimacs(g)) == g


def test_edge_list_roundtrip(g1, tmp_path):
    text = format_edge_list(g1)
    assert parse_edge_list("# header\n" + text) == g1
    p = tmp_path / "g.el"
    p.write_text(text)
    assert read_graph(p) == g1
    q = tmp_path / "g.gr"
    q.write_text(format_dimacs(g1))
    assert read_graph(q) == g1


def test_spt_path_graph():
    t = build_spt(path_graph(3), 0)
    assert t.dist == [0, 1, 2] and t.level == [0, 1, 2]


def test_spt_triangle_tie_is_stable():
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 2)])
    parents = {build_spt(g, 0).parent[2] for _ in range(5)}
    assert build_spt(g, 0).dist[2] == 2
    assert parents == {0}  # smallest parent id wins


def test_spt_g1(g1):
    t = build_spt(g1, 0)
    assert t.dist == [0, 1, 2, 3, 4]
    assert t.root_path(4) == [0, 1, 2, 3, 4]
    assert t.dist == enumerate_distances(g1, 0)


def test_restricted_spt_examples(g1):
    t = restricted_spt(g1, 0, [(0, 1)])
    assert t.dist[1] == 13
    assert restricted_spt(g1, 0, []).parent == build_spt(g1, 0).parent
    cut = restricted_spt(path_graph(3), 0, [(1, 2)])
    assert cut.dist[2] == UNREACHABLE and cut.level[2] == -1 and not cut.reachable(2)


def test_tree_invariants():
    g = random_connected(40, 30, 3)
    t = build_spt(g, 5)
    for v in range(g.n):
        if v == t.root:
            assert t.dist[v] == 0 and t.level[v] == 0
            continue
        p = t.parent[v]
        assert t.dist[v] == t.dist[p] + g.weight(p, v)
        assert t.level[v] == t.level[p] + 1
        for a in range(g.n):
            walk, x = False, v
            while x >= 0:
                walk |= x == a
                x = t.parent[x]
            assert t.is_ancestor(a, v) == walk


@settings(max_examples=40, deadline=None)
@given(st.integers(6, 30), st.integers(0, 40), st.integers(0, 10_000), st.data())
def test_reroute_matches_full_search(n, extra, seed, data):
    g = random_connected(n, extra, seed, 1, 4)
    t = build_spt(g, 0)
    x = data.draw(st.integers(1, n - 1))
    kids = t.children[x]
    removed = {t.parent_edge[x]}
    if kids and data.draw(st.booleans()):
        removed.add(t.parent_edge[data.draw(st.sampled_from(kids))])
    banned = x if data.draw(st.booleans()) else None
    fast = reroute_subtree(g, t, x, frozenset(removed), banned)
    full = dijkstra(g, 0, frozenset(removed), banned=banned, preferred=t.edge_flags)
    assert fast.dist == full.dist
    assert fast.parent == full.parent


def test_lca_examples():
    star = WeightedGraph(3, [(0, 1, 1), (0, 2, 1)])
    idx = LcaIndex(build_spt(star, 0))
    assert lca(idx, 1, 2) == 0
    assert lca(idx, 1, 1) == 1
    assert lca(idx, 0, 2) == 0


def test_lca_against_naive():
    t = build_spt(random_tree(60, 8), 0)
    idx = LcaIndex(t)
    rng = random.Random(1)
    for _ in range(500):
        u, v = rng.randrange(60), rng.randrange(60)
        anc = set(t.path_up(u, 0))
        w = v
        while w not in anc:
            w = t.parent[w]
        assert idx.query(u, v) == w


def test_lca_outside_tree():
    g = WeightedGraph(3, [(0, 1, 1)])
    with pytest.raises(ParameterError):
        LcaIndex(build_spt(g, 0)).query(0, 2)


def test_decompose_path_tree():
    dec = decompose(build_spt(path_graph(6), 0))
    assert dec.paths == [[0, 1, 2, 3, 4, 5]]


def test_decompose_binary_tree():
    g = WeightedGraph(7, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (1, 4, 1), (2, 5, 1), (2, 6, 1)])
    t = build_spt(g, 0)
    dec = decompose(t)
    first = set(dec.paths[0])
    for v in range(7):
        if v not in first and t.parent[v] in first:
            assert t.subtree_size(v) <= 3


@pytest.mark.parametrize("seed", range(5))
def test_decompose_random_tree(seed):
    n = 50
    t = build_spt(random_tree(n, seed), 0)
    dec = decompose(t)
    edges = [(p[i], p[i + 1]) for p in dec.paths for i in range(len(p) - 1)]
    assert len(edges) == len(set(edges)) == n - 1
    assert set(edges) == set(t.edges())
    assert max(dec.depth) <= math.log2(n) + 1
    for p, d in zip(dec.paths, dec.depth):
        start = p[0] if d == 0 else p[1]
        # The path ends at a leaf and each hanging subtree is under half the tree it left.
        assert not t.children[p[-1]]
        on = set(p[1:] if d else p)
        for v in on:
            for c in t.children[v]:
                if c not in on:
                    assert 2 * t.subtree_size(c) < t.subtree_size(start)
