import random
from collections import Counter

import pytest
from scipy.stats import chisquare

from paspt.evaluation import (CSV_HEADER, ExperimentConfig, StretchBoundError, brute_force_distances, gen_ba,
                              gen_er, gen_grid, measure, relaxation_distances, run_experiment, sample_failure,
                              table1_configs, write_csv)
from paspt.general import build_paspt
from paspt.graph import UNREACHABLE, ParameterError, WeightedGraph
from paspt.structure import make_structure, path_failure
from paspt.tree import build_spt

from conftest import enumerate_distances, path_graph, random_connected, random_tree


def test_grid_unit_square():
    g = gen_grid(2, 2, 1)
    assert g.n == 4 and g.m == 4


def test_grid_edge_count():
    g = gen_grid(25, 40, 3)
    assert g.m == 2 * 25 * 40 - 25 - 40


def test_er_dimensions():
    g = gen_er(500, 50_000, 7)
    assert g.n == 500 and g.m == 50_000
    assert all(100 <= w <= 100_000 and w == int(w) for _, _, w in g.edges)
    assert build_spt(g, 0).reachable(499)


def test_ba_dimensions():
    for n, m in ((500, 1491), (1000, 2991), (60, 200)):
        g = gen_ba(n, m, 1)
        assert g.n == n and g.m == m
        t = build_spt(g, 0)
        assert all(t.reachable(v) for v in range(n))


def test_generators_deterministic():
    assert gen_er(50, 200, 9) == gen_er(50, 200, 9)
    assert gen_ba(50, 140, 9) == gen_ba(50, 140, 9)
    assert gen_grid(4, 5, 9) == gen_grid(4, 5, 9)
    assert gen_er(50, 200, 9) != gen_er(50, 200, 10)


def test_generator_errors():
    with pytest.raises(ParameterError):
        gen_er(5, 11, 0)
    with pytest.raises(ParameterError):
        gen_er(5, 3, 0)
    with pytest.raises(ParameterError):
        gen_ba(10, 60, 0)
    with pytest.raises(ParameterError):
        gen_grid(1, 1, 0)
    with pytest.raises(ParameterError):
        gen_grid(2, 2, 0, lo=5, hi=4)


def test_ba_degree_skew_report():
    n, m = 400, 1500
    top = lambda g: max(Counter(x for u, v, _ in g.edges for x in (u, v)).values())  # noqa: E731
    print(f"max degree BA={top(gen_ba(n, m, 1))} ER={top(gen_er(n, m, 1))}")


def test_sample_failure_uniform_pairs():
    t = build_spt(path_graph(6), 0)
    rng = random.Random(5)
    counts = Counter(sample_failure(t, 10, (2, 2), rng).deepest for _ in range(10_000))
    assert set(counts) == {2, 3, 4, 5}
    assert chisquare([counts[v] for v in (2, 3, 4, 5)]).pvalue > 1e-3


def test_sample_failure_f1():
    t = build_spt(random_connected(30, 20, 1), 0)
    rng = random.Random(0)
    assert {sample_failure(t, 1, (1, 10), rng).length for _ in range(100)} == {1}


def test_sample_failure_too_shallow():
    star = WeightedGraph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    with pytest.raises(ParameterError):
        sample_failure(build_spt(star, 0), 10, (2, 10), 0)


def test_brute_force_no_failure(g1):
    assert brute_force_distances(g1, 0) == build_spt(g1, 0).dist


def test_brute_force_g1(g1):
    fail = path_failure(build_spt(g1, 0), 3, 2)
    d = brute_force_distances(g1, 0, fail)
    assert d == enumerate_distances(g1, 0, fail.edges)
    assert d == [0, 1, 15, 11, 10]


def test_brute_force_cut():
    g = path_graph(4)
    d = brute_force_distances(g, 0, path_failure(build_spt(g, 0), 2, 1))
    assert d[2] == d[3] == UNREACHABLE


@pytest.mark.parametrize("seed", range(10))
def test_brute_force_cross_check(seed):
    g = random_connected(30, 25, seed)
    t = build_spt(g, 0)
    rng = random.Random(seed)
    for _ in range(10):
        fail = sample_failure(t, 4, (1, 4), rng)
        assert brute_force_distances(g, 0, fail) == relaxation_distances(g, 0, fail)


def test_measure_flags_violations(g1):
    t = build_spt(g1, 0)
    h = build_paspt(g1, 0, 1, 1)
    ratios, detached = measure(g1, h, path_failure(t, 2, 1), "general", 1)
    assert detached == 3 and all(r >= 1 for r in ratios)
    # With only (2,4) added, cutting (0,1) strands vertices that G still reaches.
    bad = make_structure(g1, t, [(2, 4)], 1, 1, "general")
    with pytest.raises(StretchBoundError):
        measure(g1, bad, path_failure(t, 1, 1), "general", 1)


def test_tree_only_experiment(tmp_path):
    g = random_tree(40, 5)
    p = tmp_path / "tree.el"
    p.write_text("".join(f"{u} {v} {int(w)}\n" for u, v, w in g.edges))
    row = run_experiment(ExperimentConfig("tree", "file", path=str(p), f=3, trials=20, seed=2))
    assert row.avg_stretch is None and row.disconnected > 0 and row.edges_h == 39
    assert row.cells(False)[7] == ""


def test_experiment_determinism():
    cfg = ExperimentConfig("ER", "er", n=80, m=400, seed=3, f=4, trials=30)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a.cells(False) == b.cells(False)
    assert write_csv([a], timing=False) == write_csv([b], timing=False)
    assert 1 <= a.avg_stretch <= a.max_stretch <= 9


def test_two_path_experiment():
    cfg = ExperimentConfig("G", "grid", rows=8, cols=9, seed=1, f=2, trials=30, variant="two_path")
    row = run_experiment(cfg)
    assert row.variant == "two_path" and 1 <= row.max_stretch <= 3


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig("x", "er", n=10, m=20, trials=0)
    with pytest.raises(ParameterError):
        ExperimentConfig("x", "er", lo=5, hi=1)
    with pytest.raises(ParameterError):
        ExperimentConfig("x", "er", variant="two_path", f=3)
    with pytest.raises(ParameterError):
        ExperimentConfig.from_dict({"label": "x", "family": "er", "bogus": 1})
    with pytest.raises(ParameterError):
        run_experiment(ExperimentConfig("x", "hex"))


def test_csv_header():
    assert write_csv([]).strip() == ",".join(CSV_HEADER)
    assert len(table1_configs(5)) == 9
