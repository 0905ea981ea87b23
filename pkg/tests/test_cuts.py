import numpy as np
import pytest
from hypothesis import given, strategies as st

from evocut.cuts import (
    StaleTable,
    apply_edge_incremental,
    ball,
    boundary_nodes,
    cut_size,
    pulling_power,
    recompute_all,
)
from evocut.graph import Graph, UnknownNode

from conftest import graphs
from oracles import all_pairs, brute_boundary, brute_power, random_edges


def test_ball_examples(path4, triangle):
    assert ball(path4, 2, 0).members == {2}
    assert ball(triangle, 1, 1).members == {0, 1, 2}
    assert ball(path4, 1, 1).members == {0, 1, 2}
    with pytest.raises(UnknownNode):
        ball(path4, 4, 1)


def test_cut_size_examples(path4):
    assert cut_size(path4, range(4)) == 0
    assert cut_size(path4, []) == 0
    assert cut_size(path4, {0, 1}) == 1
    with pytest.raises(UnknownNode):
        cut_size(path4, {0, 7})


def test_pulling_power_examples(star5, path4):
    assert pulling_power(star5, 0, 1) == 0
    assert pulling_power(star5, 3, 1) == 3
    for v in range(4):
        assert pulling_power(path4, v, 0) == path4.degree(v)


def test_boundary_examples(path4, triangle, star5):
    assert boundary_nodes(star5, 2, 0) == [2]
    assert boundary_nodes(path4, 0, 1) == [1]
    assert boundary_nodes(triangle, 0, 1) == []
    assert boundary_nodes(star5, 1, 1) == [0]


def test_recompute_all_examples():
    path3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    t = recompute_all(path3, 1)
    assert t.as_dict() == {0: 1, 1: 0, 2: 1} and t.normalizer == 2
    g = Graph.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    t0 = recompute_all(g, 0)
    assert list(t0.power) == g.degrees() and t0.normalizer == 2 * g.m
    for k in (0, 1, 3):
        t = recompute_all(Graph(1), k)
        assert list(t.power) == [0] and t.normalizer == 0


@given(graphs(), st.integers(0, 5))
def test_recompute_all_matches_definition(gr, k):
    g, edges = gr
    dist = all_pairs(g.n, edges)
    table = recompute_all(g, k, chunk=7)
    expected = [brute_power(dist, edges, v, k) for v in range(g.n)]
    assert list(table.power) == expected
    assert table.normalizer == sum(expected)
    assert [pulling_power(g, v, k) for v in range(g.n)] == expected


@given(graphs(), st.integers(0, 5))
def test_boundary_is_outer_shell(gr, k):
    g, edges = gr
    dist = all_pairs(g.n, edges)
    for v in range(g.n):
        b = boundary_nodes(g, v, k)
        assert set(b) == brute_boundary(dist, edges, v, k)
        assert all(dist[v, u] == k for u in b)


@given(graphs())
def test_k0_power_is_degree(gr):
    g, _ = gr
    assert all(pulling_power(g, v, 0) == g.degree(v) for v in range(g.n))


@given(graphs(max_nodes=30))
def test_ball_beyond_diameter_has_no_cut(gr):
    g, edges = gr
    dist = all_pairs(g.n, edges)
    for v in range(g.n):
        ecc = int(dist[v][np.isfinite(dist[v])].max())
        # a ball that swallows its component has an empty cut
        assert pulling_power(g, v, ecc) == 0
        assert boundary_nodes(g, v, ecc) == []


@given(graphs(max_nodes=30), st.integers(0, 5))
def test_balls_are_nested(gr, k):
    g, _ = gr
    for v in range(g.n):
        assert ball(g, v, k).members <= ball(g, v, k + 1).members


# --- incremental path -------------------------------------------------------

def _attach_leaf(g, table, target):
    new = g.add_node()
    g.add_edge(new, target)
    return apply_edge_incremental(table, g, (new, target))


def test_incremental_leaf_on_path_end():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    table = _attach_leaf(g, recompute_all(g, 1), 2)
    assert table == recompute_all(g, 1)
    assert table.as_dict() == {0: 1, 1: 1, 2: 1, 3: 1}


def test_incremental_k0_touches_only_endpoints():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3)])
    before = recompute_all(g, 0)
    g.add_edge(0, 4)
    after = apply_edge_incremental(before, g, (0, 4))
    diff = after.power - before.power
    assert diff.tolist() == [1, 0, 0, 0, 1]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_incremental_complete_graph_plus_new_node(k):
    g = Graph.from_edges(6, [(u, v) for u in range(6) for v in range(u + 1, 6)])
    table = _attach_leaf(g, recompute_all(g, k), 3)
    assert table == recompute_all(g, k)
    g.add_edge(6, 1)
    table = apply_edge_incremental(table, g, (6, 1))
    assert table == recompute_all(g, k)


def test_stale_table_rejected():
    g = Graph.from_edges(4, [(0, 1)])
    table = recompute_all(g, 1)
    g.add_edge(1, 2)
    g.add_edge(2, 3)
    with pytest.raises(StaleTable):
        apply_edge_incremental(table, g, (2, 3))
    g2 = Graph.from_edges(3, [(0, 1)])
    t2 = recompute_all(g2, 1)
    g2.add_node()
    g2.add_edge(1, 2)
    with pytest.raises(StaleTable):
        apply_edge_incremental(t2, g2, (1, 2))


def test_table_is_immutable():
    table = recompute_all(Graph.from_edges(3, [(0, 1)]), 1)
    with pytest.raises(ValueError):
        table.power[0] = 5


def _random_trace(seed, n_init, steps, k):
    """Mixed insertions: leaf arrivals, two-edge arrivals, chords between old nodes."""
    rng = np.random.default_rng(seed)
    g = Graph.from_edges(n_init, random_edges(rng, n_init, 0.15))
    table = recompute_all(g, k)
    for _ in range(steps):
        kind = rng.random()
        if kind < 0.5 or g.n < 3:
            table = _attach_leaf(g, table, int(rng.integers(g.n)))
        elif kind < 0.75:
            a, b = (int(x) for x in rng.choice(g.n, 2, replace=False))
            table = _attach_leaf(g, table, a)
            g.add_edge(g.n - 1, b)
            table = apply_edge_incremental(table, g, (g.n - 1, b))
        else:
            for _ in range(20):
                u, v = (int(x) for x in rng.choice(g.n, 2, replace=False))
                if not g.has_edge(u, v):
                    g.add_edge(u, v)
                    table = apply_edge_incremental(table, g, (u, v))
                    break
            else:
                continue
        yield g, table


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_incremental_equals_rebuild_on_random_traces(k):
    steps = 0
    for seed in range(4):
        for g, table in _random_trace(1000 * k + seed, n_init=20, steps=50, k=k):
            assert table == recompute_all(g, k)
            assert table.normalizer == int(table.power.sum())
            steps += 1
    assert steps >= 190


@given(graphs(), st.integers(1, 5), st.data())
def test_incremental_chord_matches_definition(gr, k, data):
    g, edges = gr
    missing = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
    if not missing:
        return
    u, v = data.draw(st.sampled_from(missing))
    table = recompute_all(g, k)
    g.add_edge(u, v)
    table = apply_edge_incremental(table, g, (u, v))
    edges = edges + [(u, v)]
    dist = all_pairs(g.n, edges)
    assert list(table.power) == [brute_power(dist, edges, w, k) for w in range(g.n)]
