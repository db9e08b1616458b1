import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from langdiv.graph import (
    ContractError,
    Graph,
    ParameterError,
    _decode_pairs,
    distance_two_set,
    format_edge_list,
    lattice_graph,
    random_graph,
    read_edge_list,
    rewire,
)
from langdiv.metrics import local_clustering_all

from oracles import adjacency, brute_distance_two


def test_random_graph_basic():
    g = random_graph(10, 20, np.random.default_rng(1))
    assert g.node_count == 10
    assert g.edge_count == 20
    g.check()


def test_random_graph_complete():
    g = random_graph(5, 10, np.random.default_rng(2))
    assert g.edges() == [(u, v) for u in range(5) for v in range(u + 1, 5)]


@pytest.mark.parametrize("n,m", [(5, 11), (5, -1), (1, 1)])
def test_random_graph_out_of_range(n, m):
    with pytest.raises(ParameterError):
        random_graph(n, m, np.random.default_rng(0))


def test_random_graph_empty():
    g = random_graph(4, 0, np.random.default_rng(0))
    assert g.edge_count == 0 and g.edges() == []


@pytest.mark.parametrize("n", [2, 3, 7, 50, 1001])
def test_decode_pairs_matches_enumeration(n):
    expected = [(u, v) for u in range(n) for v in range(u + 1, n)]
    u, v = _decode_pairs(np.arange(len(expected)), n)
    assert list(zip(u.tolist(), v.tolist())) == expected


def test_random_graph_is_uniform_over_pairs():
    # every one of the 6 pairs on 4 nodes should appear in about half of G(4, 3) samples
    rng = np.random.default_rng(3)
    counts = {}
    trials = 6000
    for _ in range(trials):
        for e in random_graph(4, 3, rng).edges():
            counts[e] = counts.get(e, 0) + 1
    assert len(counts) == 6
    for c in counts.values():
        assert abs(c / trials - 0.5) < 0.03


def test_lattice_side_3():
    g = lattice_graph(3)
    assert (g.node_count, g.edge_count) == (9, 18)
    assert set(g.deg.tolist()) == {4}
    g.check()


def test_lattice_side_10():
    g = lattice_graph(10)
    assert (g.node_count, g.edge_count) == (100, 200)


@pytest.mark.parametrize("side", [0, 1, 2])
def test_lattice_rejects_small(side):
    with pytest.raises(ParameterError):
        lattice_graph(side)


def test_lattice_vertex_transitive():
    g = lattice_graph(6)
    c = local_clustering_all(g)
    assert np.all(c == c[0])
    assert np.all(g.deg == 4)


def test_distance_two_examples():
    path = Graph(3, [(0, 1), (1, 2)])
    assert distance_two_set(path, 0) == {2}
    star = Graph(4, [(2, 0), (2, 1), (2, 3)])  # center 2, leaves 0, 1, 3
    assert distance_two_set(star, 0) == {1, 3}
    tri = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert distance_two_set(tri, 0) == set()


def test_rewire_swap():
    g = Graph(3, [(0, 1), (1, 2)])
    rewire(g, 0, 1, 2)
    assert g.edges() == [(0, 2), (1, 2)]
    assert g.edge_count == 2


def test_rewire_rejects_self_loop():
    g = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(ContractError):
        rewire(g, 0, 1, 0)


def test_rewire_rejects_multi_edge():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ContractError):
        rewire(g, 0, 1, 2)


def test_rewire_rejects_missing_edge():
    g = Graph(3, [(0, 1)])
    with pytest.raises(ContractError):
        rewire(g, 1, 2, 0)


def test_graph_rejects_bad_edges():
    with pytest.raises(ContractError):
        Graph(3, [(0, 0)])
    with pytest.raises(ContractError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ContractError):
        Graph(3, [(0, 3)])


def test_capacity_grows():
    g = Graph(20, capacity=2)
    for v in range(1, 20):
        g.add_edge(0, v)
    assert g.degree(0) == 19
    assert g.capacity > 19
    g.check()


def test_edge_list_format_is_sorted(tmp_path):
    g = Graph(4, [(3, 1), (2, 0), (0, 1)])
    text = format_edge_list(g)
    assert text == "0 1\n0 2\n1 3\n"
    p = tmp_path / "e.txt"
    p.write_text(text)
    assert read_edge_list(p) == [(0, 1), (0, 2), (1, 3)]


def test_read_edge_list_rejects_garbage(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("0 1\n1 x\n")
    with pytest.raises(ValueError, match=":2:"):
        read_edge_list(p)


graphs = st.integers(2, 25).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, n * (n - 1) // 2), st.integers(0, 2**32))
)


@settings(max_examples=60, deadline=None)
@given(graphs)
def test_random_graph_invariants(params):
    n, m, seed = params
    g = random_graph(n, m, np.random.default_rng(seed))
    g.check()
    assert int(g.deg.sum()) == 2 * m
    for u, v in g.edges():
        assert u < v


@settings(max_examples=60, deadline=None)
@given(graphs)
def test_distance_two_matches_bfs(params):
    n, m, seed = params
    g = random_graph(n, m, np.random.default_rng(seed))
    adj = adjacency(n, g.edges())
    for i in range(n):
        d2 = distance_two_set(g, i)
        assert d2 == brute_distance_two(adj, i)
        assert not d2 & ({i} | adj[i])


@settings(max_examples=60, deadline=None)
@given(graphs, st.integers(0, 2**32))
def test_rewire_conserves_edge_count(params, seed):
    n, m, gseed = params
    g = random_graph(n, m, np.random.default_rng(gseed))
    rng = np.random.default_rng(seed)
    for _ in range(20):
        edges = g.edges()
        if not edges:
            break
        i, j = edges[rng.integers(len(edges))]
        targets = [l for l in range(n) if l != i and not g.has_edge(i, l)]
        if not targets:
            continue
        l = targets[rng.integers(len(targets))]
        ki, kj, kl = g.degree(i), g.degree(j), g.degree(l)
        rewire(g, i, j, l)
        assert g.edge_count == m
        assert (g.degree(i), g.degree(j), g.degree(l)) == (ki, kj - 1, kl + 1)
    g.check()
