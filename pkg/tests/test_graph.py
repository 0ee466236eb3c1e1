import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anonmesh.errors import EnumerationLimitError
from anonmesh.geodata import GeoPoint
from anonmesh.graph import (
    GatewayGraph,
    count_paths_from,
    count_simple_paths,
    disjoint_path_set,
    disjoint_paths,
    enumerate_simple_paths,
    hop_distances,
    reachable_within,
)

from conftest import complete_graph, cycle_graph, graph_from_edges, path_graph
from oracles import brute_count_paths, dijkstra_unit, naive_greedy_disjoint


def adjacency(g: GatewayGraph) -> dict[int, set[int]]:
    return {v: set(g.neighbors(v)) for v in g.node_ids()}


# -- construction ----------------------------------------------------------------


def test_rejects_self_loop():
    pts = {0: GeoPoint(0, 0, 0)}
    with pytest.raises(ValueError, match="self-loop"):
        GatewayGraph(pts, [(0, 0, 1.0, 1.0)])


def test_rejects_duplicate_edge():
    pts = {0: GeoPoint(0, 0, 0), 1: GeoPoint(0, 0.001, 1)}
    with pytest.raises(ValueError, match="duplicate"):
        GatewayGraph(pts, [(0, 1, 1.0, 1.0), (1, 0, 1.0, 1.0)])


def test_rejects_unknown_endpoint():
    pts = {0: GeoPoint(0, 0, 0)}
    with pytest.raises(ValueError, match="unknown node"):
        GatewayGraph(pts, [(0, 5, 1.0, 1.0)])


def test_adjacency_sorted():
    g = graph_from_edges(4, [(2, 0), (2, 3), (2, 1)])
    assert g.neighbors(2) == (0, 1, 3)


# -- hop distances -----------------------------------------------------------------


def test_hops_single_node():
    g = graph_from_edges(1, [])
    assert hop_distances(g, 0).distances == {0: 0}


def test_hops_path():
    g = path_graph(3)
    assert hop_distances(g, 0).distances == {0: 0, 1: 1, 2: 2}


def test_hops_complete(k51):
    hm = hop_distances(k51, 7)
    assert hm.distances[7] == 0
    assert all(hm.distances[v] == 1 for v in k51.node_ids() if v != 7)


def test_hops_unknown_source():
    g = path_graph(2)
    with pytest.raises(KeyError):
        hop_distances(g, 9)


def test_hops_unreachable_absent():
    g = graph_from_edges(3, [(0, 1)])
    hm = hop_distances(g, 0)
    assert hm.hops_to(2) is None


@given(st.integers(min_value=0, max_value=999))
@settings(max_examples=30, deadline=None)
def test_hops_agree_with_dijkstra(seed):
    import numpy as np

    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 101))
    edges = {
        (int(u), int(v))
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < 3.0 / n
    }
    g = graph_from_edges(n, edges)
    src = int(rng.integers(n))
    assert hop_distances(g, src).distances == dijkstra_unit(adjacency(g), src)


# -- bounded reachability ------------------------------------------------------------


def test_reachable_isolated():
    g = graph_from_edges(2, [])
    assert reachable_within(g, 0, 5) == frozenset()


def test_reachable_complete(k51):
    r = reachable_within(k51, 3, 3)
    assert len(r) == 50
    assert 3 not in r


def test_reachable_path_one_hop():
    g = path_graph(3)
    assert reachable_within(g, 0, 1) == {1}


def test_reachable_monotone_in_hops():
    g = cycle_graph(11)
    for h in range(5):
        assert reachable_within(g, 0, h) <= reachable_within(g, 0, h + 1)


def test_reachable_negative_hops():
    g = path_graph(2)
    with pytest.raises(ValueError):
        reachable_within(g, 0, -1)


# -- path counting -------------------------------------------------------------------


def test_count_k4():
    g = complete_graph(4)
    # length 1: direct; length 2: via each of the 2 others; length 3: both orders
    assert count_simple_paths(g, 0, 1, 3) == 5


def test_count_k51(k51):
    assert count_simple_paths(k51, 0, 50, 3) == 1 + 49 + 49 * 48


def test_count_path_graph():
    g = path_graph(3)
    assert count_simple_paths(g, 0, 2, 3) == 1


def test_count_same_node_rejected():
    g = path_graph(2)
    with pytest.raises(ValueError):
        count_simple_paths(g, 0, 0, 3)


def test_count_zero_max_len_rejected():
    g = path_graph(2)
    with pytest.raises(ValueError):
        count_simple_paths(g, 0, 1, 0)


random_graph_seed = st.integers(min_value=0, max_value=99_999)


def _random_graph(seed: int, max_n: int = 8):
    import numpy as np

    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_n + 1))
    edges = {
        (int(u), int(v))
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < 0.5
    }
    return graph_from_edges(n, edges), int(rng.integers(1, 6))


@given(random_graph_seed)
@settings(max_examples=60, deadline=None)
def test_count_matches_brute_force(seed):
    g, max_len = _random_graph(seed)
    adj = adjacency(g)
    nodes = g.node_ids()
    for dst in nodes[1:]:
        assert count_simple_paths(g, nodes[0], dst, max_len) == brute_count_paths(
            adj, nodes[0], dst, max_len
        )


@given(random_graph_seed)
@settings(max_examples=60, deadline=None)
def test_bulk_count_matches_single(seed):
    g, max_len = _random_graph(seed)
    nodes = g.node_ids()
    src = nodes[0]
    bulk = count_paths_from(g, src, max_len)
    for dst in nodes[1:]:
        assert bulk.get(dst, 0) == count_simple_paths(g, src, dst, max_len)


# -- enumeration ------------------------------------------------------------------------


def test_enumerate_path_graph():
    g = path_graph(3)
    assert enumerate_simple_paths(g, 0, 2, 3) == [(0, 1, 2)]


def test_enumerate_k4_ordering():
    g = complete_graph(4)
    assert enumerate_simple_paths(g, 0, 1, 2) == [(0, 1), (0, 2, 1), (0, 3, 1)]


def test_enumerate_triangle_length_one():
    g = cycle_graph(3)
    assert enumerate_simple_paths(g, 0, 1, 1) == [(0, 1)]


def test_enumerate_cap():
    g = complete_graph(6)
    with pytest.raises(EnumerationLimitError):
        enumerate_simple_paths(g, 0, 1, 4, max_paths=5)


def test_enumerate_exactly_at_cap_ok():
    g = complete_graph(4)
    assert len(enumerate_simple_paths(g, 0, 1, 3, max_paths=5)) == 5


@given(random_graph_seed)
@settings(max_examples=40, deadline=None)
def test_enumerate_count_and_order_consistent(seed):
    g, max_len = _random_graph(seed)
    nodes = g.node_ids()
    paths = enumerate_simple_paths(g, nodes[0], nodes[-1], max_len)
    assert len(paths) == count_simple_paths(g, nodes[0], nodes[-1], max_len)
    keys = [(len(p), p) for p in paths]
    assert keys == sorted(keys)
    for p in paths:
        assert len(set(p)) == len(p)  # simple
        for a, b in zip(p, p[1:]):
            assert b in g.neighbors(a)


# -- disjoint paths ----------------------------------------------------------------------


def test_disjoint_k51(k51):
    assert disjoint_paths(k51, 0, 50, 3) == 50


def test_disjoint_path_graph():
    assert disjoint_paths(path_graph(3), 0, 2, 3) == 1


def test_disjoint_four_cycle_opposite():
    g = cycle_graph(4)
    assert disjoint_paths(g, 0, 2, 2) == 2


@given(random_graph_seed)
@settings(max_examples=60, deadline=None)
def test_disjoint_matches_naive_greedy(seed):
    g, max_len = _random_graph(seed)
    nodes = g.node_ids()
    src, dst = nodes[0], nodes[-1]
    expected = naive_greedy_disjoint(enumerate_simple_paths(g, src, dst, max_len))
    assert disjoint_path_set(g, src, dst, max_len) == expected


@given(random_graph_seed)
@settings(max_examples=60, deadline=None)
def test_disjoint_bounds_and_interiors(seed):
    g, max_len = _random_graph(seed)
    nodes = g.node_ids()
    src, dst = nodes[0], nodes[-1]
    chosen = disjoint_path_set(g, src, dst, max_len)
    count = len(chosen)
    assert count == disjoint_paths(g, src, dst, max_len)
    assert count <= min(len(g.neighbors(src)), len(g.neighbors(dst)))
    assert count <= count_simple_paths(g, src, dst, max_len)
    interiors = [set(p[1:-1]) for p in chosen]
    for i, a in enumerate(interiors):
        for b in interiors[i + 1 :]:
            assert not (a & b)
