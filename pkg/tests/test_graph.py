import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szcommunity.exceptions import GraphInputError, NoPathError
from szcommunity.generators import barbell
from szcommunity.graph import (
    bfs_tree,
    build_graph,
    connected_components,
    directed_edge_space,
    induced_degree,
    is_connected,
    largest_connected_component,
    shortest_path_edges,
)

from oracles import bfs_distances, canonical_shortest_path


@st.composite
def raw_graphs(draw, max_n=15):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    return n, pairs


def test_build_drops_loops_and_duplicates():
    g = build_graph(3, [(0, 1), (1, 0), (1, 1), (1, 2)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.adjacency == ((1,), (0, 2), (1,))


def test_build_empty_edge_set():
    g = build_graph(2, [])
    assert g.m == 0 and g.n == 2


def test_build_normalizes_orientation_in_first_seen_order():
    g = build_graph(4, [(3, 1), (0, 2), (1, 3), (2, 1)])
    assert g.edges == ((1, 3), (0, 2), (1, 2))


def test_build_rejects_out_of_range():
    with pytest.raises(GraphInputError):
        build_graph(3, [(0, 3)])
    with pytest.raises(GraphInputError):
        build_graph(3, [(-1, 0)])


def test_barbell_counts():
    g = barbell(2, 5)
    assert (g.n, g.m) == (11, 22)


@given(raw_graphs())
def test_graph_invariants(data):
    n, pairs = data
    g = build_graph(n, pairs)
    assert all(u < v for u, v in g.edges)
    assert len(set(g.edges)) == g.m
    assert int(g.degrees.sum()) == 2 * g.m
    for v in range(n):
        assert list(g.adjacency[v]) == sorted(g.adjacency[v])
        for w in g.adjacency[v]:
            assert v in g.adjacency[w]
    expected = {tuple(sorted(p)) for p in pairs if p[0] != p[1]}
    assert set(g.edges) == expected
    assert build_graph(n, g.edges) == g


def test_shortest_path_on_path_graph():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    assert shortest_path_edges(g, 0, 3) == [0, 1, 2]
    assert shortest_path_edges(g, 3, 0) == [2, 1, 0]


def test_shortest_path_identity():
    g = build_graph(3, [(0, 1), (1, 2)])
    assert shortest_path_edges(g, 1, 1) == []


def test_shortest_path_tie_goes_to_lower_vertex():
    # 4-cycle: 0-2 has two shortest paths, via 1 and via 3
    edges = [(0, 1), (1, 2), (2, 3), (0, 3)]
    g = build_graph(4, edges)
    assert canonical_shortest_path(4, edges, 0, 2) == [0, 1, 2]
    assert shortest_path_edges(g, 0, 2) == [g.edge_id(0, 1), g.edge_id(1, 2)]


def test_shortest_path_tie_break_deeper_level():
    # Two routes 0 -> 5 of length 3; the predecessor of 5 must be 3 (not 4)
    # even though 4 is discovered first from the queue.
    edges = [(0, 1), (0, 2), (1, 4), (2, 3), (3, 5), (4, 5)]
    g = build_graph(6, edges)
    path = canonical_shortest_path(6, edges, 0, 5)
    assert path == [0, 2, 3, 5]
    expected = [g.edge_id(a, b) for a, b in zip(path, path[1:])]
    assert shortest_path_edges(g, 0, 5) == expected


def test_shortest_path_disconnected():
    g = build_graph(4, [(0, 1), (2, 3)])
    with pytest.raises(NoPathError):
        shortest_path_edges(g, 0, 3)


@settings(max_examples=60, deadline=None)
@given(raw_graphs(max_n=12), st.data())
def test_shortest_path_matches_bfs_distance_and_enumeration(data, pick):
    n, pairs = data
    g = build_graph(n, pairs)
    u = pick.draw(st.integers(0, n - 1))
    dist = bfs_distances(n, g.edges, u)
    dist_pkg, parent = bfs_tree(g, u)
    assert list(dist_pkg) == dist
    for v in range(n):
        if dist[v] < 0:
            with pytest.raises(NoPathError):
                shortest_path_edges(g, u, v)
            continue
        path = shortest_path_edges(g, u, v)
        assert len(path) == dist[v]
        if v != u:
            best = canonical_shortest_path(n, g.edges, u, v)
            assert path == [g.edge_id(a, b) for a, b in zip(best, best[1:])]


def test_largest_component_tie_goes_to_smallest_vertex():
    # triangles {0,1,2} and {3,4,5} tie; then an isolated edge {6,7}
    g = build_graph(8, [(3, 4), (4, 5), (3, 5), (6, 7), (0, 1), (1, 2), (0, 2)])
    sub, mapping = largest_connected_component(g)
    assert mapping == {0: 0, 1: 1, 2: 2}
    assert sub.n == 3 and sub.m == 3


def test_largest_component_relabels_in_order():
    g = build_graph(7, [(5, 6), (0, 1), (2, 4), (4, 6), (2, 6)])
    sub, mapping = largest_connected_component(g)
    assert mapping == {2: 0, 4: 1, 5: 2, 6: 3}
    assert sub.edges == ((2, 3), (0, 1), (1, 3), (0, 3))


def test_largest_component_connected_is_identity():
    g = barbell(2, 4)
    sub, mapping = largest_connected_component(g)
    assert mapping == {v: v for v in range(g.n)}
    assert sub == g


def test_largest_component_empty_graph():
    with pytest.raises(GraphInputError):
        largest_connected_component(build_graph(0, []))


@settings(max_examples=60, deadline=None)
@given(raw_graphs(max_n=20))
def test_components_match_networkx(data):
    n, pairs = data
    g = build_graph(n, pairs)
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(g.edges)
    ours = sorted(map(tuple, connected_components(g)))
    ref = sorted(tuple(sorted(c)) for c in nx.connected_components(G))
    assert ours == ref
    assert is_connected(g) == nx.is_connected(G)
    sub, mapping = largest_connected_component(g)
    assert sub.n == max(len(c) for c in ref)


def test_induced_degree():
    k4 = build_graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert all(induced_degree(k4, range(4), v) == 3 for v in range(4))
    assert induced_degree(k4, {0, 1}, 0) == 1
    with pytest.raises(GraphInputError):
        induced_degree(k4, {1, 2}, 0)


def test_directed_space_single_edge():
    s = directed_edge_space(build_graph(2, [(0, 1)]))
    assert s.size == 2
    assert s.inverse[0] == 1 and s.origin[0] == 0 and s.terminal[0] == 1


def test_directed_space_triangle_and_barbell():
    s = directed_edge_space(build_graph(3, [(0, 1), (1, 2), (0, 2)]))
    assert s.size == 6
    assert all(len(s.out_edges(v)) == 2 for v in range(3))
    assert directed_edge_space(barbell(2, 5)).size == 44


def test_directed_space_needs_edges():
    with pytest.raises(GraphInputError):
        directed_edge_space(build_graph(3, []))


@given(raw_graphs())
def test_directed_space_invariants(data):
    n, pairs = data
    g = build_graph(n, pairs)
    if g.m == 0:
        return
    s = directed_edge_space(g)
    idx = np.arange(s.size)
    assert np.array_equal(s.inverse[s.inverse], idx)
    assert not np.any(s.inverse == idx)
    assert np.array_equal(s.origin, s.terminal[s.inverse])
    assert np.all(s.origin[: g.m] < s.terminal[: g.m])
    out_deg = np.bincount(s.origin, minlength=n)
    in_deg = np.bincount(s.terminal, minlength=n)
    assert np.array_equal(out_deg, g.degrees) and np.array_equal(in_deg, g.degrees)
    assert np.array_equal(s.undirected_of, idx % g.m)
