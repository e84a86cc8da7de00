import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_graphs
from naive import floyd
from meshcert.errors import DisconnectedGraphError, GraphInputError
from meshcert.generators import generate
from meshcert.graph import (
    Graph,
    ball,
    build_graph,
    extract_view,
    format_edge_list,
    interval,
    is_convex_set,
    parse_edge_list,
    truncated_bfs_ball,
)


def test_build_small_graphs():
    p3 = build_graph(3, [(0, 1), (1, 2)])
    assert p3.adj == ((1,), (0, 2), (1,))
    c4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 0)])
    assert c4.m == 4
    with pytest.raises(DisconnectedGraphError):
        build_graph(4, [(0, 1), (2, 3)])


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(-1, 0)]])
def test_bad_edges(edges):
    with pytest.raises(GraphInputError):
        Graph(3, edges)


def test_graph_is_immutable():
    g = generate("path:3")
    with pytest.raises(AttributeError):
        g.n = 4
    with pytest.raises(ValueError):
        g.dist[0, 1] = 5


def test_distances():
    assert generate("path:3").dist[0, 2] == 2
    assert generate("cycle:6").dist[0, 3] == 3
    king = generate("kinggrid:3,3")
    assert king.dist[0, 8] == 2


def test_balls_and_intervals():
    c6 = generate("cycle:6")
    assert ball(c6, 0, 1) == {5, 0, 1}
    assert ball(c6, 0, 2) == {4, 5, 0, 1, 2}
    assert ball(c6, 3, 0) == {3}
    assert interval(generate("cycle:4"), 0, 2) == {0, 1, 2, 3}
    assert interval(generate("path:3"), 0, 2) == {0, 1, 2}
    assert interval(c6, 0, 2) == {0, 1, 2}


def test_convexity():
    c6 = generate("cycle:6")
    assert is_convex_set(c6, {5, 0, 1})
    assert not is_convex_set(c6, {4, 5, 0, 1, 2})
    assert is_convex_set(c6, range(6))


def test_views():
    p3 = generate("path:3")
    v = extract_view(p3, [0, 1, 2], 1, 1)
    assert v.subgraph.n == 3 and v.subgraph.degree(0) == 2 and v.labels[0] == 1
    c6 = generate("cycle:6")
    v = extract_view(c6, list(range(6)), 0, 1)
    assert v.subgraph.n == 3 and v.subgraph.m == 2 and v.subgraph.degree(0) == 2
    a = extract_view(c6, list(range(6)), 0, 2, shuffle_seed=1)
    b = extract_view(c6, list(range(6)), 0, 2, shuffle_seed=2)
    assert a.labels[0] == b.labels[0] == 0
    assert sorted(a.labels) == sorted(b.labels)
    with pytest.raises(GraphInputError):
        extract_view(c6, [0, 1], 0, 1)


def test_edge_list_round_trip():
    g = generate("kinggrid:2,3")
    assert parse_edge_list("# comment\n\n" + format_edge_list(g)) == g
    with pytest.raises(GraphInputError):
        parse_edge_list("3 2\n0 1\n")
    with pytest.raises(GraphInputError):
        parse_edge_list("3 x\n")


@given(connected_graphs(max_n=9))
def test_distance_matrix_axioms(g):
    d = g.dist
    ref = floyd(g.n, g.edges)
    for u in range(g.n):
        for v in range(g.n):
            assert d[u, v] == ref[u][v] == d[v, u]
            assert (d[u, v] == 1) == g.has_edge(u, v)
            for w in range(g.n):
                assert d[u, w] <= d[u, v] + d[v, w]


@given(connected_graphs(max_n=9), st.integers(0, 8), st.integers(0, 4))
def test_ball_matches_truncated_bfs(g, v, r):
    v %= g.n
    assert ball(g, v, r) == truncated_bfs_ball(g, v, r)


@given(connected_graphs(max_n=9), st.data())
def test_interval_members_are_closer(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    v = data.draw(st.integers(0, g.n - 1))
    for x in interval(g, u, v):
        assert g.dist[u, x] <= g.dist[u, v]


@given(connected_graphs(max_n=9), st.integers(0, 50), st.integers(0, 50), st.integers(0, 3))
def test_view_contents_and_anonymity(g, s1, s2, r):
    labels = [(7 * v) % 5 for v in range(g.n)]
    for v in range(g.n):
        a = extract_view(g, labels, v, r, s1)
        b = extract_view(g, labels, v, r, s2)
        assert a.subgraph.n == len(ball(g, v, r))
        assert a.labels[0] == labels[v]
        # same multiset of (label, depth, degree) triples: isomorphic up to shuffle
        key = lambda w: sorted((w.labels[i], w.depth(i), w.subgraph.degree(i)) for i in range(w.subgraph.n))  # noqa: E731
        assert key(a) == key(b)
        assert a.subgraph.m == b.subgraph.m


def test_view_restrict():
    g = generate("grid:4,4")
    labels = list(range(16))
    big = extract_view(g, labels, 5, 3, 4)
    small = big.restrict(1)
    ref = extract_view(g, labels, 5, 1)
    assert small.radius == 1 and small.subgraph.n == ref.subgraph.n
    assert sorted(small.labels) == sorted(ref.labels)
    with pytest.raises(ValueError):
        small.restrict(2)


@given(connected_graphs(1, 12))
def test_distances_match_networkx(g):
    import networkx as nx

    h = nx.Graph(g.edges)
    h.add_nodes_from(range(g.n))
    for s, row in nx.all_pairs_shortest_path_length(h):
        assert all(g.dist[s, t] == d for t, d in row.items())


def test_enumeration_has_no_isomorphic_duplicates():
    import itertools

    import networkx as nx

    from meshcert.generators import connected_graphs as enum

    for n in range(1, 7):
        gs = [nx.Graph(g.edges) if g.m else nx.empty_graph(1) for g in enum(n)]
        assert all(nx.is_connected(h) and h.number_of_nodes() == n for h in gs)
        for a, b in itertools.combinations(gs, 2):
            assert not nx.is_isomorphic(a, b)
