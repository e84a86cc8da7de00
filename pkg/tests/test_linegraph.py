import itertools

import pytest
from hypothesis import given

from conftest import connected_graphs
from naive import is_bipartite_line_graph_brute, is_line_graph_brute
from meshcert.errors import GuardExceeded
from meshcert.generators import connected_graphs as all_connected, generate, johnson
from meshcert.graph import iter_bits
from meshcert.linegraph import bipartite_root, is_bipartite_line_graph, is_line_graph


def _edges_on(g, allowed):
    vs = list(iter_bits(allowed))
    return vs, [(u, w) for u, w in g.edges if (allowed >> u) & 1 and (allowed >> w) & 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_matches_krausz_enumeration_on_all_small_graphs(n):
    for g in all_connected(n):
        full = (1 << n) - 1
        vs, es = _edges_on(g, full)
        assert is_line_graph(g.masks, full) == is_line_graph_brute(vs, es)
        assert is_bipartite_line_graph(g.masks, full) == is_bipartite_line_graph_brute(vs, es)


@given(connected_graphs(min_n=3, max_n=8))
def test_neighborhood_links_match_brute_force(g):
    for v in range(g.n):
        vs, es = _edges_on(g, g.masks[v])
        assert is_line_graph(g.masks, g.masks[v]) == is_line_graph_brute(vs, es)
        assert is_bipartite_line_graph(g.masks, g.masks[v]) == is_bipartite_line_graph_brute(vs, es)


def test_bipartite_root_reproduces_adjacency():
    for g in all_connected(6):
        full = (1 << g.n) - 1
        root = bipartite_root(g.masks, full)
        if root is None:
            continue
        for u, v in itertools.combinations(range(g.n), 2):
            shares = len(set(root[u]) & set(root[v])) == 1
            assert shares == g.has_edge(u, v)


def test_known_cases():
    claw = generate("star:3")
    full = (1 << 4) - 1
    assert not is_line_graph(claw.masks, full)
    k4m = generate("pattern:K4-")
    assert is_line_graph(k4m.masks, 15) and not is_bipartite_line_graph(k4m.masks, 15)
    c5 = generate("cycle:5")
    assert is_line_graph(c5.masks, 31) and not is_bipartite_line_graph(c5.masks, 31)
    # links of J(7,3) are 3x4 rook graphs: 12 vertices, line graphs of K3,4
    j = johnson(7, 3)
    assert is_bipartite_line_graph(j.masks, j.masks[0])
    assert bin(j.masks[0]).count("1") == 12


def test_budget_is_explicit():
    j = johnson(7, 3)
    with pytest.raises(GuardExceeded):
        is_line_graph(j.masks, j.masks[0], budget=1)
