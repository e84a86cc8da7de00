import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_graphs
from meshcert.certification import compute_mod3_labeling, enumerate_accepted_labelings
from meshcert.election import (
    ElectionStatus,
    acyclicity_and_sinks,
    build_oriented_graph,
    elect_leader,
    locally_detected_sinks,
    to_dot,
)
from meshcert.errors import GraphInputError
from meshcert.generators import generate
from meshcert.oracles import ClassId, is_class


def test_arcs():
    assert build_oriented_graph(generate("path:3"), (0, 1, 2)).arcs == {(1, 0), (2, 1)}
    assert build_oriented_graph(generate("path:2"), (0, 0)).arcs == frozenset()
    c6 = build_oriented_graph(generate("cycle:6"), (0, 1, 2, 0, 2, 1))
    # L(3)=0=next(L(4)=2), so the edge 34 is oriented 3 -> 4 as well
    assert c6.arcs == {(1, 0), (2, 1), (3, 2), (3, 4), (4, 5), (5, 0)}
    assert acyclicity_and_sinks(c6).sinks == {0}


@given(connected_graphs(1, 9), st.data())
def test_arc_invariants(g, data):
    L = data.draw(st.lists(st.integers(0, 2), min_size=g.n, max_size=g.n))
    og = build_oriented_graph(g, L)
    for v, u in og.arcs:
        assert g.has_edge(v, u) and (u, v) not in og.arcs and L[v] != L[u]
    assert len(og.arcs) == sum(L[u] != L[v] for u, v in g.edges)


def test_sinks_and_cycles():
    a = acyclicity_and_sinks(build_oriented_graph(generate("path:3"), (0, 1, 2)))
    assert a.acyclic and a.sinks == {0}
    c = acyclicity_and_sinks(build_oriented_graph(generate("complete:3"), (0, 1, 2)))
    assert not c.acyclic
    w = c.cycle_witness
    assert len(w) == 3 and all(w[i][1] == w[(i + 1) % 3][0] for i in range(3))
    k2 = acyclicity_and_sinks(build_oriented_graph(generate("path:2"), (0, 0)))
    assert k2.acyclic and k2.sinks == {0, 1}


@given(connected_graphs(1, 8), st.data())
def test_cycle_witness_is_a_directed_cycle(g, data):
    L = data.draw(st.lists(st.integers(0, 2), min_size=g.n, max_size=g.n))
    og = build_oriented_graph(g, L)
    a = acyclicity_and_sinks(og)
    if a.acyclic:
        # a topological order exists iff acyclic: peel sinks repeatedly
        left = set(range(g.n))
        while left:
            peel = {v for v in left if not any((v, u) in og.arcs for u in left)}
            assert peel
            left -= peel
    else:
        w = a.cycle_witness
        assert all(arc in og.arcs for arc in w)
        assert all(w[i][1] == w[(i + 1) % len(w)][0] for i in range(len(w)))


def test_election_examples():
    grid = generate("grid:3,3")
    out = elect_leader(grid, compute_mod3_labeling(grid, 4), "MESHED_mod3")
    assert out.status is ElectionStatus.ELECTED and out.leader == 4
    kg = generate("kinggrid:3,3")
    out = elect_leader(kg, compute_mod3_labeling(kg, 0), "HELLY_mod3")
    assert out.status is ElectionStatus.ELECTED and out.leader == 0
    out = elect_leader(generate("complete:3"), (0, 1, 2), "MESHED_mod3")
    assert out.status is ElectionStatus.REJECTED and out.leader is None
    assert out.to_dict()["rejections"][0]["rule"] == "MGT"


def test_election_needs_mod3_rules():
    with pytest.raises(GraphInputError):
        elect_leader(generate("path:2"), (0, 1), "MESHED_dist")


def test_flagged_mode():
    g = generate("grid:3,3")
    L = compute_mod3_labeling(g, 2)
    assert elect_leader(g, L, "MESHED_mod3", flagged=2).leader == 2
    out = elect_leader(g, L, "MESHED_mod3", flagged=0)
    assert out.status is ElectionStatus.NO_UNIQUE_SINK and out.leader is None


def test_outcome_serialization():
    g = generate("path:4")
    out = elect_leader(g, compute_mod3_labeling(g, 1), "MESHED_mod3")
    assert out.to_dict() == {"status": "Elected", "leader": 1, "rejections": []}


@pytest.mark.parametrize("c", [ClassId.MESHED, ClassId.WEAKLY_BRIDGED, ClassId.HELLY])
def test_accepted_labelings_elect_their_root(c, small_graphs):
    rs = {"Meshed": "MESHED_mod3", "WeaklyBridged": "BRIDGED_mod3", "Helly": "HELLY_mod3"}[c.value]
    for g in small_graphs:
        if not is_class(g, c).holds:
            continue
        for L in enumerate_accepted_labelings(g, rs):
            out = elect_leader(g, L, rs)
            assert out.status is ElectionStatus.ELECTED, (g, L)
            assert L == compute_mod3_labeling(g, out.leader)
            assert locally_detected_sinks(g, L) == {out.leader}


def test_dot_export():
    dot = to_dot(build_oriented_graph(generate("path:3"), (0, 1, 2)))
    assert dot.startswith("digraph G_L {") and dot.rstrip().endswith("}")
    assert "1 -> 0;" in dot and "2 -> 1;" in dot and dot.count("->") == 2
