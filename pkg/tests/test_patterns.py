import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import connected_graphs
from naive import induced_copy
from meshcert.generators import generate
from meshcert.graph import Graph
from meshcert.patterns import (
    PatternId,
    contains_induced,
    find_induced_cycle,
    induced_squares,
    iter_induced_cycles,
    pattern_edges,
    pattern_graph,
)

FIXED = [p for p in PatternId if p not in (PatternId.WK, PatternId.OCTAHEDRON)]


def test_pattern_shapes():
    expect = {
        PatternId.C4: (4, 4), PatternId.C5: (5, 5), PatternId.K3: (3, 3), PatternId.K23: (5, 6),
        PatternId.K4_MINUS: (4, 5), PatternId.K33_MINUS: (6, 8), PatternId.W4: (5, 8),
        PatternId.W4_MINUS: (5, 7), PatternId.W5: (6, 10), PatternId.W5_HAT: (7, 12),
    }
    for p, (n, m) in expect.items():
        pn, edges = pattern_edges(p)
        assert (pn, len(edges)) == (n, m)
    assert pattern_graph(PatternId.OCTAHEDRON, 3).m == 12
    with pytest.raises(ValueError):
        pattern_edges(PatternId.WK)
    with pytest.raises(ValueError):
        pattern_edges(PatternId.C4, 3)


def test_wheel_minus_spoke_keeps_the_rim():
    g = pattern_graph(PatternId.W4_MINUS)
    rim = find_induced_cycle(g.masks, (1 << 5) - 2, 4)
    assert rim is not None and g.degree(0) == 3


def test_examples():
    assert contains_induced(pattern_graph(PatternId.W4), PatternId.W4) is not None
    assert contains_induced(generate("complete:5"), PatternId.C4) is None
    c6_hub = Graph(7, [(i, (i + 1) % 6) for i in range(6)] + [(6, i) for i in range(6)])
    occ = contains_induced(c6_hub, PatternId.WK, k=6)
    assert occ is not None and occ[0] == 6


@settings(max_examples=40)
@given(connected_graphs(max_n=8), st.sampled_from([PatternId.C4, PatternId.C5, PatternId.K3, PatternId.K23, PatternId.K4_MINUS, PatternId.W4, PatternId.W4_MINUS]))
def test_matches_exhaustive_search(g, p):
    pn, edges = pattern_edges(p)
    found = contains_induced(g, p)
    ref = induced_copy(g, pn, edges)
    assert (found is not None) == (ref is not None)
    if found is not None:
        img = [found[i] for i in range(pn)]
        assert len(set(img)) == pn
        for a in range(pn):
            for b in range(a + 1, pn):
                assert g.has_edge(img[a], img[b]) == ((a, b) in edges or (b, a) in edges)


@settings(max_examples=25)
@given(connected_graphs(min_n=4, max_n=7), st.sampled_from([PatternId.C4, PatternId.K4_MINUS, PatternId.W4, PatternId.K23]), st.integers(0, 6))
def test_anchored_matches_exhaustive_search(g, p, a):
    a %= g.n
    pn, edges = pattern_edges(p)
    found = contains_induced(g, p, anchored_at=a)
    ref = induced_copy(g, pn, edges, anchor=a)
    assert (found is not None) == (ref is not None)
    if found is not None:
        assert a in found.values()


@settings(max_examples=15)
@given(connected_graphs(min_n=6, max_n=8))
def test_larger_patterns_match_exhaustive_search(g):
    for p in (PatternId.K33_MINUS, PatternId.W5):
        pn, edges = pattern_edges(p)
        assert (contains_induced(g, p) is not None) == (induced_copy(g, pn, edges) is not None)


@given(connected_graphs(max_n=8))
def test_induced_squares_are_induced_4_cycles(g):
    sq = induced_squares(g)
    keys = {frozenset(s) for s in sq}
    assert len(keys) == len(sq)
    ref = {frozenset(c) for c in iter_induced_cycles(g.masks, (1 << g.n) - 1, 4)}
    assert keys == ref


@given(connected_graphs(max_n=8), st.integers(3, 8))
def test_cycle_finder_agrees_with_enumerator(g, k):
    full = (1 << g.n) - 1
    some = find_induced_cycle(g.masks, full, k)
    allc = list(iter_induced_cycles(g.masks, full, k))
    assert (some is None) == (not allc)
    for c in allc:
        assert len(set(c)) == k
        for i in range(k):
            for j in range(i + 1, k):
                cyclic = (j - i) in (1, k - 1)
                assert g.has_edge(c[i], c[j]) == cyclic
