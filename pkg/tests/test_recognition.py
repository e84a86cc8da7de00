import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_graphs
from meshcert.certification import eval_rule
from meshcert.errors import GuardExceeded, RadiusError
from meshcert.generators import generate, sample_class_corpus
from meshcert.graph import extract_view
from meshcert.oracles import ClassId, is_class
from meshcert.recognition import (
    PROTOCOLS,
    StructuralPredicate as P,
    eval_predicate,
    get_protocol,
    recognize,
    recognize_all_roots,
    soundness_search,
)


def _at(desc, v, r, labels=None):
    g = generate(desc)
    return extract_view(g, labels or (0,) * g.n, v, r)


def test_predicate_examples():
    assert not eval_predicate(P.NO_W4W5, _at("wheel:4", 0, 1))
    for v in range(4):
        assert eval_predicate(P.CLIQUE_HELLY_LOCAL, _at("complete:4", v, 2))
    for v in range(4):
        assert eval_predicate(P.LPC, _at("cycle:4", v, 3))
    assert not eval_predicate(P.NO_K23, _at("completebipartite:2,3", 0, 2))
    assert not eval_predicate(P.TRIANGLE_FREE, _at("complete:3", 0, 1))
    assert eval_predicate(P.NO_W4, _at("wheel:5", 0, 1))
    assert not eval_predicate(P.NO_WHEEL, _at("wheel:5", 0, 1))


def test_predicate_radius_is_enforced():
    with pytest.raises(RadiusError):
        eval_predicate(P.LQC, _at("cycle:6", 0, 2))


def test_protocol_radii():
    expect = {ClassId.CHORDAL: 1, ClassId.BRIDGED: 1, ClassId.WEAKLY_BRIDGED: 2, ClassId.HELLY: 2}
    for c, proto in PROTOCOLS.items():
        assert proto.radius == expect.get(c, 3), c
    assert ClassId.MESHED not in PROTOCOLS
    with pytest.raises(ValueError):
        get_protocol("Meshed")


def test_recognize_examples():
    assert recognize(generate("complete:3"), "Chordal").decision is True
    out = recognize(generate("cycle:4"), "Chordal")
    assert out.decision is False and (2, "DB") in out.witnesses
    assert out.certificate == (0, 1, 2, 1)
    assert recognize(generate("johnson:4,2"), "MatroidBasis").decision is True
    assert out.to_dict()["class"] == "Chordal" and out.to_dict()["radius"] == 1


def test_soundness_search_examples():
    assert soundness_search(generate("cycle:6"), "WeaklyModular", 6) is None
    assert soundness_search(generate("cycle:5"), "Bridged", 5) is None
    assert soundness_search(generate("completebipartite:2,3"), "Median", 4) is None


@pytest.mark.parametrize("c", list(PROTOCOLS))
def test_agreement_with_oracle(c, small_graphs):
    for g in small_graphs:
        assert recognize(g, c).decision == is_class(g, c).holds, g


@pytest.mark.parametrize("c", list(PROTOCOLS))
def test_members_accepted_from_every_root(c, small_graphs):
    members = [g for g in small_graphs if is_class(g, c).holds]
    members += [g for _, g in sample_class_corpus(c, 4, seed=11, max_vertices=30)]
    for g in members:
        assert set(recognize_all_roots(g, c).values()) == {True}, g


@pytest.mark.parametrize("c", list(PROTOCOLS))
def test_no_certificate_fools_small_non_members(c, small_graphs):
    for g in small_graphs:
        if g.n > 5 or is_class(g, c).holds:
            continue
        assert soundness_search(g, c) is None, g


@pytest.mark.parametrize("p", list(P))
@given(g=connected_graphs(1, 8), data=st.data())
def test_predicates_ignore_labels(p, g, data):
    L = data.draw(st.lists(st.integers(0, 5), min_size=g.n, max_size=g.n))
    for v in range(g.n):
        try:
            a = eval_predicate(p, extract_view(g, L, v, p.radius))
            b = eval_predicate(p, extract_view(g, (0,) * g.n, v, p.radius, 17))
        except GuardExceeded:
            continue
        assert a == b


@pytest.mark.parametrize("c", list(PROTOCOLS))
def test_larger_views_change_nothing(c, small_graphs):
    proto = PROTOCOLS[c]
    for g in small_graphs[::3]:
        D = tuple(int(x) for x in g.dist[0])
        for v in range(g.n):
            for rule in proto.base.rules:
                assert eval_rule(rule, extract_view(g, D, v, rule.radius)) == eval_rule(
                    rule, extract_view(g, D, v, proto.radius + 1)
                )
            for p in proto.predicates:
                assert eval_predicate(p, extract_view(g, D, v, p.radius)) == eval_predicate(
                    p, extract_view(g, D, v, proto.radius + 1)
                )


@pytest.mark.parametrize("desc,c", [
    ("cycle:5", "WeaklyModular"), ("cycle:6", "Bridged"), ("completebipartite:2,3", "Median"),
    ("wheel:4", "Bridged"), ("pattern:K4-", "SweaklyModular"), ("pattern:K3,3-", "SweaklyModular"),
    ("petersen", "WeaklyModular"), ("cycle:6", "Helly"), ("wheel:5", "Chordal"),
])
def test_structured_non_members_rejected(desc, c):
    g = generate(desc)
    assert not is_class(g, c).holds
    out = recognize(g, c)
    assert out.decision is False and out.witnesses
