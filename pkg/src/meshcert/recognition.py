"""Local recognition protocols: distance verifiers plus local structural predicates.

A protocol accepts a graph when, with the distance certificate ``d(s, .)``,
every vertex accepts the base rules and every structural predicate. The
predicates only read the view's graph and the depths inside it, never the
labels.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .certification import (
    A_B_DIST,
    A_H_DIST,
    A_M_DIST,
    RuleSet,
    compute_distance_labeling,
    enumerate_accepted_labelings,
    eval_rule,
    view_frames,
)
from .errors import GuardExceeded, RadiusError
from .graph import Graph, LabeledView, iter_bits
from .linegraph import is_bipartite_line_graph, is_line_graph
from .oracles import LINK_SEARCH_BUDGET, ClassId, fits_octahedron
from .patterns import (
    PatternId,
    find_induced_cycle,
    induced_embedding,
    induced_squares,
    iter_induced_cycles,
    pattern_edges,
)


class StructuralPredicate(str, Enum):
    NO_WHEEL = "NoWheel"  # no induced Wk, k >= 4, centered at the view center
    NO_W4W5 = "NoW4W5"
    NO_W4 = "NoW4"
    NO_INDUCED_C4 = "NoInducedC4"
    EXTENDED_W5_APEX = "ExtendedW5Apex"
    CLIQUE_HELLY_LOCAL = "CliqueHellyLocal"
    LTC = "LTC"
    LQC = "LQC"
    TRIANGLE_FREE = "TriangleFree"
    NO_K23 = "NoK23"
    NO_K4_MINUS = "NoK4minus"
    NO_K33_MINUS = "NoK33minus"
    NO_W4_MINUS = "NoW4minus"
    THICK = "Thick"
    NO_SIZE2_METRIC_TRIANGLE = "NoSize2MetricTriangleLocal"
    LPC = "LPC"
    IC3 = "IC3"
    IC4 = "IC4"
    LC = "LC"
    BLC = "BLC"

    @property
    def radius(self) -> int:
        return _RADIUS[self]


_P = StructuralPredicate
_RADIUS = {
    _P.NO_WHEEL: 1, _P.NO_W4W5: 1, _P.NO_W4: 1, _P.TRIANGLE_FREE: 1, _P.LC: 1, _P.BLC: 1,
    _P.NO_INDUCED_C4: 2, _P.EXTENDED_W5_APEX: 2, _P.CLIQUE_HELLY_LOCAL: 2, _P.LTC: 2,
    _P.NO_K23: 2, _P.NO_K4_MINUS: 2, _P.NO_K33_MINUS: 2, _P.NO_W4_MINUS: 2, _P.THICK: 2,
    _P.IC3: 2, _P.IC4: 2,
    _P.LQC: 3, _P.NO_SIZE2_METRIC_TRIANGLE: 3, _P.LPC: 3,
}


def _wheels_at_center(view, sizes):
    masks = view.subgraph.masks
    for k in sizes:
        if find_induced_cycle(masks, masks[0], k) is not None:
            return False
    return True


def _pmasks(p: PatternId):
    n, edges = pattern_edges(p)
    pm = [0] * n
    for a, b in edges:
        pm[a] |= 1 << b
        pm[b] |= 1 << a
    return pm


def _no_pattern(view, p):
    h = view.subgraph
    return induced_embedding(h.masks, h.n, _pmasks(p), anchored_at=0) is None


def _at_depth(view, k):
    row = view.subgraph.dist[0]
    return [i for i in range(view.subgraph.n) if row[i] == k]


def _extended_w5_apex(view):
    # induced W5 centered here, plus a triangle on a rim edge; some vertex must see all seven
    masks = view.subgraph.masks
    c = 0
    for rim in iter_induced_cycles(masks, masks[c], 5):
        rim_mask = sum(1 << x for x in rim)
        wheel = rim_mask | 1
        for i in range(5):
            a, b = rim[i], rim[(i + 1) % 5]
            if a > b:
                continue
            for t in iter_bits(masks[a] & masks[b] & ~wheel):
                if masks[t] & wheel != (1 << a) | (1 << b):
                    continue
                every = wheel | (1 << t)
                if not any(masks[y] & every == every for y in iter_bits(masks[c] & masks[t] & ~every)):
                    return False
    return True


def _clique_helly_local(view):
    masks = view.subgraph.masks
    n = view.subgraph.n
    for u in iter_bits(masks[0]):
        for w in iter_bits(masks[0] & masks[u]):
            if w < u:
                continue
            tri = 1 | (1 << u) | (1 << w)
            star = sum(1 << x for x in range(n) if bin(masks[x] & tri).count("1") >= 2)
            if not any((star & ~(1 << y)) & ~masks[y] == 0 for y in iter_bits(star)):
                return False
    return True


def _ltc(view):
    masks = view.subgraph.masks
    two = _at_depth(view, 2)
    for v, w in itertools.combinations(two, 2):
        if (masks[v] >> w) & 1 and not masks[0] & masks[v] & masks[w]:
            return False
    return True


def _lqc(view):
    masks = view.subgraph.masks
    two = _at_depth(view, 2)
    three = sum(1 << z for z in _at_depth(view, 3))
    for v, w in itertools.combinations(two, 2):
        if (masks[v] >> w) & 1:
            continue
        if masks[v] & masks[w] & three and not masks[0] & masks[v] & masks[w]:
            return False
    return True


def _triangle_free(view):
    masks = view.subgraph.masks
    return all(masks[u] & masks[0] == 0 for u in iter_bits(masks[0]))


def _common_square_and_octahedron(view, k):
    masks = view.subgraph.masks
    for x in _at_depth(view, 2):
        common = list(iter_bits(masks[0] & masks[x]))
        if not any(not (masks[a] >> b) & 1 for a, b in itertools.combinations(common, 2)):
            return False
        if k is not None and not fits_octahedron(masks, [0, x, *common], k):
            return False
    return True


def _no_size2_metric_triangle(view):
    h = view.subgraph
    d = h.dist
    masks = h.masks
    two = _at_depth(view, 2)
    n = h.n

    def iv(a, b):
        return {x for x in range(n) if d[a, x] + d[x, b] == d[a, b]}

    for a, b in itertools.combinations(two, 2):
        if (masks[a] >> b) & 1 or not masks[a] & masks[b]:
            continue
        i0a, i0b, iab = iv(0, a), iv(0, b), iv(a, b)
        if i0a & i0b == {0} and i0a & iab == {a} and i0b & iab == {b}:
            return False
    return True


def _lpc(view):
    d = view.subgraph.dist[0]
    for a, b, c, e in induced_squares(view.subgraph):
        if d[a] + d[c] != d[b] + d[e]:
            return False
    return True


def _lc(view):
    return is_line_graph(view.subgraph.masks, view.subgraph.masks[0], budget=LINK_SEARCH_BUDGET)


def _blc(view):
    return is_bipartite_line_graph(view.subgraph.masks, view.subgraph.masks[0])


_PRED_FN = {
    _P.NO_WHEEL: lambda v: _wheels_at_center(v, range(4, v.subgraph.degree(0) + 1)),
    _P.NO_W4W5: lambda v: _wheels_at_center(v, (4, 5)),
    _P.NO_W4: lambda v: _wheels_at_center(v, (4,)),
    _P.NO_INDUCED_C4: lambda v: find_induced_cycle(v.subgraph.masks, (1 << v.subgraph.n) - 1, 4, through=0) is None,
    _P.EXTENDED_W5_APEX: _extended_w5_apex,
    _P.CLIQUE_HELLY_LOCAL: _clique_helly_local,
    _P.LTC: _ltc,
    _P.LQC: _lqc,
    _P.TRIANGLE_FREE: _triangle_free,
    _P.NO_K23: lambda v: _no_pattern(v, PatternId.K23),
    _P.NO_K4_MINUS: lambda v: _no_pattern(v, PatternId.K4_MINUS),
    _P.NO_K33_MINUS: lambda v: _no_pattern(v, PatternId.K33_MINUS),
    _P.NO_W4_MINUS: lambda v: _no_pattern(v, PatternId.W4_MINUS),
    _P.THICK: lambda v: _common_square_and_octahedron(v, None),
    _P.NO_SIZE2_METRIC_TRIANGLE: _no_size2_metric_triangle,
    _P.LPC: _lpc,
    _P.IC3: lambda v: _common_square_and_octahedron(v, 3),
    _P.IC4: lambda v: _common_square_and_octahedron(v, 4),
    _P.LC: _lc,
    _P.BLC: _blc,
}


def eval_predicate(p: StructuralPredicate, view: LabeledView) -> bool:
    """Evaluate a structural predicate at the center of ``view``.

    A larger view is first cut down to the predicate's own radius, so the
    verdict never depends on how much extra context was supplied.

    Raises
    ------
    RadiusError
        If the view is smaller than the predicate's radius.
    GuardExceeded
        If the line-graph search behind LC runs past its budget.
    """
    p = StructuralPredicate(p)
    if view.radius < p.radius:
        raise RadiusError(f"predicate {p.value} needs radius {p.radius}, view has {view.radius}")
    return _PRED_FN[p](view.restrict(p.radius))


@dataclass(frozen=True)
class ClassProtocol:
    cls: ClassId
    base: RuleSet
    predicates: tuple[StructuralPredicate, ...]

    @property
    def radius(self) -> int:
        return max([self.base.radius] + [p.radius for p in self.predicates])


def _protocols():
    wm = (_P.LTC, _P.LQC)
    modular = wm + (_P.TRIANGLE_FREE,)
    sweak = wm + (_P.NO_K4_MINUS, _P.NO_K33_MINUS)
    bucolic = wm + (_P.NO_K23, _P.NO_W4_MINUS, _P.NO_W4)
    table = {
        ClassId.CHORDAL: (A_B_DIST, (_P.NO_WHEEL,)),
        ClassId.BRIDGED: (A_B_DIST, (_P.NO_W4W5,)),
        ClassId.WEAKLY_BRIDGED: (A_B_DIST, (_P.NO_INDUCED_C4, _P.EXTENDED_W5_APEX)),
        ClassId.HELLY: (A_H_DIST, (_P.CLIQUE_HELLY_LOCAL,)),
        ClassId.WEAKLY_MODULAR: (A_M_DIST, wm),
        ClassId.MODULAR: (A_M_DIST, modular),
        ClassId.MEDIAN: (A_M_DIST, modular + (_P.NO_K23,)),
        ClassId.PSEUDO_MODULAR: (A_M_DIST, wm + (_P.NO_SIZE2_METRIC_TRIANGLE,)),
        ClassId.SWEAKLY_MODULAR: (A_M_DIST, sweak),
        ClassId.DUAL_POLAR: (A_M_DIST, sweak + (_P.THICK,)),
        ClassId.BUCOLIC: (A_M_DIST, bucolic),
        ClassId.CAGE_AMALGAMATION: (A_M_DIST, bucolic + (_P.NO_WHEEL,)),
        ClassId.MATROID_BASIS: (A_M_DIST, (_P.LPC, _P.IC3, _P.BLC)),
        ClassId.EVEN_DELTA_MATROID_BASIS: (A_M_DIST, (_P.LPC, _P.IC4, _P.LC)),
    }
    return {c: ClassProtocol(c, base, preds) for c, (base, preds) in table.items()}


PROTOCOLS: dict[ClassId, ClassProtocol] = _protocols()


def get_protocol(c) -> ClassProtocol:
    c = ClassId(c)
    if c not in PROTOCOLS:
        raise ValueError(f"no local recognition protocol for {c.value}")
    return PROTOCOLS[c]


@dataclass(frozen=True)
class RecognitionOutcome:
    cls: ClassId
    decision: Optional[bool]  # None: a guarded sub-check was undecided
    radius: int
    certificate: tuple[int, ...]
    witnesses: tuple[tuple[int, str], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "class": self.cls.value,
            "decision": "undecided" if self.decision is None else self.decision,
            "radius": self.radius,
            "witnesses": [{"vertex": v, "rule": r} for v, r in self.witnesses],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def predicate_failures(g: Graph, protocol: ClassProtocol, seed: int = 0):
    """Per-vertex first failing predicate (label independent). ``"?"`` marks a guard hit."""
    out = {}
    frames = {p.radius: view_frames(g, p.radius, seed) for p in protocol.predicates}
    dummy = (0,) * g.n
    for v in range(g.n):
        for p in protocol.predicates:
            view = frames[p.radius][v].attach(dummy)
            try:
                ok = _PRED_FN[p](view)
            except GuardExceeded:
                out.setdefault(v, (p.value, "?"))
                continue
            if not ok:
                out[v] = (p.value, None)
                break
    return out


def recognize(g: Graph, c, root: int = 0, seed: int = 0) -> RecognitionOutcome:
    """Run the class protocol with the canonical certificate rooted at ``root``."""
    protocol = get_protocol(c)
    D = compute_distance_labeling(g, root)
    base_frames = view_frames(g, protocol.base.radius, seed)
    witnesses = []
    for v in range(g.n):
        view = base_frames[v].attach(D)
        for rule in protocol.base.rules:
            if not eval_rule(rule, view):
                witnesses.append((v, rule.value))
                break
    undecided = False
    for v, (name, flag) in sorted(predicate_failures(g, protocol, seed).items()):
        if flag == "?":
            undecided = True
        elif not any(w == v for w, _ in witnesses):
            witnesses.append((v, name))
    witnesses.sort()
    if witnesses:
        decision: Optional[bool] = False
    else:
        decision = None if undecided else True
    return RecognitionOutcome(protocol.cls, decision, protocol.radius, D, tuple(witnesses))


def recognize_all_roots(g: Graph, c, seed: int = 0) -> dict[int, Optional[bool]]:
    return {s: recognize(g, c, root=s, seed=seed).decision for s in range(g.n)}


def soundness_search(g: Graph, c, max_label: Optional[int] = None, budget: int = 2_000_000):
    """Search for any certificate the protocol accepts everywhere; ``None`` if there is none.

    Predicates do not read labels, so a predicate failure anywhere settles the
    question before the labeling search starts.
    """
    protocol = get_protocol(c)
    fails = predicate_failures(g, protocol)
    if any(flag is None for _, flag in fails.values()):
        return None
    if fails:
        raise GuardExceeded("a predicate could not be decided")
    found = enumerate_accepted_labelings(g, protocol.base, max_label, budget)
    return found[0] if found else None
