"""Distance and distance-mod-3 certificates, the rule catalog and the verifier engine.

A rule is a predicate on a :class:`LabeledView`; local vertex 0 is the center.
The engine is the only code that sees global vertex names: it extracts the
anonymized ball around each vertex, attaches the labels and hands the view
to the rules.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

from .errors import BudgetExceeded, GraphInputError, RadiusError
from .graph import Graph, LabeledView, ViewFrame, iter_bits, view_frame


def prec(k: int) -> int:
    return (k + 2) % 3


def nxt(k: int) -> int:
    return (k + 1) % 3


class LabelKind(str, Enum):
    DISTANCE = "distance"
    MOD3 = "mod3"


class RuleId(str, Enum):
    DG0 = "DG0"
    DG = "DG"
    DM = "DM"
    DTC = "DTC"
    DB = "DB"
    DH = "DH"
    MG = "MG"
    MGT = "MGT"
    MGS = "MGS"
    MM = "MM"
    MTC = "MTC"
    MB = "MB"
    MH = "MH"

    @property
    def radius(self) -> int:
        return 2 if self in (RuleId.DM, RuleId.MGS, RuleId.MM) else 1

    @property
    def kind(self) -> LabelKind:
        return LabelKind.DISTANCE if self.value.startswith("D") else LabelKind.MOD3


CATALOG_ORDER = {r: i for i, r in enumerate(RuleId)}


def _nb(view: LabeledView, i: int) -> int:
    return view.subgraph.masks[i]


def _dg0(view):
    L = view.labels
    if L[0] != 0:
        return True
    return all(L[u] == 1 for u in iter_bits(_nb(view, 0)))


def _dg(view):
    L = view.labels
    d = L[0]
    if d <= 0:
        return True
    nbrs = [L[u] for u in iter_bits(_nb(view, 0))]
    return (d - 1) in nbrs and all(d - 1 <= x <= d + 1 for x in nbrs)


def _pairs_nonadjacent(view, nbr_mask):
    masks = view.subgraph.masks
    nbrs = list(iter_bits(nbr_mask))
    for i, u in enumerate(nbrs):
        for w in nbrs[i + 1:]:
            if not (masks[u] >> w) & 1:
                yield u, w


def _dm(view):
    L, masks = view.labels, view.subgraph.masks
    d = L[0]
    for a, b in _pairs_nonadjacent(view, masks[0]):
        for u, u2 in ((a, b), (b, a)):
            if (L[u] == d and L[u2] == d - 1) or (L[u] == L[u2] == d - 1):
                if not any(L[x] <= L[u2] for x in iter_bits(masks[u] & masks[u2])):
                    return False
    return True


def _dtc(view):
    L, masks = view.labels, view.subgraph.masks
    d = L[0]
    for u in iter_bits(masks[0]):
        if L[u] == d and not any(L[x] == d - 1 for x in iter_bits(masks[u] & masks[0])):
            return False
    return True


def _db(view):
    L = view.labels
    d = L[0]
    low = sum(1 << u for u in iter_bits(_nb(view, 0)) if L[u] == d - 1)
    return not any(True for _ in _pairs_nonadjacent(view, low))


def _dominates(view, x, members):
    closed = view.subgraph.masks[x] | (1 << x)
    return members & ~closed == 0


def _dh(view):
    L = view.labels
    d = L[0]
    if d <= 0:
        return True
    nb = list(iter_bits(_nb(view, 0)))
    members = sum(1 << u for u in nb if L[u] <= d)
    return any(L[x] == d - 1 and _dominates(view, x, members) for x in nb)


def _mg(view):
    L = view.labels
    p = prec(L[0])
    nbrs = [L[u] for u in iter_bits(_nb(view, 0))]
    return p in nbrs or (L[0] == 0 and all(x == 1 for x in nbrs))


def _mgt(view):
    L, masks = view.labels, view.subgraph.masks
    for u in iter_bits(masks[0]):
        for w in iter_bits(masks[0] & masks[u]):
            if w > u and {L[0], L[u], L[w]} == {0, 1, 2}:
                return False
    return True


def _mgs(view):
    # induced squares (center, a, far, b) with a, b in N(center)
    L, masks = view.labels, view.subgraph.masks
    for a, b in _pairs_nonadjacent(view, masks[0]):
        for far in iter_bits(masks[a] & masks[b] & ~masks[0] & ~1):
            quad = (0, a, far, b)
            labels = [L[q] for q in quad]
            if set(labels) != {0, 1, 2}:
                continue
            # the repeated label must sit on a diagonal: (0, far) or (a, b)
            if not (labels[0] == labels[2] or labels[1] == labels[3]):
                return False
    return True


def _mm(view):
    L, masks = view.labels, view.subgraph.masks
    c = L[0]
    for a, b in _pairs_nonadjacent(view, masks[0]):
        for u, u2 in ((a, b), (b, a)):
            if (L[u] == c == nxt(L[u2])) or (L[u] == L[u2] == prec(c)):
                ok = (L[u2], prec(L[u2]))
                if not any(L[x] in ok for x in iter_bits(masks[u] & masks[u2])):
                    return False
    return True


def _mtc(view):
    L, masks = view.labels, view.subgraph.masks
    c = L[0]
    p = prec(c)
    for u in iter_bits(masks[0]):
        if L[u] == c and not any(L[x] == p for x in iter_bits(masks[u] & masks[0])):
            return False
    return True


def _mb(view):
    L = view.labels
    p = prec(L[0])
    low = sum(1 << u for u in iter_bits(_nb(view, 0)) if L[u] == p)
    return not any(True for _ in _pairs_nonadjacent(view, low))


def _mh(view):
    L = view.labels
    c = L[0]
    p = prec(c)
    nb = list(iter_bits(_nb(view, 0)))
    if not any(L[y] == p for y in nb):
        return True
    members = sum(1 << u for u in nb if L[u] in (c, p))
    return any(L[x] == p and _dominates(view, x, members) for x in nb)


_RULE_FN = {
    RuleId.DG0: _dg0, RuleId.DG: _dg, RuleId.DM: _dm, RuleId.DTC: _dtc,
    RuleId.DB: _db, RuleId.DH: _dh, RuleId.MG: _mg, RuleId.MGT: _mgt,
    RuleId.MGS: _mgs, RuleId.MM: _mm, RuleId.MTC: _mtc, RuleId.MB: _mb, RuleId.MH: _mh,
}


def eval_rule(rule: RuleId, view: LabeledView) -> bool:
    """Truth value of ``rule`` at the center of ``view``.

    Raises
    ------
    RadiusError
        If the view is smaller than the rule's radius.
    """
    rule = RuleId(rule)
    if view.radius < rule.radius:
        raise RadiusError(f"rule {rule.value} needs radius {rule.radius}, view has {view.radius}")
    return _RULE_FN[rule](view)


@dataclass(frozen=True)
class RuleSet:
    name: str
    rules: tuple[RuleId, ...]

    def __post_init__(self):
        kinds = {r.kind for r in self.rules}
        if len(kinds) != 1:
            raise ValueError(f"rule set {self.name} mixes label kinds")
        object.__setattr__(self, "rules", tuple(sorted(self.rules, key=CATALOG_ORDER.__getitem__)))

    @property
    def radius(self) -> int:
        return max(r.radius for r in self.rules)

    @property
    def kind(self) -> LabelKind:
        return self.rules[0].kind


_D = RuleId
RULESETS: dict[str, RuleSet] = {
    rs.name: rs
    for rs in (
        RuleSet("A_M_dist", (_D.DG0, _D.DG, _D.DTC, _D.DM)),
        RuleSet("A_B_dist", (_D.DG0, _D.DG, _D.DTC, _D.DB)),
        RuleSet("A_H_dist", (_D.DG0, _D.DG, _D.DTC, _D.DH)),
        RuleSet("MESHED_dist", (_D.DG0, _D.DG, _D.DM)),
        RuleSet("BRIDGED_dist", (_D.DG0, _D.DG, _D.DTC, _D.DB)),
        RuleSet("HELLY_dist", (_D.DG0, _D.DG, _D.DH)),
        RuleSet("MESHED_mod3", (_D.MG, _D.MGT, _D.MGS, _D.MM)),
        RuleSet("BRIDGED_mod3", (_D.MG, _D.MGT, _D.MTC, _D.MB)),
        RuleSet("HELLY_mod3", (_D.MG, _D.MGT, _D.MH)),
    )
}
A_M_DIST = RULESETS["A_M_dist"]
A_B_DIST = RULESETS["A_B_dist"]
A_H_DIST = RULESETS["A_H_dist"]
MESHED_DIST = RULESETS["MESHED_dist"]
BRIDGED_DIST = RULESETS["BRIDGED_dist"]
HELLY_DIST = RULESETS["HELLY_dist"]
MESHED_MOD3 = RULESETS["MESHED_mod3"]
BRIDGED_MOD3 = RULESETS["BRIDGED_mod3"]
HELLY_MOD3 = RULESETS["HELLY_mod3"]


def get_ruleset(name) -> RuleSet:
    if isinstance(name, RuleSet):
        return name
    try:
        return RULESETS[name]
    except KeyError:
        raise GraphInputError(f"unknown rule set {name!r}; choose from {sorted(RULESETS)}") from None


# -- certificates --------------------------------------------------------------


def compute_distance_labeling(g: Graph, s: int) -> tuple[int, ...]:
    _check_vertex(g, s)
    return tuple(int(x) for x in g.dist[s])


def compute_mod3_labeling(g: Graph, s: int) -> tuple[int, ...]:
    _check_vertex(g, s)
    return tuple(int(x) % 3 for x in g.dist[s])


def _check_vertex(g: Graph, s: int):
    if not (0 <= s < g.n):
        raise GraphInputError(f"vertex {s} out of range for n={g.n}")


def certificate_bits(labels: Sequence[int], kind) -> int:
    """Bits per vertex needed to store the certificate."""
    if LabelKind(kind) is LabelKind.MOD3:
        return 2
    return max(labels).bit_length()


def validate_labels(g: Graph, labels: Sequence[int], kind) -> tuple[int, ...]:
    if len(labels) != g.n:
        raise GraphInputError(f"expected {g.n} labels, got {len(labels)}")
    out = []
    for x in labels:
        if isinstance(x, bool) or int(x) != x:
            raise GraphInputError(f"label {x!r} is not an integer")
        out.append(int(x))
    top = 2 if LabelKind(kind) is LabelKind.MOD3 else None
    if any(x < 0 or (top is not None and x > top) for x in out):
        raise GraphInputError(f"labels out of range for {LabelKind(kind).value} certificates")
    return tuple(out)


def parse_labeling(text: str, n: int) -> tuple[int, ...]:
    """Parse lines ``"v label"``; every vertex exactly once."""
    values: dict[int, int] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            v, lab = (int(t) for t in parts)
        except ValueError:
            raise GraphInputError(f"malformed labeling line {raw!r}") from None
        if not 0 <= v < n:
            raise GraphInputError(f"vertex {v} out of range for n={n}")
        if v in values:
            raise GraphInputError(f"vertex {v} labeled twice")
        values[v] = lab
    missing = [v for v in range(n) if v not in values]
    if missing:
        raise GraphInputError(f"no label for vertices {missing[:5]}")
    return tuple(values[v] for v in range(n))


def format_labeling(labels: Sequence[int]) -> str:
    return "".join(f"{v} {x}\n" for v, x in enumerate(labels))


# -- verification engine -------------------------------------------------------


@lru_cache(maxsize=512)
def view_frames(g: Graph, r: int, shuffle_seed: int = 0) -> tuple[ViewFrame, ...]:
    """The unlabeled radius-``r`` views of every vertex (cached per graph)."""
    return tuple(view_frame(g, v, r, shuffle_seed) for v in range(g.n))


@dataclass(frozen=True)
class Verdict:
    accepted_at: tuple[bool, ...]
    rejections: tuple[tuple[int, str], ...] = field(default=())

    @property
    def accepted(self) -> bool:
        return not self.rejections

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejections": [{"vertex": v, "rule": r} for v, r in self.rejections],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def first_violation(rules: Sequence, view: LabeledView, evaluator=None) -> Optional[str]:
    ev = evaluator or eval_rule
    for rule in rules:
        if not ev(rule, view):
            return rule.value
    return None


def run_local_verifier(g: Graph, labels: Sequence[int], rs, seed: int = 0) -> Verdict:
    """Evaluate every rule of ``rs`` at every vertex on its anonymized labeled ball.

    Raises
    ------
    GraphInputError
        If the labels do not fit the rule set's label kind.
    """
    rs = get_ruleset(rs)
    labels = validate_labels(g, labels, rs.kind)
    frames = view_frames(g, rs.radius, seed)
    acc = []
    rej = []
    for v, frame in enumerate(frames):
        bad = first_violation(rs.rules, frame.attach(labels))
        acc.append(bad is None)
        if bad is not None:
            rej.append((v, bad))
    return Verdict(tuple(acc), tuple(rej))


DEFAULT_NODE_BUDGET = 2_000_000


def enumerate_accepted_labelings(
    g: Graph,
    rs,
    max_label: Optional[int] = None,
    budget: int = DEFAULT_NODE_BUDGET,
    extra_checks: Sequence = (),
) -> list[tuple[int, ...]]:
    """All labelings accepted at every vertex, by pruned backtracking.

    Vertices are labeled in BFS order. A vertex's rules are evaluated as soon
    as its ball of the rule's radius is fully labeled. For distance rule sets
    containing DG0 and DG, labels of adjacent vertices differ by at most one
    (both rules force this), which prunes the domain further.

    ``extra_checks`` are ``(radius, fn)`` pairs with ``fn(view) -> bool``
    evaluated the same way; recognition uses it for structural predicates.

    Raises
    ------
    BudgetExceeded
        After ``budget`` search nodes.
    """
    rs = get_ruleset(rs)
    if rs.kind is LabelKind.MOD3:
        domain = (0, 1, 2)
    else:
        top = g.n if max_label is None else max_label
        domain = tuple(range(top + 1))
    edge_prune = rs.kind is LabelKind.DISTANCE and {RuleId.DG0, RuleId.DG} <= set(rs.rules)

    order = _bfs_order(g)
    pos = {v: i for i, v in enumerate(order)}
    checks = [(r.radius, r) for r in rs.rules] + [(rad, fn) for rad, fn in extra_checks]
    radii = sorted({rad for rad, _ in checks})
    frames = {rad: view_frames(g, rad, 0) for rad in radii}
    # due[i]: (frame, checks) to run once order[i] is labeled
    due: list[list] = [[] for _ in order]
    for rad in radii:
        group = [c for r2, c in checks if r2 == rad]
        for v in range(g.n):
            frame = frames[rad][v]
            last = max(pos[u] for u in frame.to_global)
            due[last].append((frame, group))

    labels = [0] * g.n
    out = []
    nodes = 0
    earlier = [[u for u in g.adj[v] if pos[u] < pos[v]] for v in order]

    def check(frame, group):
        view = frame.attach(labels)
        for c in group:
            ok = eval_rule(c, view) if isinstance(c, RuleId) else c(view)
            if not ok:
                return False
        return True

    def rec(i):
        nonlocal nodes
        if i == len(order):
            out.append(tuple(labels))
            return
        v = order[i]
        if edge_prune and earlier[i]:
            lo = max(labels[u] for u in earlier[i]) - 1
            hi = min(labels[u] for u in earlier[i]) + 1
            cand = [x for x in domain if lo <= x <= hi]
        else:
            cand = domain
        for x in cand:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"labeling search exceeded {budget} nodes")
            labels[v] = x
            if all(check(frame, group) for frame, group in due[i]):
                rec(i + 1)
        labels[v] = 0

    rec(0)
    return out


def _bfs_order(g: Graph) -> list[int]:
    seen = [False] * g.n
    seen[0] = True
    order = [0]
    q = deque([0])
    while q:
        x = q.popleft()
        for y in g.adj[x]:
            if not seen[y]:
                seen[y] = True
                order.append(y)
                q.append(y)
    return order


def canonical_labelings(g: Graph, kind) -> set[tuple[int, ...]]:
    fn = compute_mod3_labeling if LabelKind(kind) is LabelKind.MOD3 else compute_distance_labeling
    return {fn(g, s) for s in range(g.n)}
