"""Leader election from a mod-3 certificate: orient edges downhill, elect the sink."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .certification import LabelKind, Verdict, get_ruleset, nxt, prec, run_local_verifier, validate_labels
from .errors import GraphInputError
from .graph import Graph


@dataclass(frozen=True)
class OrientedGraph:
    """Arc ``v -> u`` on every edge ``vu`` with ``L(v) = next(L(u))``."""

    base: Graph
    labels: tuple[int, ...]
    arcs: frozenset[tuple[int, int]]

    def out_neighbors(self, v: int) -> list[int]:
        return [u for u in self.base.adj[v] if (v, u) in self.arcs]


def build_oriented_graph(g: Graph, L: Sequence[int]) -> OrientedGraph:
    L = validate_labels(g, L, LabelKind.MOD3)
    arcs = set()
    for u, v in g.edges:
        if L[v] == nxt(L[u]):
            arcs.add((v, u))
        elif L[u] == nxt(L[v]):
            arcs.add((u, v))
    return OrientedGraph(g, L, frozenset(arcs))


@dataclass(frozen=True)
class SinkAnalysis:
    acyclic: bool
    cycle_witness: Optional[list[tuple[int, int]]]
    sinks: frozenset[int]


def acyclicity_and_sinks(og: OrientedGraph) -> SinkAnalysis:
    n = og.base.n
    out = [og.out_neighbors(v) for v in range(n)]
    sinks = frozenset(v for v in range(n) if not out[v])
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * n
    parent = [-1] * n
    for root in range(n):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(out[root]))]
        color[root] = GREY
        while stack:
            v, it = stack[-1]
            step = next(it, None)
            if step is None:
                color[v] = BLACK
                stack.pop()
                continue
            if color[step] == GREY:
                cycle = [(v, step)]
                x = v
                while x != step:
                    cycle.append((parent[x], x))
                    x = parent[x]
                cycle.reverse()
                return SinkAnalysis(False, cycle, sinks)
            if color[step] == WHITE:
                color[step] = GREY
                parent[step] = v
                stack.append((step, iter(out[step])))
    return SinkAnalysis(True, None, sinks)


class ElectionStatus(str, Enum):
    ELECTED = "Elected"
    REJECTED = "RejectedByVerifier"
    NO_UNIQUE_SINK = "NoUniqueSink"


@dataclass(frozen=True)
class ElectionOutcome:
    status: ElectionStatus
    leader: Optional[int]
    verdict: Verdict
    analysis: Optional[SinkAnalysis] = None

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "leader": self.leader,
            "rejections": [{"vertex": v, "rule": r} for v, r in self.verdict.rejections],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def elect_leader(g: Graph, L: Sequence[int], rs, seed: int = 0, flagged: Optional[int] = None) -> ElectionOutcome:
    """Verify ``L`` with a mod-3 rule set and elect the unique sink of the orientation.

    If ``flagged`` is given, the election succeeds only when the flagged vertex
    is that sink (leader election checked as a property of a given flag).
    """
    rs = get_ruleset(rs)
    if rs.kind is not LabelKind.MOD3:
        raise GraphInputError(f"leader election needs a mod-3 rule set, got {rs.name}")
    verdict = run_local_verifier(g, L, rs, seed)
    if not verdict.accepted:
        return ElectionOutcome(ElectionStatus.REJECTED, None, verdict)
    analysis = acyclicity_and_sinks(build_oriented_graph(g, L))
    if not analysis.acyclic or len(analysis.sinks) != 1:
        return ElectionOutcome(ElectionStatus.NO_UNIQUE_SINK, None, verdict, analysis)
    (leader,) = analysis.sinks
    if flagged is not None and flagged != leader:
        return ElectionOutcome(ElectionStatus.NO_UNIQUE_SINK, None, verdict, analysis)
    return ElectionOutcome(ElectionStatus.ELECTED, leader, verdict, analysis)


def locally_detected_sinks(g: Graph, L: Sequence[int]) -> set[int]:
    """Vertices with no neighbor labeled ``prec`` of their own label.

    Each vertex can tell from its 1-ball whether it is one of these.
    """
    return {v for v in range(g.n) if not any(L[u] == prec(L[v]) for u in g.adj[v])}


def to_dot(og: OrientedGraph, name: str = "G_L") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(og.base.n):
        lines.append(f'  {v} [label="{v}:{og.labels[v]}"];')
    for v, u in sorted(og.arcs):
        lines.append(f"  {v} -> {u};")
    lines.append("}")
    return "\n".join(lines) + "\n"
