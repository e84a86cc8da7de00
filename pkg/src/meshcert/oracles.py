"""Global, definition-level membership tests for metric graph classes.

These are slow on purpose: every function here works from the distance
matrix and enumerates the quantifiers of the defining condition. They are the
ground truth that the local verifiers are checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from .errors import GuardExceeded
from .graph import Graph, interval, interval_tensor, iter_bits
from .linegraph import is_bipartite_line_graph, is_line_graph
from .patterns import PatternId, contains_induced, find_induced_cycle, induced_squares, iter_induced_cycles

ISOMETRIC_CYCLE_CAP = 12
HELLY_FAMILY_CAP = 7
LINK_SEARCH_BUDGET = 200_000


class MetricCondition(str, Enum):
    TC = "TC"
    QC = "QC"
    QC_MINUS = "QC-"
    QC1_MINUS = "QC1-"
    QC2_MINUS = "QC2-"


class ClassId(str, Enum):
    MESHED = "Meshed"
    WEAKLY_MODULAR = "WeaklyModular"
    MODULAR = "Modular"
    MEDIAN = "Median"
    PSEUDO_MODULAR = "PseudoModular"
    HELLY = "Helly"
    BRIDGED = "Bridged"
    WEAKLY_BRIDGED = "WeaklyBridged"
    CHORDAL = "Chordal"
    SWEAKLY_MODULAR = "SweaklyModular"
    DUAL_POLAR = "DualPolar"
    BUCOLIC = "Bucolic"
    CAGE_AMALGAMATION = "CageAmalgamation"
    MATROID_BASIS = "MatroidBasis"
    EVEN_DELTA_MATROID_BASIS = "EvenDeltaMatroidBasis"


# direct containments; the hierarchy is the transitive closure
CLASS_PARENTS: dict[ClassId, tuple[ClassId, ...]] = {
    ClassId.MESHED: (),
    ClassId.WEAKLY_MODULAR: (ClassId.MESHED,),
    ClassId.MODULAR: (ClassId.WEAKLY_MODULAR,),
    ClassId.MEDIAN: (ClassId.MODULAR,),
    ClassId.PSEUDO_MODULAR: (ClassId.WEAKLY_MODULAR,),
    ClassId.HELLY: (ClassId.WEAKLY_MODULAR,),
    ClassId.WEAKLY_BRIDGED: (ClassId.WEAKLY_MODULAR,),
    ClassId.BRIDGED: (ClassId.WEAKLY_BRIDGED,),
    ClassId.CHORDAL: (ClassId.BRIDGED,),
    ClassId.SWEAKLY_MODULAR: (ClassId.WEAKLY_MODULAR,),
    ClassId.DUAL_POLAR: (ClassId.SWEAKLY_MODULAR,),
    ClassId.BUCOLIC: (ClassId.WEAKLY_MODULAR,),
    ClassId.CAGE_AMALGAMATION: (ClassId.BUCOLIC,),
    ClassId.EVEN_DELTA_MATROID_BASIS: (ClassId.MESHED,),
    ClassId.MATROID_BASIS: (ClassId.EVEN_DELTA_MATROID_BASIS,),
}


def superclasses(c: ClassId) -> set[ClassId]:
    out: set[ClassId] = set()
    stack = list(CLASS_PARENTS[c])
    while stack:
        p = stack.pop()
        if p not in out:
            out.add(p)
            stack.extend(CLASS_PARENTS[p])
    return out


@dataclass(frozen=True)
class OracleResult:
    holds: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.holds


# -- metric conditions -------------------------------------------------------


def satisfies_condition(g: Graph, c: MetricCondition, root: Optional[int] = None) -> OracleResult:
    """Exhaustively check a triangle/quadrangle condition.

    With ``root`` the condition is checked only for ``s = root``. On failure the
    witness names the violating ``u, v, s`` (and ``w`` where the template has one).
    """
    c = MetricCondition(c)
    d = g.dist
    srcs = np.arange(g.n) if root is None else np.array([root])
    ds = d[srcs]  # rows: sources s
    if c is MetricCondition.TC:
        for u, v in g.edges:
            common = list(iter_bits(g.masks[u] & g.masks[v]))
            need = ds[:, u] == ds[:, v]
            if common:
                ok = (ds[:, common] == (ds[:, u] - 1)[:, None]).any(axis=1)
            else:
                ok = np.zeros(len(srcs), dtype=bool)
            bad = np.flatnonzero(need & ~ok)
            if bad.size:
                return OracleResult(False, {"u": u, "v": v, "s": int(srcs[bad[0]])})
        return OracleResult(True)
    for u in range(g.n):
        for v in range(g.n):
            if u == v or d[u, v] != 2:
                continue
            if c is MetricCondition.QC_MINUS and v < u:
                continue
            common = list(iter_bits(g.masks[u] & g.masks[v]))
            dc = ds[:, common]
            du, dv = ds[:, u], ds[:, v]
            if c is MetricCondition.QC_MINUS:
                ok = (2 * dc <= (du + dv)[:, None]).any(axis=1)
                bad = np.flatnonzero(~ok)
                if bad.size:
                    return OracleResult(False, {"u": u, "v": v, "s": int(srcs[bad[0]])})
                continue
            for w in common:
                dw = ds[:, w]
                if c is MetricCondition.QC:
                    need = (du == dv) & (dw == du + 1)
                    ok = (dc == (du - 1)[:, None]).any(axis=1)
                elif c is MetricCondition.QC1_MINUS:
                    need = (du == dw) & (du == dv + 1)
                    ok = (dc == dv[:, None]).any(axis=1)
                else:
                    need = (du == dv) & (dw == du + 1)
                    ok = ((dc >= (du - 1)[:, None]) & (dc <= du[:, None])).any(axis=1)
                bad = np.flatnonzero(need & ~ok)
                if bad.size:
                    return OracleResult(False, {"u": u, "v": v, "w": w, "s": int(srcs[bad[0]])})
    return OracleResult(True)


def is_meshed(g: Graph) -> OracleResult:
    return satisfies_condition(g, MetricCondition.QC_MINUS)


def is_weakly_modular(g: Graph) -> OracleResult:
    tc = satisfies_condition(g, MetricCondition.TC)
    if not tc:
        return OracleResult(False, {"condition": "TC", **tc.witness})
    qc = satisfies_condition(g, MetricCondition.QC)
    if not qc:
        return OracleResult(False, {"condition": "QC", **qc.witness})
    return OracleResult(True)


# -- medians and metric triangles -------------------------------------------


def median_set(g: Graph, x: int, y: int, z: int) -> frozenset[int]:
    return interval(g, x, y) & interval(g, x, z) & interval(g, y, z)


def _median_counts(g: Graph) -> np.ndarray:
    """``M[a, b, c]`` = number of medians of the triple."""
    I = interval_tensor(g)
    n = g.n
    M = np.empty((n, n, n), dtype=np.int64)
    for a in range(n):
        M[a] = (I[a][:, None, :] & I[a][None, :, :] & I).sum(axis=-1)
    return M


def _corner_overlaps(g: Graph) -> np.ndarray:
    """``P[a, b, c] = |I(a, b) & I(a, c)|``."""
    I = interval_tensor(g)
    n = g.n
    P = np.empty((n, n, n), dtype=np.int64)
    for a in range(n):
        P[a] = (I[a][:, None, :] & I[a][None, :, :]).sum(axis=-1)
    return P


@dataclass(frozen=True)
class MetricTriangle:
    corners: tuple[int, int, int]
    sides: tuple[int, int, int]

    @property
    def size(self) -> Optional[int]:
        """Common side length, or ``None`` if the triangle is not equilateral."""
        return self.sides[0] if len(set(self.sides)) == 1 else None

    def is_strongly_equilateral(self, g: Graph) -> bool:
        k = self.size
        if k is None:
            return False
        a, b, c = self.corners
        d = g.dist
        return all(
            all(d[p, x] == k for x in interval(g, q, r))
            for p, q, r in ((a, b, c), (b, a, c), (c, a, b))
        )


def metric_triangles(g: Graph, include_degenerate: bool = True) -> list[MetricTriangle]:
    """All metric triangles, as unordered triples of distinct corners.

    Single vertices count as the degenerate size-0 triangles when
    ``include_degenerate`` is set.
    """
    P = _corner_overlaps(g)
    ok = (P == 1) & (P.transpose(1, 0, 2) == 1) & (P.transpose(1, 2, 0) == 1)
    d = g.dist
    out = []
    if include_degenerate:
        out.extend(MetricTriangle((v, v, v), (0, 0, 0)) for v in range(g.n))
    for a, b, c in zip(*np.nonzero(ok)):
        if a < b < c:
            a, b, c = int(a), int(b), int(c)
            out.append(MetricTriangle((a, b, c), (int(d[a, b]), int(d[b, c]), int(d[a, c]))))
    return out


# -- Helly property of balls -------------------------------------------------


def is_ball_helly(g: Graph) -> OracleResult:
    """Helly property of the ball hypergraph via the triple criterion.

    A hypergraph is Helly iff for every three vertices the edges containing at
    least two of them meet. For balls this reduces to: with ``r_z`` the second
    smallest distance from ``z`` to the triple, the balls ``B(z, r_z)`` share a
    vertex. The witness lists that ball family when they do not.
    """
    d = g.dist
    n = g.n
    for a in range(n):
        for b in range(a + 1, n):
            cs = np.arange(b + 1, n)
            if cs.size == 0:
                continue
            stack = np.stack(
                [np.broadcast_to(d[a], (cs.size, n)), np.broadcast_to(d[b], (cs.size, n)), d[cs]]
            )
            r = stack.sum(axis=0) - stack.max(axis=0) - stack.min(axis=0)  # (triples, z)
            hit = (d[None, :, :] <= r[:, None, :]).all(axis=-1).any(axis=-1)
            bad = np.flatnonzero(~hit)
            if bad.size:
                c = int(cs[bad[0]])
                radii = r[bad[0]]
                family = _minimal_family(g, [(z, int(radii[z])) for z in range(n)])
                return OracleResult(False, {"triple": (a, b, c), "balls": family})
    return OracleResult(True)


def _ball_mask(g: Graph, z: int, r: int) -> int:
    return sum(1 << int(x) for x in np.flatnonzero(g.dist[z] <= r))


def _minimal_family(g: Graph, balls):
    # drop balls while the intersection stays empty
    masks = [_ball_mask(g, z, r) for z, r in balls]
    keep = list(range(len(balls)))
    full = (1 << g.n) - 1
    for i in sorted(keep, key=lambda i: -bin(masks[i]).count("1")):
        trial = [j for j in keep if j != i]
        inter = full
        for j in trial:
            inter &= masks[j]
        if inter == 0:
            keep = trial
    return [balls[i] for i in keep]


def helly_family_search(g: Graph, cap: int = HELLY_FAMILY_CAP) -> OracleResult:
    """Exhaustive search for pairwise intersecting balls with empty intersection.

    Families are built ball by ball; in an inclusion-minimal bad family every
    ball strictly shrinks the running intersection, whatever the order, which
    bounds the depth by ``n``.
    """
    if g.n > cap:
        raise GuardExceeded(f"exhaustive Helly search capped at n={cap}, got n={g.n}")
    balls = {}
    for z in range(g.n):
        for r in range(int(g.dist[z].max()) + 1):
            balls.setdefault(_ball_mask(g, z, r), (z, r))
    masks = sorted(balls)
    full = (1 << g.n) - 1

    def rec(start, chosen, inter):
        for i in range(start, len(masks)):
            m = masks[i]
            if any(m & c == 0 for c in chosen):
                continue
            new = inter & m
            if new == inter:
                continue
            if new == 0:
                return chosen + [m]
            found = rec(i + 1, chosen + [m], new)
            if found:
                return found
        return None

    bad = rec(0, [], full)
    if bad is None:
        return OracleResult(True)
    return OracleResult(False, {"balls": [balls[m] for m in bad]})


# -- cycles, chordality ------------------------------------------------------


def isometric_long_cycle(g: Graph, cap: int = ISOMETRIC_CYCLE_CAP) -> Optional[list[int]]:
    """An isometric cycle of length at least 4, or ``None`` (brute force)."""
    if g.n > cap:
        raise GuardExceeded(f"isometric cycle enumeration capped at n={cap}, got n={g.n}")
    full = (1 << g.n) - 1
    d = g.dist
    for k in range(4, g.n + 1):
        for cyc in iter_induced_cycles(g.masks, full, k):
            if all(
                d[cyc[i], cyc[j]] == min(j - i, k - j + i)
                for i in range(k)
                for j in range(i + 1, k)
            ):
                return cyc
    return None


def perfect_elimination_ordering(g: Graph) -> Optional[list[int]]:
    """A perfect elimination ordering if ``g`` is chordal, else ``None``.

    Maximum cardinality search, reversed, then verified directly.
    """
    n = g.n
    weight = [0] * n
    numbered = [False] * n
    order = []
    for _ in range(n):
        v = max((x for x in range(n) if not numbered[x]), key=lambda x: weight[x])
        numbered[v] = True
        order.append(v)
        for w in g.adj[v]:
            if not numbered[w]:
                weight[w] += 1
    peo = order[::-1]
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [w for w in g.adj[v] if pos[w] > pos[v]]
        if not later:
            continue
        parent = min(later, key=lambda w: pos[w])
        for w in later:
            if w != parent and not g.has_edge(parent, w):
                return None
    return peo


def all_balls_convex(g: Graph) -> OracleResult:
    I = interval_tensor(g)
    d = g.dist
    for z in range(g.n):
        for r in range(1, int(d[z].max())):
            inside = d[z] <= r
            idx = np.flatnonzero(inside)
            sub = I[np.ix_(idx, idx)][:, :, ~inside]
            if sub.any():
                return OracleResult(False, {"center": z, "radius": r})
    return OracleResult(True)


# -- conditions for basis graphs ---------------------------------------------


@dataclass(frozen=True)
class BasisConditions:
    """Outcome of the basis-graph conditions; ``None`` means undecided (guard hit)."""

    pc: bool
    lpc: bool
    ic3: bool
    ic4: bool
    lc: Optional[bool]
    blc: bool
    thick: bool
    witnesses: dict = field(default_factory=dict, compare=False)


def is_thick(g: Graph) -> OracleResult:
    d = g.dist
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if d[u, v] != 2:
                continue
            common = list(iter_bits(g.masks[u] & g.masks[v]))
            if not any(not g.has_edge(a, b) for a, b in itertools.combinations(common, 2)):
                return OracleResult(False, {"u": u, "v": v})
    return OracleResult(True)


def fits_octahedron(masks, vertices: list[int], k: int) -> bool:
    """Is the subgraph induced by ``vertices`` an induced subgraph of the k-octahedron?

    Equivalent: its complement is a matching, and matched pairs plus unmatched
    vertices number at most ``k``.
    """
    vs = set(vertices)
    parts = 0
    matched = set()
    for a in vertices:
        non = [b for b in vs if b != a and not (masks[a] >> b) & 1]
        if len(non) > 1:
            return False
        if non:
            matched.add(a)
    parts = len(matched) // 2 + (len(vs) - len(matched))
    return parts <= k


def interval_condition(g: Graph, k: int) -> OracleResult:
    d = g.dist
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if d[u, v] != 2:
                continue
            common = list(iter_bits(g.masks[u] & g.masks[v]))
            if not any(not g.has_edge(a, b) for a, b in itertools.combinations(common, 2)):
                return OracleResult(False, {"u": u, "v": v, "reason": "no square"})
            if not fits_octahedron(g.masks, [u, v, *common], k):
                return OracleResult(False, {"u": u, "v": v, "reason": f"not in {k}-octahedron"})
    return OracleResult(True)


def positioning_condition(g: Graph, local_radius: Optional[int] = None) -> OracleResult:
    """PC over all roots and squares; with ``local_radius`` only squares inside ``B_r(s)``."""
    d = g.dist
    for a, b, c, e in induced_squares(g):
        diff = d[:, a] + d[:, c] - d[:, b] - d[:, e]
        if local_radius is not None:
            inside = (d[:, [a, b, c, e]] <= local_radius).all(axis=1)
            diff = np.where(inside, diff, 0)
        bad = np.flatnonzero(diff)
        if bad.size:
            return OracleResult(False, {"s": int(bad[0]), "square": (a, b, c, e)})
    return OracleResult(True)


def link_condition(g: Graph, bipartite: bool, budget: int = LINK_SEARCH_BUDGET) -> OracleResult:
    """Every open neighborhood induces a line graph (of a bipartite graph)."""
    for v in range(g.n):
        if bipartite:
            ok = is_bipartite_line_graph(g.masks, g.masks[v])
        else:
            ok = is_line_graph(g.masks, g.masks[v], budget=budget)
        if not ok:
            return OracleResult(False, {"vertex": v})
    return OracleResult(True)


def basis_graph_conditions(g: Graph, budget: int = LINK_SEARCH_BUDGET) -> BasisConditions:
    pc = positioning_condition(g)
    lpc = positioning_condition(g, local_radius=3)
    ic3 = interval_condition(g, 3)
    ic4 = interval_condition(g, 4)
    blc = link_condition(g, bipartite=True)
    try:
        lc = link_condition(g, bipartite=False, budget=budget)
        lc_value: Optional[bool] = lc.holds
    except GuardExceeded:
        lc, lc_value = None, None
    thick = is_thick(g)
    wit = {
        name: res.witness
        for name, res in (("pc", pc), ("lpc", lpc), ("ic3", ic3), ("ic4", ic4), ("blc", blc), ("thick", thick), ("lc", lc))
        if res is not None and not res.holds
    }
    return BasisConditions(pc.holds, lpc.holds, ic3.holds, ic4.holds, lc_value, blc.holds, thick.holds, wit)


# -- class membership --------------------------------------------------------


def _no_patterns(g: Graph, patterns) -> OracleResult:
    for p in patterns:
        occ = contains_induced(g, p)
        if occ is not None:
            return OracleResult(False, {"pattern": p.value, "occurrence": occ})
    return OracleResult(True)


def _no_wheels(g: Graph, k_min: int = 4) -> OracleResult:
    for c in range(g.n):
        for k in range(k_min, g.degree(c) + 1):
            cyc = find_induced_cycle(g.masks, g.masks[c], k)
            if cyc is not None:
                return OracleResult(False, {"pattern": f"W{k}", "center": c, "rim": cyc})
    return OracleResult(True)


def _all(*checks) -> OracleResult:
    for name, fn in checks:
        res = fn()
        if not res:
            return OracleResult(False, {"failed": name, **(res.witness or {})})
    return OracleResult(True)


def is_class(g: Graph, c: ClassId) -> OracleResult:
    """Decide membership of ``g`` in class ``c`` from the definitions.

    Raises
    ------
    GuardExceeded
        If a brute-force sub-oracle would run beyond its size cap.
    """
    c = ClassId(c)
    wm = lambda: is_weakly_modular(g)  # noqa: E731
    if c is ClassId.MESHED:
        return _all(("QC-", lambda: is_meshed(g)))
    if c is ClassId.WEAKLY_MODULAR:
        return _all(("TC+QC", wm))
    if c is ClassId.MODULAR:
        return _all(("every triple has a median", lambda: _median_check(g, unique=False)))
    if c is ClassId.MEDIAN:
        return _all(("every triple has a unique median", lambda: _median_check(g, unique=True)))
    if c is ClassId.PSEUDO_MODULAR:
        return _all(("TC+QC", wm), ("metric triangles of size <= 1", lambda: _max_triangle(g, 1)))
    if c is ClassId.HELLY:
        return _all(("Helly balls", lambda: is_ball_helly(g)))
    if c is ClassId.BRIDGED:
        if g.n <= ISOMETRIC_CYCLE_CAP:
            return _all(("no isometric cycle > 3", lambda: _no_isometric(g)))
        return is_bridged_by_patterns(g)
    if c is ClassId.WEAKLY_BRIDGED:
        return _all(("TC+QC", wm), ("convex balls", lambda: all_balls_convex(g)))
    if c is ClassId.CHORDAL:
        peo = perfect_elimination_ordering(g)
        return OracleResult(True) if peo is not None else OracleResult(False, {"failed": "no perfect elimination ordering"})
    if c is ClassId.SWEAKLY_MODULAR:
        return _all(("TC+QC", wm), ("no K4-, K3,3-", lambda: _no_patterns(g, [PatternId.K4_MINUS, PatternId.K33_MINUS])))
    if c is ClassId.DUAL_POLAR:
        return _all(
            ("sweakly modular", lambda: is_class(g, ClassId.SWEAKLY_MODULAR)),
            ("thick", lambda: is_thick(g)),
        )
    if c is ClassId.BUCOLIC:
        return _all(
            ("TC+QC", wm),
            ("no K2,3, W4, W4-", lambda: _no_patterns(g, [PatternId.K23, PatternId.W4, PatternId.W4_MINUS])),
        )
    if c is ClassId.CAGE_AMALGAMATION:
        return _all(("bucolic", lambda: is_class(g, ClassId.BUCOLIC)), ("no Wk, k >= 4", lambda: _no_wheels(g)))
    if c is ClassId.MATROID_BASIS:
        return _all(
            ("PC", lambda: positioning_condition(g)),
            ("IC3", lambda: interval_condition(g, 3)),
            ("BLC", lambda: link_condition(g, bipartite=True)),
        )
    if c is ClassId.EVEN_DELTA_MATROID_BASIS:
        return _all(
            ("PC", lambda: positioning_condition(g)),
            ("IC4", lambda: interval_condition(g, 4)),
            ("LC", lambda: link_condition(g, bipartite=False)),
        )
    raise ValueError(c)


def is_bridged_by_patterns(g: Graph) -> OracleResult:
    return _all(("TC+QC", lambda: is_weakly_modular(g)), ("no C4, C5", lambda: _no_patterns(g, [PatternId.C4, PatternId.C5])))


def is_modular_by_triangles(g: Graph) -> OracleResult:
    return _all(("TC+QC", lambda: is_weakly_modular(g)), ("triangle-free", lambda: _no_patterns(g, [PatternId.K3])))


def is_chordal_by_wheels(g: Graph) -> OracleResult:
    return _all(("bridged", lambda: is_class(g, ClassId.BRIDGED)), ("no Wk", lambda: _no_wheels(g)))


def _no_isometric(g: Graph) -> OracleResult:
    cyc = isometric_long_cycle(g)
    return OracleResult(True) if cyc is None else OracleResult(False, {"cycle": cyc})


def _median_check(g: Graph, unique: bool) -> OracleResult:
    M = _median_counts(g)
    bad = (M != 1) if unique else (M == 0)
    hits = np.argwhere(bad)
    if hits.size:
        x, y, z = (int(t) for t in hits[0])
        return OracleResult(False, {"triple": (x, y, z), "medians": int(M[x, y, z])})
    return OracleResult(True)


def _max_triangle(g: Graph, limit: int) -> OracleResult:
    for t in metric_triangles(g, include_degenerate=False):
        if max(t.sides) > limit:
            return OracleResult(False, {"triangle": t.corners, "sides": t.sides})
    return OracleResult(True)


def class_report(g: Graph, classes=None) -> dict[ClassId, Any]:
    """Run :func:`is_class` for several classes; guard errors are reported, not raised."""
    out: dict[ClassId, Any] = {}
    for c in classes or list(ClassId):
        try:
            out[ClassId(c)] = is_class(g, c)
        except GuardExceeded as exc:
            out[ClassId(c)] = exc
    return out
