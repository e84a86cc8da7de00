"""Graph families, class corpora and the exhaustive small-graph corpus."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

from .errors import DisconnectedGraphError, GraphInputError, GuardExceeded
from .graph import Graph, iter_bits
from .patterns import PatternId, pattern_edges

log = logging.getLogger(__name__)

MAX_RANDOM_ATTEMPTS = 1000


class Family(str, Enum):
    PATH = "path"
    CYCLE = "cycle"
    GRID = "grid"
    KING_GRID = "kinggrid"
    TRIANGULAR_GRID = "triangulargrid"
    HYPERCUBE = "hypercube"
    RANDOM_TREE = "randomtree"
    RANDOM_CHORDAL = "randomchordal"
    JOHNSON = "johnson"
    TREE_EXCHANGE = "treeexchange"
    OCTAHEDRON = "octahedron"
    RANDOM_GRAPH = "randomgraph"
    COMPLETE = "complete"
    # small extras used for negatives and examples
    STAR = "star"
    WHEEL = "wheel"
    COMPLETE_BIPARTITE = "completebipartite"
    PETERSEN = "petersen"
    TRIANGLE = "triangle"
    PATTERN = "pattern"


_ALIASES = {"k": Family.COMPLETE, "king": Family.KING_GRID, "trigrid": Family.TRIANGULAR_GRID, "cube": Family.HYPERCUBE}


@dataclass(frozen=True)
class FamilySpec:
    """A graph family with its parameters.

    ``params`` holds numbers, except for ``treeexchange`` whose single
    parameter is the nested descriptor of the input graph and ``pattern`` whose
    parameter is a pattern name.
    """

    family: Family
    params: tuple = ()
    seed: int = 0

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Parse ``"family:a,b"`` with an optional ``",seed=N"``.

        >>> FamilySpec.parse("kinggrid:3,3")
        FamilySpec(family=<Family.KING_GRID: 'kinggrid'>, params=(3, 3), seed=0)
        """
        text = text.strip()
        name, _, rest = text.partition(":")
        key = name.strip().lower()
        try:
            family = _ALIASES.get(key) or Family(key)
        except ValueError:
            raise GraphInputError(f"unknown graph family {name!r}") from None
        if family is Family.TREE_EXCHANGE:
            inner, seed = rest, 0
            if "@" in rest:
                inner, _, s = rest.rpartition("@")
                seed = _int(s)
            FamilySpec.parse(inner)
            return cls(family, (inner,), seed)
        if family is Family.PATTERN:
            # pattern names may contain commas ("K2,3"); a trailing ",k" is the size
            pname, k = rest, ""
            if rest not in PatternId._value2member_map_ and "," in rest:
                pname, _, k = rest.rpartition(",")
            try:
                pid = PatternId(pname)
            except ValueError:
                raise GraphInputError(f"unknown pattern {rest!r}") from None
            return cls(family, (pid.value,) + ((_int(k),) if k else ()))
        params = []
        seed = 0
        for tok in filter(None, (t.strip() for t in rest.split(","))):
            if tok.startswith("seed="):
                seed = _int(tok[5:])
            elif "." in tok:
                try:
                    params.append(float(tok))
                except ValueError:
                    raise GraphInputError(f"bad parameter {tok!r}") from None
            else:
                params.append(_int(tok))
        return cls(family, tuple(params), seed)

    def __str__(self):
        if self.family is Family.TREE_EXCHANGE:
            return f"treeexchange:{self.params[0]}" + (f"@{self.seed}" if self.seed else "")
        body = ",".join(str(p) for p in self.params)
        if self.family in _RANDOM:
            body += ("," if body else "") + f"seed={self.seed}"
        return self.family.value + (f":{body}" if body else "")


_RANDOM = {Family.RANDOM_TREE, Family.RANDOM_CHORDAL, Family.RANDOM_GRAPH}


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphInputError(f"expected an integer, got {tok!r}") from None


def _need(cond: bool, msg: str):
    if not cond:
        raise GraphInputError(msg)


def generate(spec) -> Graph:
    """Build the graph described by a :class:`FamilySpec` (or its string form)."""
    if isinstance(spec, str):
        spec = FamilySpec.parse(spec)
    f, p = spec.family, spec.params
    arity = {
        Family.PATH: 1, Family.CYCLE: 1, Family.GRID: 2, Family.KING_GRID: 2,
        Family.TRIANGULAR_GRID: 1, Family.HYPERCUBE: 1, Family.RANDOM_TREE: 1,
        Family.RANDOM_CHORDAL: 1, Family.JOHNSON: 2, Family.OCTAHEDRON: 1,
        Family.RANDOM_GRAPH: 2, Family.COMPLETE: 1, Family.STAR: 1, Family.WHEEL: 1,
        Family.COMPLETE_BIPARTITE: 2, Family.PETERSEN: 0, Family.TRIANGLE: 0,
    }
    if f in arity:
        _need(len(p) == arity[f], f"{f.value} takes {arity[f]} parameter(s), got {len(p)}")
        if f is not Family.RANDOM_GRAPH:
            _need(all(isinstance(x, int) for x in p), f"{f.value} takes integer parameters")
    if f is Family.PATH:
        _need(p[0] >= 1, "path needs n >= 1")
        return Graph(p[0], [(i, i + 1) for i in range(p[0] - 1)])
    if f is Family.CYCLE:
        _need(p[0] >= 3, "cycle needs n >= 3")
        return Graph(p[0], [(i, (i + 1) % p[0]) for i in range(p[0])])
    if f is Family.COMPLETE:
        _need(p[0] >= 1, "complete graph needs n >= 1")
        return complete_graph(p[0])
    if f is Family.TRIANGLE:
        return complete_graph(3)
    if f in (Family.GRID, Family.KING_GRID):
        a, b = p
        _need(a >= 1 and b >= 1, "grid dimensions must be positive")
        return _grid(a, b, king=f is Family.KING_GRID)
    if f is Family.TRIANGULAR_GRID:
        _need(p[0] >= 1, "triangular grid needs side >= 1")
        return triangular_grid(p[0])
    if f is Family.HYPERCUBE:
        _need(p[0] >= 0, "hypercube needs d >= 0")
        d = p[0]
        return Graph(1 << d, [(x, x ^ (1 << i)) for x in range(1 << d) for i in range(d) if x < x ^ (1 << i)])
    if f is Family.RANDOM_TREE:
        _need(p[0] >= 1, "tree needs n >= 1")
        rng = random.Random(spec.seed)
        return Graph(p[0], [(i, rng.randrange(i)) for i in range(1, p[0])])
    if f is Family.RANDOM_CHORDAL:
        _need(p[0] >= 1, "chordal graph needs n >= 1")
        return random_chordal(p[0], spec.seed)
    if f is Family.JOHNSON:
        n, k = p
        _need(0 < k < n, "johnson needs 0 < k < n")
        return johnson(n, k)
    if f is Family.TREE_EXCHANGE:
        h = generate(p[0])
        return tree_exchange(h)
    if f is Family.OCTAHEDRON:
        _need(p[0] >= 1, "octahedron needs k >= 1")
        n, edges = pattern_edges(PatternId.OCTAHEDRON, p[0])
        try:
            return Graph(n, edges)
        except DisconnectedGraphError:
            raise GraphInputError("the 1-octahedron is disconnected") from None
    if f is Family.RANDOM_GRAPH:
        n, prob = int(p[0]), float(p[1])
        _need(n >= 1 and 0 <= prob <= 1, "randomgraph needs n >= 1 and 0 <= p <= 1")
        return random_connected_graph(n, prob, spec.seed)
    if f is Family.STAR:
        return Graph(p[0] + 1, [(0, i) for i in range(1, p[0] + 1)])
    if f is Family.WHEEL:
        n, edges = pattern_edges(PatternId.WK, p[0])
        return Graph(n, edges)
    if f is Family.COMPLETE_BIPARTITE:
        a, b = p
        _need(a >= 1 and b >= 1, "complete bipartite sides must be positive")
        return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    if f is Family.PETERSEN:
        outer = [(i, (i + 1) % 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return Graph(10, outer + inner + [(i, i + 5) for i in range(5)])
    if f is Family.PATTERN:
        pid = PatternId(p[0])
        n, edges = pattern_edges(pid, *p[1:])
        try:
            return Graph(n, edges)
        except DisconnectedGraphError:
            raise GraphInputError(f"pattern {pid.value} is disconnected") from None
    raise GraphInputError(f"unsupported family {f}")


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def _grid(a: int, b: int, king: bool) -> Graph:
    idx = lambda i, j: i * b + j  # noqa: E731
    steps = [(0, 1), (1, 0)] + ([(1, 1), (1, -1)] if king else [])
    edges = []
    for i in range(a):
        for j in range(b):
            for di, dj in steps:
                x, y = i + di, j + dj
                if 0 <= x < a and 0 <= y < b:
                    edges.append((idx(i, j), idx(x, y)))
    return Graph(a * b, edges)


def triangular_grid(p: int) -> Graph:
    """Triangle-shaped patch ``{(i, j) : i, j >= 0, i + j <= p}`` of the triangular lattice."""
    pts = [(i, j) for i in range(p + 1) for j in range(p + 1 - i)]
    index = {q: k for k, q in enumerate(pts)}
    edges = []
    for (i, j), k in index.items():
        for di, dj in ((1, 0), (0, 1), (1, -1)):
            q = (i + di, j + dj)
            if q in index:
                edges.append((k, index[q]))
    return Graph(len(pts), edges)


def random_chordal(n: int, seed: int) -> Graph:
    """Grow a chordal graph; each new vertex is joined to a random clique."""
    rng = random.Random(seed)
    nbrs: list[set[int]] = [set()]
    for v in range(1, n):
        a = rng.randrange(v)
        clique = [a]
        cand = list(nbrs[a])
        rng.shuffle(cand)
        for x in cand:
            if all(x in nbrs[c] for c in clique):
                clique.append(x)
        clique = clique[: rng.randint(1, len(clique))]
        nbrs.append(set(clique))
        for c in clique:
            nbrs[c].add(v)
    return Graph(n, [(u, w) for u in range(n) for w in nbrs[u] if u < w])


def johnson(n: int, k: int) -> Graph:
    """Basis graph of the uniform matroid: k-subsets, adjacent iff they share k-1 elements."""
    subsets = [frozenset(c) for c in itertools.combinations(range(n), k)]
    edges = [
        (i, j)
        for i, a in enumerate(subsets)
        for j in range(i + 1, len(subsets))
        if len(a & subsets[j]) == k - 1
    ]
    return Graph(len(subsets), edges)


TREE_EXCHANGE_EDGE_CAP = 16


def spanning_trees(h: Graph) -> list[frozenset[tuple[int, int]]]:
    if h.m > TREE_EXCHANGE_EDGE_CAP:
        raise GuardExceeded(f"spanning tree enumeration capped at {TREE_EXCHANGE_EDGE_CAP} edges")
    out = []
    for combo in itertools.combinations(h.edges, h.n - 1):
        parent = list(range(h.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for u, v in combo:
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok:
            out.append(frozenset(combo))
    return out


def tree_exchange(h: Graph) -> Graph:
    """Basis graph of the graphic matroid of ``h``: spanning trees, one-edge exchanges."""
    trees = spanning_trees(h)
    edges = [
        (i, j)
        for i, a in enumerate(trees)
        for j in range(i + 1, len(trees))
        if len(a - trees[j]) == 1
    ]
    return Graph(len(trees), edges)


def random_connected_graph(n: int, p: float, seed: int, attempts: int = MAX_RANDOM_ATTEMPTS) -> Graph:
    """G(n, p) conditioned on connectivity by resampling."""
    rng = random.Random(seed)
    for _ in range(attempts):
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
        try:
            return Graph(n, edges)
        except DisconnectedGraphError:
            continue
    raise GraphInputError(f"no connected G({n}, {p}) sample in {attempts} attempts")


# -- class corpora -----------------------------------------------------------


@dataclass
class Corpus:
    graphs: list[tuple[str, Graph]] = field(default_factory=list)
    shortfall: bool = False
    warning: Optional[str] = None

    def __iter__(self):
        return iter(self.graphs)

    def __len__(self):
        return len(self.graphs)


def _candidates(c, seed: int):
    """Descriptor stream for class ``c``: preferred deterministic families first."""
    from .oracles import ClassId

    c = ClassId(c)
    trees = [f"path:{n}" for n in (3, 2, 5, 8)] + [f"randomtree:{n},seed={seed + i}" for i, n in enumerate((6, 12, 20, 35, 50, 60))]
    grids = [f"grid:{a},{b}" for a, b in ((2, 3), (3, 3), (2, 5), (3, 4), (4, 4), (3, 6), (4, 6), (5, 6), (6, 7), (7, 8))]
    cubes = [f"hypercube:{d}" for d in (3, 2, 4, 5)]
    kings = [f"kinggrid:{a},{b}" for a, b in ((3, 3), (2, 3), (2, 2), (3, 4), (4, 4), (3, 6), (4, 5), (5, 5), (5, 7), (6, 6), (6, 8), (7, 8), (2, 9), (7, 7), (3, 15))]
    tris = [f"triangulargrid:{p}" for p in (3, 1, 2, 4, 5, 6, 7, 8, 9)]
    chordal = [f"randomchordal:{n},seed={seed + i}" for i, n in enumerate((8, 10, 12, 15, 18, 20, 25, 30, 35, 40, 45, 50, 55, 60, 14, 22, 28, 33, 38, 44, 48, 52, 57, 16, 24))]
    completes = [f"complete:{n}" for n in (3, 1, 2, 4, 5, 6, 8)]
    basis = [f"johnson:{n},{k}" for n, k in ((4, 2), (5, 2), (5, 3), (6, 2), (6, 3), (7, 2), (7, 3), (6, 4), (3, 1), (5, 1), (7, 4), (7, 5), (6, 5), (4, 1), (4, 3))]
    basis += [f"treeexchange:{h}" for h in ("cycle:3", "cycle:4", "cycle:5", "pattern:K4-", "complete:4", "wheel:4", "pattern:K2,3", "completebipartite:2,3", "grid:2,3")]
    basis += [f"octahedron:{k}" for k in (2, 3, 4, 5, 6)] + cubes
    randoms = [f"randomgraph:{n},{p},seed={seed + i}" for i, (n, p) in enumerate(((7, 0.5), (8, 0.4), (9, 0.6), (10, 0.3), (12, 0.5), (6, 0.7), (11, 0.75), (14, 0.6), (9, 0.8), (16, 0.7)) * 3)]
    by_class = {
        ClassId.MEDIAN: trees[:1] + grids[:1] + cubes[:1] + trees[1:] + grids[1:] + cubes[1:],
        ClassId.MODULAR: trees + grids + cubes + ["completebipartite:2,3", "completebipartite:3,3", "completebipartite:3,5"],
        ClassId.HELLY: completes[:1] + kings[:1] + kings[1:] + trees + completes[1:] + chordal + tris,
        ClassId.BRIDGED: chordal[:1] + tris[:1] + chordal[1:] + tris[1:] + trees + completes,
        ClassId.CHORDAL: chordal + trees + completes + ["triangulargrid:1"],
        ClassId.WEAKLY_BRIDGED: chordal + tris + trees + completes,
        ClassId.MATROID_BASIS: basis + completes,
        ClassId.EVEN_DELTA_MATROID_BASIS: basis + completes,
        ClassId.DUAL_POLAR: cubes + completes + ["completebipartite:2,2", "completebipartite:3,3", "completebipartite:4,4"] + basis,
        ClassId.SWEAKLY_MODULAR: trees + grids + cubes + completes + chordal + tris,
        ClassId.BUCOLIC: trees + grids + cubes + tris + completes + chordal,
        ClassId.CAGE_AMALGAMATION: trees + completes + chordal + tris + grids,
        ClassId.PSEUDO_MODULAR: completes + trees + grids + kings + chordal + tris,
    }
    every = trees + grids + cubes + kings + tris + chordal + completes + basis
    yield from by_class.get(c, every)
    yield from every
    yield from randoms


def sample_class_corpus(c, budget: int, seed: int = 0, max_vertices: int = 64) -> Corpus:
    """Up to ``budget`` graphs of class ``c``, each checked by the class oracle.

    Deterministic families are tried first, then seeded random graphs. If the
    candidate stream runs dry the partial corpus is returned with
    ``shortfall`` set and a warning.
    """
    from .oracles import is_class

    out = Corpus()
    seen: set[Graph] = set()
    for desc in _candidates(c, seed):
        if len(out.graphs) >= budget:
            break
        try:
            g = generate(desc)
        except GraphInputError:
            continue
        if g.n > max_vertices or g in seen:
            continue
        try:
            member = is_class(g, c).holds
        except GuardExceeded:
            continue
        if member:
            seen.add(g)
            out.graphs.append((desc, g))
    if len(out.graphs) < budget:
        out.shortfall = True
        out.warning = f"only {len(out.graphs)} of {budget} requested {c.value if hasattr(c, 'value') else c} graphs found"
        log.warning(out.warning)
    return out


# -- exhaustive small connected graphs ----------------------------------------


def canonical_form(n: int, masks) -> tuple[int, ...]:
    """Canonical adjacency rows: equal for two graphs iff they are isomorphic.

    Individualization-refinement over equitable partitions; within a cell only
    one vertex per twin class is individualized, which keeps complete and
    complete bipartite pieces cheap.
    """
    best = None
    for code in _leaves(n, masks, _refine(masks, [list(range(n))])):
        if best is None or code > best:
            best = code
    return best


def _refine(masks, cells):
    cells = [list(c) for c in cells]
    while True:
        cell_masks = [sum(1 << v for v in c) for c in cells]
        new = []
        changed = False
        for c in cells:
            if len(c) == 1:
                new.append(c)
                continue
            sig = {v: tuple(bin(masks[v] & m).count("1") for m in cell_masks) for v in c}
            keys = sorted(set(sig.values()))
            if len(keys) > 1:
                changed = True
            for k in keys:
                new.append([v for v in c if sig[v] == k])
        cells = new
        if not changed:
            return cells


def _leaves(n, masks, cells):
    target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
    if target is None:
        pos = {c[0]: i for i, c in enumerate(cells)}
        yield tuple(sum(1 << pos[w] for w in iter_bits(masks[c[0]])) for c in cells)
        return
    reps = []
    for v in cells[target]:
        if not any((masks[v] & ~(1 << r)) == (masks[r] & ~(1 << v)) for r in reps):
            reps.append(v)
    for v in reps:
        rest = [w for w in cells[target] if w != v]
        split = cells[:target] + [[v], rest] + cells[target + 1:]
        yield from _leaves(n, masks, _refine(masks, split))


SMALL_GRAPH_CAP = 8


@lru_cache(maxsize=None)
def connected_graphs(n: int) -> tuple[Graph, ...]:
    """All connected graphs on ``n`` vertices up to isomorphism (``n <= 8``).

    Every connected graph has a non-cut vertex, so each one arises from a
    connected graph on ``n - 1`` vertices by adding a vertex with a nonempty
    neighborhood.
    """
    if n < 1:
        raise GraphInputError("n must be positive")
    if n > SMALL_GRAPH_CAP:
        raise GuardExceeded(f"exhaustive enumeration capped at n={SMALL_GRAPH_CAP}")
    if n == 1:
        return (Graph(1, []),)
    out = {}
    for base in connected_graphs(n - 1):
        for sub in range(1, 1 << (n - 1)):
            masks = list(base.masks) + [sub]
            for w in iter_bits(sub):
                masks[w] |= 1 << (n - 1)
            key = canonical_form(n, masks)
            if key not in out:
                out[key] = key
    graphs = []
    for key in sorted(out):
        edges = [(i, j) for i, row in enumerate(key) for j in iter_bits(row) if i < j]
        graphs.append(Graph(n, edges))
    return tuple(graphs)


def small_graph_corpus(max_n: int) -> list[Graph]:
    return [g for n in range(1, max_n + 1) for g in connected_graphs(n)]
