"""Fixed small patterns and induced-subgraph search.

Patterns are stored as plain ``(n, edges)`` pairs rather than :class:`Graph`
objects because some of them (the 1-octahedron) are disconnected.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Optional

from .graph import Graph, iter_bits


class PatternId(str, Enum):
    C4 = "C4"
    C5 = "C5"
    K3 = "K3"
    K23 = "K2,3"
    K4_MINUS = "K4-"
    K33_MINUS = "K3,3-"
    W4 = "W4"
    W4_MINUS = "W4-"
    W5 = "W5"
    WK = "Wk"
    W5_HAT = "W5^"
    OCTAHEDRON = "octahedron"


_PARAMETRIC = {PatternId.WK, PatternId.OCTAHEDRON}


def _cycle(k, offset=0):
    return [(offset + i, offset + (i + 1) % k) for i in range(k)]


def _wheel(k):
    # center 0, rim 1..k in cyclic order
    return [(0, i) for i in range(1, k + 1)] + [(1 + i, 1 + (i + 1) % k) for i in range(k)]


@lru_cache(maxsize=None)
def pattern_edges(p: PatternId, k: Optional[int] = None) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Canonical ``(vertex count, edge list)`` of a pattern."""
    p = PatternId(p)
    if (p in _PARAMETRIC) != (k is not None):
        raise ValueError(f"pattern {p.value} {'needs' if p in _PARAMETRIC else 'takes no'} parameter k")
    if p is PatternId.C4:
        return 4, tuple(_cycle(4))
    if p is PatternId.C5:
        return 5, tuple(_cycle(5))
    if p is PatternId.K3:
        return 3, tuple(_cycle(3))
    if p is PatternId.K23:
        return 5, tuple((a, b) for a in (0, 1) for b in (2, 3, 4))
    if p is PatternId.K4_MINUS:
        return 4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3))
    if p is PatternId.K33_MINUS:
        return 6, tuple((a, b) for a in (0, 1, 2) for b in (3, 4, 5) if (a, b) != (2, 5))
    if p is PatternId.W4:
        return 5, tuple(_wheel(4))
    if p is PatternId.W4_MINUS:
        # the 4-wheel with one spoke removed
        return 5, tuple(e for e in _wheel(4) if e != (0, 4))
    if p is PatternId.W5:
        return 6, tuple(_wheel(5))
    if p is PatternId.W5_HAT:
        # 5-wheel plus a triangle glued along the rim edge 1-2
        return 7, tuple(_wheel(5)) + ((6, 1), (6, 2))
    if p is PatternId.WK:
        if k < 3:
            raise ValueError("wheels need k >= 3")
        return k + 1, tuple(_wheel(k))
    if p is PatternId.OCTAHEDRON:
        if k < 1:
            raise ValueError("octahedron needs k >= 1")
        return 2 * k, tuple(
            (a, b) for a in range(2 * k) for b in range(a + 1, 2 * k) if a // 2 != b // 2
        )
    raise ValueError(p)


def pattern_graph(p: PatternId, k: Optional[int] = None) -> Graph:
    n, edges = pattern_edges(p, k)
    return Graph(n, edges)


def _wheel_size(p: PatternId, k: Optional[int]) -> Optional[int]:
    if p is PatternId.W4:
        return 4
    if p is PatternId.W5:
        return 5
    if p is PatternId.WK:
        return k
    return None


def contains_induced(
    g: Graph,
    p: PatternId,
    anchored_at: Optional[int] = None,
    k: Optional[int] = None,
) -> Optional[dict[int, int]]:
    """Find an induced copy of pattern ``p`` in ``g``.

    Returns a map from pattern vertices to graph vertices, or ``None``. If
    ``anchored_at`` is given, the copy must contain that vertex. Wheels are
    found as induced cycles inside the neighborhood of their center.
    """
    p = PatternId(p)
    n_p, edges = pattern_edges(p, k)
    size = _wheel_size(p, k)
    if size is not None:
        return _find_wheel(g, size, anchored_at)
    pmasks = [0] * n_p
    for a, b in edges:
        pmasks[a] |= 1 << b
        pmasks[b] |= 1 << a
    return induced_embedding(g.masks, g.n, pmasks, anchored_at)


def induced_embedding(masks, n, pmasks, anchored_at=None, allowed=None):
    """Backtracking search for an induced embedding of a small pattern.

    ``masks``/``pmasks`` are adjacency bitmasks of host and pattern;
    ``allowed`` restricts the host vertices that may be used.
    """
    n_p = len(pmasks)
    if n_p > n:
        return None
    full = (1 << n) - 1 if allowed is None else allowed
    pdeg = [bin(m).count("1") for m in pmasks]
    hdeg = [bin(masks[v] & full).count("1") for v in range(n)]
    starts = range(n_p) if anchored_at is not None else [max(range(n_p), key=lambda i: pdeg[i])]
    for first in starts:
        order = _pattern_order(pmasks, first)
        # for each position, an earlier pattern neighbor to draw candidates from
        parent = []
        for i, a in enumerate(order):
            parent.append(next((j for j in range(i) if (pmasks[a] >> order[j]) & 1), None))
        image = [-1] * n_p
        if anchored_at is not None:
            if not (full >> anchored_at) & 1 or hdeg[anchored_at] < pdeg[first]:
                continue
            first_candidates = [anchored_at]
        else:
            first_candidates = [v for v in iter_bits(full) if hdeg[v] >= pdeg[first]]
        found = _extend(masks, full, pmasks, pdeg, hdeg, order, parent, image, 0, 0, first_candidates)
        if found:
            return {a: image[a] for a in range(n_p)}
    return None


def _pattern_order(pmasks, first):
    order = [first]
    seen = 1 << first
    i = 0
    while len(order) < len(pmasks):
        if i < len(order):
            for b in iter_bits(pmasks[order[i]] & ~seen):
                order.append(b)
                seen |= 1 << b
            i += 1
        else:
            b = next(x for x in range(len(pmasks)) if not (seen >> x) & 1)
            order.append(b)
            seen |= 1 << b
    return order


def _extend(masks, full, pmasks, pdeg, hdeg, order, parent, image, pos, used, first_candidates):
    if pos == len(order):
        return True
    a = order[pos]
    if pos == 0:
        candidates = first_candidates
    elif parent[pos] is not None:
        candidates = iter_bits(masks[image[order[parent[pos]]]] & full & ~used)
    else:
        candidates = iter_bits(full & ~used)
    for v in candidates:
        if (used >> v) & 1 or hdeg[v] < pdeg[a]:
            continue
        ok = True
        for j in range(pos):
            b = order[j]
            if ((masks[v] >> image[b]) & 1) != ((pmasks[a] >> b) & 1):
                ok = False
                break
        if not ok:
            continue
        image[a] = v
        if _extend(masks, full, pmasks, pdeg, hdeg, order, parent, image, pos + 1, used | (1 << v), None):
            return True
        image[a] = -1
    return False


def find_induced_cycle(masks, allowed: int, k: int, through: Optional[int] = None) -> Optional[list[int]]:
    """An induced cycle of length ``k`` using only vertices in ``allowed``.

    If ``through`` is given the cycle must contain it. Returned in cyclic order.
    """
    if k < 3:
        raise ValueError("cycles have length >= 3")
    if through is not None:
        if not (allowed >> through) & 1:
            return None
        starts = [through]
    else:
        starts = list(iter_bits(allowed))
    for s in starts:
        # without a forced vertex, s is the smallest vertex of the cycle
        pool = allowed if through is not None else allowed & ~((1 << (s + 1)) - 1)
        path = [s]
        if _grow_cycle(masks, pool, k, path):
            return path
    return None


def _grow_cycle(masks, pool, k, path):
    last = path[-1]
    s = path[0]
    if len(path) == k:
        return True
    used = 0
    interior = 0
    for i, v in enumerate(path):
        used |= 1 << v
        if 0 < i < len(path) - 1:
            interior |= 1 << v
    closing = len(path) == k - 1
    for w in iter_bits(masks[last] & pool & ~used):
        if masks[w] & interior:
            continue
        adj_s = (masks[w] >> s) & 1
        if len(path) >= 2 and adj_s != closing:
            continue
        if closing and not adj_s:
            continue
        path.append(w)
        if _grow_cycle(masks, pool, k, path):
            return True
        path.pop()
    return False


def _find_wheel(g: Graph, k: int, anchored_at: Optional[int]):
    masks = g.masks
    if anchored_at is None:
        centers = range(g.n)
    else:
        centers = [anchored_at, *g.adj[anchored_at]]
    for c in centers:
        if g.degree(c) < k:
            continue
        through = None if anchored_at is None or c == anchored_at else anchored_at
        cyc = find_induced_cycle(masks, masks[c], k, through)
        if cyc is not None:
            return {0: c, **{i + 1: v for i, v in enumerate(cyc)}}
    return None


def has_induced_cycle_at_least(masks, allowed: int, k_min: int, k_max: Optional[int] = None) -> Optional[list[int]]:
    size = bin(allowed).count("1")
    top = size if k_max is None else min(size, k_max)
    for k in range(k_min, top + 1):
        cyc = find_induced_cycle(masks, allowed, k)
        if cyc is not None:
            return cyc
    return None


def induced_squares(g: Graph, through: Optional[int] = None) -> list[tuple[int, int, int, int]]:
    """Induced 4-cycles ``(a, b, c, d)`` in cyclic order, each listed once."""
    out = []
    masks = g.masks
    seen = set()
    vertices = range(g.n) if through is None else [through]
    for a in vertices:
        for c in range(g.n):
            if c == a or (masks[a] >> c) & 1:
                continue
            common = list(iter_bits(masks[a] & masks[c]))
            for i, b in enumerate(common):
                for d in common[i + 1:]:
                    if (masks[b] >> d) & 1:
                        continue
                    key = frozenset(((a, c), (c, a), (b, d), (d, b)))
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append((a, b, c, d))
    return out


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for u in range(g.n):
        for v in g.adj[u]:
            if v <= u:
                continue
            for w in iter_bits(g.masks[u] & g.masks[v]):
                if w > v:
                    out.append((u, v, w))
    return out


def iter_induced_cycles(masks, allowed: int, k: int, through: Optional[int] = None):
    """Every induced ``k``-cycle on ``allowed``, once per orientation.

    Cycles start at their smallest vertex, or at ``through`` when given.
    """
    if through is not None:
        if (allowed >> through) & 1:
            yield from _cycles_from(masks, allowed, k, [through])
        return
    for s in iter_bits(allowed):
        pool = allowed & ~((1 << (s + 1)) - 1)
        yield from _cycles_from(masks, pool, k, [s])


def _cycles_from(masks, pool, k, path):
    last, s = path[-1], path[0]
    if len(path) == k:
        yield list(path)
        return
    used = interior = 0
    for i, v in enumerate(path):
        used |= 1 << v
        if 0 < i < len(path) - 1:
            interior |= 1 << v
    closing = len(path) == k - 1
    for w in iter_bits(masks[last] & pool & ~used):
        if masks[w] & interior:
            continue
        adj_s = bool((masks[w] >> s) & 1)
        if len(path) >= 2 and adj_s != closing:
            continue
        if closing and not adj_s:
            continue
        path.append(w)
        yield from _cycles_from(masks, pool, k, path)
        path.pop()
