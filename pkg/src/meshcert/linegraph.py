"""Line-graph recognition on small induced subgraphs (vertex links).

Both tests reconstruct a root graph through Krausz's clique partition: the
edges of a line graph split into cliques with every vertex in at most two of
them. Graphs are given as adjacency bitmasks restricted to a vertex subset.
"""

from __future__ import annotations

from typing import Optional

from .errors import GuardExceeded
from .graph import iter_bits


def bipartite_root(masks, allowed: int) -> Optional[list[tuple[int, int]]]:
    """Root graph ``H`` with ``L(H)`` equal to the induced subgraph, ``H`` bipartite.

    In the line graph of a bipartite graph every edge is of one of two kinds
    (sharing a left or a right endpoint). Triangles are single-kind and induced
    paths on three vertices mix both kinds, which is a parity system on edges.
    Returns ``H`` as one ``(left, right)`` pair per vertex (in increasing
    vertex order), or ``None`` if no such root exists.
    """
    verts = list(iter_bits(allowed))
    edge_id: dict[tuple[int, int], int] = {}
    for u in verts:
        for w in iter_bits(masks[u] & allowed):
            if u < w:
                edge_id[(u, w)] = len(edge_id)
    parent = list(range(len(edge_id)))
    parity = [0] * len(edge_id)

    def find(x):
        if parent[x] == x:
            return x, 0
        root, p = find(parent[x])
        parity[x] ^= p
        parent[x] = root
        return root, parity[x]

    def union(a, b, differ):
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            return (pa ^ pb) == differ
        parent[ra] = rb
        parity[ra] = pa ^ pb ^ differ
        return True

    def eid(a, b):
        return edge_id[(a, b) if a < b else (b, a)]

    for v in verts:
        nbrs = list(iter_bits(masks[v] & allowed))
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if not union(eid(v, a), eid(v, b), 0 if (masks[a] >> b) & 1 else 1):
                    return None

    # root vertices: connected classes of same-kind edges, per side
    kind = {e: find(i)[1] for e, i in edge_id.items()}
    side_of = [{}, {}]
    for side in (0, 1):
        label = {}
        for v in verts:
            if v in label:
                continue
            stack = [v]
            label[v] = v
            while stack:
                x = stack.pop()
                for y in iter_bits(masks[x] & allowed):
                    if y not in label and kind[(x, y) if x < y else (y, x)] == side:
                        label[y] = v
                        stack.append(y)
        side_of[side] = label
    names: dict[tuple[int, int], int] = {}
    root = []
    for v in verts:
        left = names.setdefault((0, side_of[0][v]), len(names))
        right = names.setdefault((1, side_of[1][v]), len(names))
        root.append((left, right))
    return root


def is_bipartite_line_graph(masks, allowed: int) -> bool:
    return bipartite_root(masks, allowed) is not None


def _two_clique_splits(masks, allowed: int, v: int):
    """All splits of the neighborhood of ``v`` (inside ``allowed``) into two cliques.

    Yields ``(A, B)`` bitmask pairs with ``A`` holding the lowest vertex; none
    if the complement of the neighborhood is not bipartite.
    """
    nb = masks[v] & allowed
    verts = list(iter_bits(nb))
    # components of the complement, 2-coloured
    color: dict[int, int] = {}
    comps: list[tuple[int, int]] = []
    for s in verts:
        if s in color:
            continue
        color[s] = 0
        parts = [1 << s, 0]
        stack = [s]
        while stack:
            x = stack.pop()
            non_nb = nb & ~masks[x] & ~(1 << x)
            for y in iter_bits(non_nb):
                if y not in color:
                    color[y] = color[x] ^ 1
                    parts[color[y]] |= 1 << y
                    stack.append(y)
                elif color[y] == color[x]:
                    return
        comps.append((parts[0], parts[1]))
    if not comps:
        yield 0, 0
        return
    first, rest = comps[0], comps[1:]
    for bits in range(1 << len(rest)):
        a, b = first
        for i, (p, q) in enumerate(rest):
            if (bits >> i) & 1:
                a, b = a | q, b | p
            else:
                a, b = a | p, b | q
        yield a, b


def _split_count(masks, allowed, v):
    return sum(1 for _ in _two_clique_splits(masks, allowed, v))


def is_line_graph(masks, allowed: int, budget: int = 200_000) -> bool:
    """Krausz test: does the induced subgraph on ``allowed`` have a root graph?

    Choosing the clique split at one vertex forces the split at each of its
    neighbors, so a component is settled by trying the splits of a single
    vertex. ``budget`` caps the total number of propagation steps.

    Raises
    ------
    GuardExceeded
        When the search needs more than ``budget`` steps.
    """
    remaining = allowed
    work = 0
    while remaining:
        comp = _component(masks, allowed, remaining)
        remaining &= ~comp
        verts = list(iter_bits(comp))
        if len(verts) == 1:
            continue
        counts = {}
        for v in verts:
            c = 0
            for _ in _two_clique_splits(masks, allowed, v):
                c += 1
                if c > 64:
                    break
            if c == 0:
                return False
            counts[v] = c
        start = min(verts, key=lambda v: counts[v])
        ok = False
        for a, b in _two_clique_splits(masks, allowed, start):
            result, steps = _propagate(masks, allowed, start, a, b, budget - work)
            work += steps
            if result:
                ok = True
                break
            if work >= budget:
                raise GuardExceeded(f"line-graph search exceeded {budget} steps")
        if not ok:
            return False
    return True


def _component(masks, allowed, pool):
    start = (pool & -pool).bit_length() - 1
    seen = 1 << start
    stack = [start]
    while stack:
        x = stack.pop()
        for y in iter_bits(masks[x] & allowed & ~seen):
            seen |= 1 << y
            stack.append(y)
    return seen


def _is_clique(masks, s: int) -> bool:
    for x in iter_bits(s):
        if (s & ~(1 << x)) & ~masks[x]:
            return False
    return True


def _propagate(masks, allowed, start, a, b, limit):
    split = {start: (a, b)}
    stack = [start]
    steps = 0
    while stack:
        v = stack.pop()
        for side in split[v]:
            for u in iter_bits(side):
                steps += 1
                if steps > limit:
                    return False, steps
                need = (side & ~(1 << u)) | (1 << v)
                nb_u = masks[u] & allowed
                other = nb_u & ~need
                if need & ~nb_u or not _is_clique(masks, other):
                    return False, steps
                if u in split:
                    if need not in split[u]:
                        return False, steps
                    continue
                split[u] = (need, other)
                stack.append(u)
    return True, steps
