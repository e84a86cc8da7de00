"""Simple connected graphs, metric primitives and locality-restricted views.

Vertices are the integers ``0..n-1``. A :class:`Graph` is immutable and
carries its all-pairs distance matrix, computed once at construction.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraphError, GraphInputError


class Graph:
    """An immutable finite simple connected undirected graph.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : iterable of (int, int)
        Edge list. Duplicates (in either orientation) are merged.

    Raises
    ------
    GraphInputError
        On loops or out-of-range endpoints.
    DisconnectedGraphError
        If the resulting graph is not connected.
    """

    __slots__ = ("n", "adj", "masks", "_dist", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise GraphInputError(f"a graph needs at least one vertex, got n={n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphInputError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        adj = tuple(tuple(sorted(s)) for s in nbrs)
        masks = tuple(sum(1 << w for w in s) for s in nbrs)
        dist = _bfs_all(n, adj)
        if (dist < 0).any():
            raise DisconnectedGraphError(
                f"graph on {n} vertices is disconnected; only connected graphs are supported"
            )
        dist.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "masks", masks)
        object.__setattr__(self, "_dist", dist)
        object.__setattr__(
            self, "_edges", tuple((u, v) for u in range(n) for v in adj[u] if u < v)
        )

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @property
    def dist(self) -> np.ndarray:
        """Read-only ``n x n`` hop-count matrix."""
        return self._dist

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (self.masks[u] >> v) & 1 == 1

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def diameter(self) -> int:
        return int(self._dist.max())

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the isomorphic copy in which vertex ``v`` is renamed ``perm[v]``."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self._edges))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, with ``vertices[i]`` becoming local vertex ``i``.

        The induced subgraph must be connected.
        """
        index = {v: i for i, v in enumerate(vertices)}
        edges = [
            (index[u], index[w])
            for u in vertices
            for w in self.adj[u]
            if w in index and index[u] < index[w]
        ]
        return Graph(len(vertices), edges)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _bfs_all(n: int, adj: Sequence[Sequence[int]]) -> np.ndarray:
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            dx = row[x] + 1
            for y in adj[x]:
                if row[y] < 0:
                    row[y] = dx
                    queue.append(y)
    return dist


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    return Graph(n, edges)


def all_pairs_distances(g: Graph) -> np.ndarray:
    return g.dist


def ball(g: Graph, v: int, r: int) -> frozenset[int]:
    """Vertices at distance at most ``r`` from ``v``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    return frozenset(np.flatnonzero(g.dist[v] <= r).tolist())


def truncated_bfs_ball(g: Graph, v: int, r: int) -> frozenset[int]:
    """Same as :func:`ball`, by a traversal that stops at depth ``r``."""
    seen = {v: 0}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if seen[x] == r:
            continue
        for y in g.adj[x]:
            if y not in seen:
                seen[y] = seen[x] + 1
                queue.append(y)
    return frozenset(seen)


def interval(g: Graph, u: int, v: int) -> frozenset[int]:
    d = g.dist
    return frozenset(np.flatnonzero(d[u] + d[v] == d[u, v]).tolist())


def interval_tensor(g: Graph) -> np.ndarray:
    """Boolean array ``I[u, v, x]``, true iff ``x`` lies in ``I(u, v)``."""
    d = g.dist
    return d[:, None, :] + d[None, :, :] == d[:, :, None]


def is_convex_set(g: Graph, S: Iterable[int]) -> bool:
    members = np.zeros(g.n, dtype=bool)
    members[list(S)] = True
    if members.all():
        return True
    d = g.dist
    idx = np.flatnonzero(members)
    outside = np.flatnonzero(~members)
    # x outside S with d(u,x) + d(x,v) = d(u,v) for some u, v in S
    sub = d[np.ix_(idx, outside)]
    total = sub[:, None, :] + sub[None, :, :]
    return not (total == d[np.ix_(idx, idx)][:, :, None]).any()


def common_neighbors(g: Graph, u: int, v: int) -> list[int]:
    return _bits(g.masks[u] & g.masks[v])


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class LabeledView:
    """What a verifier sees at one vertex: the labeled ball of a given radius.

    ``subgraph`` is the subgraph induced by the ball, reindexed so that the
    center is local vertex 0 and the other local indices carry no information
    about global identity. ``labels[i]`` is the certificate of local vertex i.
    """

    center: int
    subgraph: Graph
    labels: tuple
    radius: int

    def depth(self, i: int) -> int:
        """Distance from the center to local vertex ``i`` (exact inside the ball)."""
        return int(self.subgraph.dist[self.center, i])

    def restrict(self, r: int) -> "LabeledView":
        """The sub-view of radius ``r`` (``r`` at most the current radius)."""
        if r > self.radius:
            raise ValueError(f"cannot grow a radius-{self.radius} view to {r}")
        if r == self.radius:
            return self
        keep = [i for i in range(self.subgraph.n) if self.subgraph.dist[self.center, i] <= r]
        keep.remove(self.center)
        keep.insert(0, self.center)
        return LabeledView(0, self.subgraph.induced(keep), tuple(self.labels[i] for i in keep), r)


@dataclass(frozen=True)
class ViewFrame:
    """Unlabeled part of a view plus the hidden local-to-global map.

    The engine keeps the map to attach labels; rules only ever receive the
    :class:`LabeledView` built by :meth:`attach`.
    """

    subgraph: Graph
    to_global: tuple[int, ...]
    radius: int

    def attach(self, labels: Sequence) -> LabeledView:
        return LabeledView(0, self.subgraph, tuple(labels[v] for v in self.to_global), self.radius)


def view_frame(g: Graph, v: int, r: int, shuffle_seed: int = 0) -> ViewFrame:
    others = sorted(ball(g, v, r) - {v})
    random.Random(shuffle_seed * 1_000_003 + v).shuffle(others)
    order = (v, *others)
    return ViewFrame(g.induced(order), order, r)


def extract_view(g: Graph, labels: Sequence, v: int, r: int, shuffle_seed: int = 0) -> LabeledView:
    """Anonymized labeled ``r``-ball around ``v`` (center at local index 0)."""
    if len(labels) != g.n:
        raise GraphInputError(f"expected {g.n} labels, got {len(labels)}")
    return view_frame(g, v, r, shuffle_seed).attach(labels)


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``; '#' lines and blanks ignored."""
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise GraphInputError("empty edge list")
    try:
        header = [int(t) for t in rows[0]]
        if len(header) != 2:
            raise ValueError
        n, m = header
        edges = []
        for row in rows[1:]:
            if len(row) != 2:
                raise ValueError
            edges.append((int(row[0]), int(row[1])))
    except ValueError:
        raise GraphInputError("malformed edge list: expected integer pairs") from None
    if len(edges) != m:
        raise GraphInputError(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"
