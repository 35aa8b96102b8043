"""Simple undirected graphs and the doubled directed-edge space.

Vertices are the integers ``0..n-1``. Edges keep their insertion order, which
fixes the indexing of every per-edge vector in the package: undirected edge
``k`` is ``edges[k]``, and in the directed space index ``k`` is the
orientation ``u -> v`` (``u < v``) while ``k + m`` is ``v -> u``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .exceptions import GraphInputError, NoPathError

__all__ = [
    "UndirectedGraph",
    "DirectedEdgeSpace",
    "build_graph",
    "bfs_tree",
    "shortest_path_edges",
    "connected_components",
    "is_connected",
    "largest_connected_component",
    "induced_degree",
    "directed_edge_space",
]


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph.

    Use :func:`build_graph` to construct one; it normalizes and deduplicates
    the edge list and builds the sorted adjacency.

    Attributes
    ----------
    n : int
        Number of vertices.
    edges : tuple of (int, int)
        Edge list, each pair stored with ``u < v``.
    adjacency : tuple of tuple of int
        Sorted neighbor list for every vertex.
    labels : tuple of str, optional
        Original vertex labels (file input only). Not part of equality.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)
        d.setflags(write=False)
        return d

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        """Map ``(u, v)`` with ``u < v`` to the undirected edge index."""
        return {e: k for k, e in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int:
        """Index of the undirected edge joining ``u`` and ``v``."""
        key = (u, v) if u < v else (v, u)
        try:
            return self.edge_index[key]
        except KeyError:
            raise GraphInputError(f"({u}, {v}) is not an edge") from None

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, m={self.m})"


def build_graph(
    n: int,
    raw_edges: Iterable[Sequence[int]],
    labels: Sequence[str] | None = None,
) -> UndirectedGraph:
    """Build a simple graph on ``n`` vertices.

    Loops are dropped and repeated pairs (in either orientation) collapse to
    their first occurrence.

    Raises
    ------
    GraphInputError
        If an endpoint lies outside ``0..n-1``.
    """
    n = int(n)
    if n < 0:
        raise GraphInputError(f"vertex count must be non-negative, got {n}")
    if labels is not None and len(labels) != n:
        raise GraphInputError(f"expected {n} labels, got {len(labels)}")
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for pair in raw_edges:
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphInputError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        edges.append(key)
        adjacency[u].append(v)
        adjacency[v].append(u)
    return UndirectedGraph(
        n=n,
        edges=tuple(edges),
        adjacency=tuple(tuple(sorted(a)) for a in adjacency),
        labels=tuple(str(s) for s in labels) if labels is not None else None,
    )


def bfs_tree(g: UndirectedGraph, source: int) -> tuple[np.ndarray, np.ndarray]:
    """Breadth-first distances and shortest-path parents from ``source``.

    Among all neighbors one step closer to ``source``, a vertex's parent is
    the one with the smallest index. Unreachable vertices get distance and
    parent ``-1``; the source is its own parent.
    """
    _check_vertex(g, source)
    dist = np.full(g.n, -1, dtype=np.int64)
    parent = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    parent[source] = source
    queue = deque([source])
    adjacency = g.adjacency
    while queue:
        x = queue.popleft()
        dx = dist[x] + 1
        for y in adjacency[x]:
            if dist[y] < 0:
                dist[y] = dx
                parent[y] = x
                queue.append(y)
            elif dist[y] == dx and x < parent[y]:
                parent[y] = x
    return dist, parent


def shortest_path_edges(g: UndirectedGraph, u: int, v: int) -> list[int]:
    """Edge indices of the canonical shortest path from ``u`` to ``v``.

    The path is read off :func:`bfs_tree` rooted at ``u``, so ties between
    equally short paths go to the lowest-index predecessor at every hop.
    """
    _check_vertex(g, v)
    dist, parent = bfs_tree(g, u)
    return _path_from_tree(g, parent, dist, u, v)


def _path_from_tree(g, parent, dist, u, v) -> list[int]:
    if dist[v] < 0:
        raise NoPathError(u, v)
    path = []
    x = v
    while x != u:
        p = int(parent[x])
        path.append(g.edge_id(p, x))
        x = p
    path.reverse()
    return path


def connected_components(g: UndirectedGraph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by their smallest vertex."""
    label = np.full(g.n, -1, dtype=np.int64)
    components = []
    for s in range(g.n):
        if label[s] >= 0:
            continue
        label[s] = len(components)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adjacency[x]:
                if label[y] < 0:
                    label[y] = label[s]
                    comp.append(y)
                    queue.append(y)
        components.append(sorted(comp))
    return components


def is_connected(g: UndirectedGraph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


def largest_connected_component(g: UndirectedGraph) -> tuple[UndirectedGraph, dict[int, int]]:
    """Induced subgraph on the largest component, relabeled ``0..n'-1``.

    Relative vertex order and edge order are preserved. Among equally large
    components the one holding the smallest vertex wins.

    Returns
    -------
    sub : UndirectedGraph
    mapping : dict
        Old vertex index -> new vertex index, for the kept vertices only.
    """
    if g.n == 0:
        raise GraphInputError("empty graph has no components")
    components = connected_components(g)
    best = max(components, key=len)  # max() keeps the first maximum
    mapping = {old: new for new, old in enumerate(best)}
    edges = [(mapping[u], mapping[v]) for u, v in g.edges if u in mapping]
    labels = [g.labels[old] for old in best] if g.labels is not None else None
    return build_graph(len(best), edges, labels), mapping


def induced_degree(g: UndirectedGraph, members: Iterable[int], v: int) -> int:
    """Degree of ``v`` inside the subgraph induced by ``members``."""
    members = members if isinstance(members, (set, frozenset)) else set(members)
    if v not in members:
        raise GraphInputError(f"vertex {v} is not in the vertex set")
    return len(g.neighbor_sets[v] & members)


@dataclass(frozen=True)
class DirectedEdgeSpace:
    """Basis of the walk: both orientations of every undirected edge.

    Attributes
    ----------
    m : int
        Number of undirected edges; the space has ``2 * m`` elements.
    origin, terminal : ndarray of int
        Tail and head vertex of each directed edge.
    inverse : ndarray of int
        Index of the reversed edge (``k <-> k + m``).
    undirected_of : ndarray of int
        Undirected edge index of each directed edge (``k mod m``).
    """

    m: int
    n: int
    origin: np.ndarray
    terminal: np.ndarray
    inverse: np.ndarray
    undirected_of: np.ndarray

    @property
    def size(self) -> int:
        return 2 * self.m

    def out_edges(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.origin == v)

    def in_edges(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.terminal == v)


def directed_edge_space(g: UndirectedGraph) -> DirectedEdgeSpace:
    if g.m == 0:
        raise GraphInputError("graph has no edges")
    e = np.asarray(g.edges, dtype=np.int64)
    m = g.m
    origin = np.concatenate([e[:, 0], e[:, 1]])
    terminal = np.concatenate([e[:, 1], e[:, 0]])
    inverse = np.concatenate([np.arange(m, 2 * m), np.arange(m)])
    undirected_of = np.concatenate([np.arange(m), np.arange(m)])
    for arr in (origin, terminal, inverse, undirected_of):
        arr.setflags(write=False)
    return DirectedEdgeSpace(m, g.n, origin, terminal, inverse, undirected_of)


def _check_vertex(g: UndirectedGraph, v: int) -> None:
    if not 0 <= v < g.n:
        raise GraphInputError(f"vertex {v} outside 0..{g.n - 1}")
