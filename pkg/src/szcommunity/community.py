"""Community construction from a limiting edge-probability vector.

Vertices are processed in descending degree order. Each still-unassigned
vertex seeds a community: its neighborhood is grown by a majority-overlap
rule, members are kept when their path weight from the seed falls below a
threshold ``q``, and an optional refinement drops members that have at
most half of their edges inside the community.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import GraphInputError
from .graph import UndirectedGraph, bfs_tree, shortest_path_edges
from .walk import DEFAULT_EPSILON, WalkOutcome, run_walk

__all__ = [
    "DetectionConfig",
    "CommunityStep",
    "CommunityResult",
    "path_weight",
    "path_weights_from",
    "expand_neighborhood",
    "build_community",
    "refine_community",
    "degree_order",
    "detect_communities",
    "find_communities",
    "coverage",
    "intra_edge_count",
]


@dataclass(frozen=True)
class DetectionConfig:
    """Parameters of the detection pipeline.

    ``q=None`` means ``1/m`` for the graph at hand.
    """

    q: float | None = None
    refine: bool = True
    epsilon: float = DEFAULT_EPSILON
    max_steps: int | None = None
    distance: str = "directed"
    initial: str = "max-degree"

    def __post_init__(self):
        if self.q is not None and not self.q >= 0:
            raise GraphInputError(f"q must be non-negative, got {self.q}")

    def threshold(self, g: UndirectedGraph) -> float:
        if self.q is not None:
            return float(self.q)
        return 1.0 / g.m if g.m else 0.0


@dataclass(frozen=True)
class CommunityStep:
    """Intermediate sets for one seed, kept for diagnostics and plots."""

    seed: int
    neighborhood: frozenset[int]
    built: frozenset[int]
    final: frozenset[int]
    weights: dict[int, float]


@dataclass(frozen=True)
class CommunityResult:
    communities: tuple[tuple[int, ...], ...]
    intra_edge_count: int
    coverage: float
    q: float
    order: tuple[int, ...]
    steps: tuple[CommunityStep, ...] = field(repr=False)
    walk: WalkOutcome | None = field(default=None, repr=False)

    @property
    def sizes(self) -> list[int]:
        return sorted((len(c) for c in self.communities), reverse=True)

    def membership(self, n: int) -> np.ndarray:
        """Community id of every vertex (ids follow creation order)."""
        out = np.full(n, -1, dtype=np.int64)
        for i, c in enumerate(self.communities):
            out[list(c)] = i
        return out


def path_weight(g: UndirectedGraph, pi, u: int, v: int) -> float:
    """Product of ``pi`` along the canonical shortest ``u``-``v`` path, over ``deg(v)``.

    Not symmetric: the degree of the second vertex is used.
    """
    if u == v:
        raise GraphInputError("path weight needs two distinct vertices")
    path = shortest_path_edges(g, u, v)
    return math.prod(float(pi[k]) for k in path) / g.degree(v)


def path_weights_from(g: UndirectedGraph, pi, u: int) -> np.ndarray:
    """Path weights from ``u`` to every vertex in one breadth-first pass.

    Unreachable vertices and ``u`` itself get ``nan``. Agrees with
    :func:`path_weight` bit for bit, since both multiply along the same
    tree path starting at ``u``.
    """
    dist, parent = bfs_tree(g, u)
    prod = np.full(g.n, np.nan)
    prod[u] = 1.0
    for x in np.argsort(dist, kind="stable"):
        if dist[x] <= 0:
            continue
        p = parent[x]
        prod[x] = prod[p] * float(pi[g.edge_id(int(p), int(x))])
    with np.errstate(divide="ignore", invalid="ignore"):
        out = prod / g.degrees
    out[u] = np.nan
    return out


def expand_neighborhood(g: UndirectedGraph, seed: int, available: Iterable[int]) -> set[int]:
    """Grow the seed's neighborhood within ``available``.

    Starts from the seed's neighbors and sweeps the remaining candidates in
    ascending order, adding ``v`` whenever at least half of ``N(v)`` is
    already in the neighborhood, until a sweep adds nothing.
    """
    available = set(available)
    if seed not in available:
        raise GraphInputError(f"seed {seed} is not among the available vertices")
    nbd = set(g.adjacency[seed]) & available
    candidates = sorted(available - nbd - {seed})
    grew = True
    while grew and candidates:
        grew = False
        rest = []
        for v in candidates:
            nv = g.neighbor_sets[v]
            if 2 * len(nv & nbd) >= len(nv):
                nbd.add(v)
                grew = True
            else:
                rest.append(v)
        candidates = rest
    return nbd


def build_community(g: UndirectedGraph, pi, seed: int, nbd: Iterable[int], q: float) -> set[int]:
    """The seed plus every neighborhood member with path weight below ``q``."""
    nbd = set(nbd)
    if seed in nbd:
        raise GraphInputError("seed must not be part of its own neighborhood")
    weights = path_weights_from(g, pi, seed)
    return {seed} | {v for v in nbd if weights[v] < q}


def refine_community(g: UndirectedGraph, members: Iterable[int], seed: int | None = None) -> set[int]:
    """Drop members with at most half of their edges inside the community.

    All tests use the community as given; removals happen together. The
    ``seed`` vertex, if given, always stays.
    """
    members = set(members)
    if not members:
        raise GraphInputError("cannot refine an empty community")
    return {
        v
        for v in members
        if v == seed or 2 * len(g.neighbor_sets[v] & members) > g.degree(v)
    }


def degree_order(g: UndirectedGraph) -> list[int]:
    """Vertices by descending degree, ties by ascending index."""
    return sorted(range(g.n), key=lambda v: (-g.degree(v), v))


def detect_communities(g: UndirectedGraph, pi, config: DetectionConfig | None = None) -> CommunityResult:
    """Partition ``g`` given its limiting edge distribution ``pi``.

    Disconnected graphs are fine: a vertex outside the seed's component has
    no path weight and never joins the seed's community.
    """
    config = config or DetectionConfig()
    pi = np.asarray(pi, dtype=np.float64)
    if pi.shape != (g.m,):
        raise GraphInputError(f"expected {g.m} edge probabilities, got shape {pi.shape}")
    q = config.threshold(g)
    order = degree_order(g)
    pool = list(order)
    remaining = set(pool)
    communities = []
    steps = []
    while pool:
        seed = pool[0]
        nbd = expand_neighborhood(g, seed, remaining)
        weights = path_weights_from(g, pi, seed)
        built = {seed} | {v for v in nbd if weights[v] < q}
        final = refine_community(g, built, seed) if config.refine else built
        communities.append(tuple(sorted(final)))
        steps.append(
            CommunityStep(
                seed,
                frozenset(nbd),
                frozenset(built),
                frozenset(final),
                {v: float(weights[v]) for v in sorted(nbd)},
            )
        )
        remaining -= final
        pool = [v for v in pool if v in remaining]
    intra = intra_edge_count(g, communities)
    return CommunityResult(
        communities=tuple(communities),
        intra_edge_count=intra,
        coverage=intra / g.m if g.m else 0.0,
        q=q,
        order=tuple(order),
        steps=tuple(steps),
    )


def find_communities(g: UndirectedGraph, config: DetectionConfig | None = None, *, backend=None) -> CommunityResult:
    """Full pipeline: walk, limiting distribution, then community construction."""
    config = config or DetectionConfig()
    outcome = run_walk(
        g,
        config.epsilon,
        config.max_steps,
        initial=config.initial,
        distance=config.distance,
        backend=backend,
    )
    result = detect_communities(g, outcome.pi, config)
    return CommunityResult(
        communities=result.communities,
        intra_edge_count=result.intra_edge_count,
        coverage=result.coverage,
        q=result.q,
        order=result.order,
        steps=result.steps,
        walk=outcome,
    )


def _membership(g: UndirectedGraph, communities: Sequence[Iterable[int]]) -> np.ndarray:
    owner = np.full(g.n, -1, dtype=np.int64)
    for i, c in enumerate(communities):
        for v in c:
            if not 0 <= v < g.n:
                raise GraphInputError(f"vertex {v} outside 0..{g.n - 1}")
            if owner[v] >= 0:
                raise GraphInputError(f"vertex {v} appears in more than one community")
            owner[v] = i
    missing = np.flatnonzero(owner < 0)
    if missing.size:
        raise GraphInputError(f"vertices {missing[:10].tolist()} are in no community")
    return owner


def intra_edge_count(g: UndirectedGraph, communities: Sequence[Iterable[int]]) -> int:
    owner = _membership(g, communities)
    return sum(1 for u, v in g.edges if owner[u] == owner[v])


def coverage(g: UndirectedGraph, communities: Sequence[Iterable[int]]) -> float:
    """Fraction of edges with both ends in the same community.

    Raises ``GraphInputError`` unless ``communities`` partitions the vertex
    set. A graph without edges has coverage 0.
    """
    intra = intra_edge_count(g, communities)
    return intra / g.m if g.m else 0.0
