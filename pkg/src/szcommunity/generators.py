"""Synthetic graph families with planted community structure.

Randomized generators draw from ``numpy.random.Generator(PCG64(seed))`` in
the order documented on each function, so a seed pins the output across
platforms. Passing ``seed=None`` uses ``DEFAULT_SEED``, never entropy.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .exceptions import GraphInputError
from .graph import UndirectedGraph, build_graph

__all__ = ["DEFAULT_SEED", "make_rng", "barbell", "relaxed_caveman", "planted_partition"]

DEFAULT_SEED = 0


def make_rng(seed: int | None) -> np.random.Generator:
    seed = DEFAULT_SEED if seed is None else int(seed)
    if not 0 <= seed < 2**64:
        raise GraphInputError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def barbell(r: int, s: int) -> UndirectedGraph:
    """``r`` copies of ``K_s`` joined through one central vertex.

    Copy ``i`` occupies vertices ``i*s .. i*s+s-1``; the central vertex is
    ``r*s`` and is linked to the first vertex of every copy.
    """
    if r < 1 or s < 2:
        raise GraphInputError(f"barbell needs r >= 1 and s >= 2, got r={r}, s={s}")
    edges = []
    for i in range(r):
        base = i * s
        edges.extend((base + a, base + b) for a, b in combinations(range(s), 2))
    center = r * s
    edges.extend((i * s, center) for i in range(r))
    return build_graph(r * s + 1, edges)


def relaxed_caveman(l: int, k: int, p_rewire: float, seed: int | None = None) -> UndirectedGraph:
    """``l`` cliques of size ``k`` with every edge rewired with probability ``p_rewire``.

    Edges are visited cave by cave in lexicographic order. For each edge one
    uniform draw decides rewiring; a rewired edge then draws which endpoint
    stays (0 keeps the smaller) and a uniform new partner among all
    ``l*k`` vertices. Loops and duplicates created this way are dropped.
    """
    if l < 1 or k < 2:
        raise GraphInputError(f"relaxed caveman needs l >= 1 and k >= 2, got l={l}, k={k}")
    if not 0.0 <= p_rewire <= 1.0:
        raise GraphInputError(f"rewiring probability must lie in [0, 1], got {p_rewire}")
    rng = make_rng(seed)
    n = l * k
    edges = []
    for cave in range(l):
        base = cave * k
        for a, b in combinations(range(base, base + k), 2):
            if rng.random() < p_rewire:
                keep = a if rng.integers(2) == 0 else b
                edges.append((keep, int(rng.integers(n))))
            else:
                edges.append((a, b))
    return build_graph(n, edges)


def planted_partition(
    l: int, k: int, p_in: float, p_out: float, seed: int | None = None
) -> UndirectedGraph:
    """Planted ``l``-partition graph on ``l*k`` vertices.

    Vertex ``v`` belongs to block ``v // k``. Pairs ``(u, v)``, ``u < v``, are
    visited in lexicographic order with one uniform draw each; the pair is
    linked when the draw falls below ``p_in`` (same block) or ``p_out``.
    """
    if l < 1 or k < 1:
        raise GraphInputError(f"planted partition needs l >= 1 and k >= 1, got l={l}, k={k}")
    if not (0.0 <= p_out < p_in <= 1.0):
        raise GraphInputError(f"need 0 <= p_out < p_in <= 1, got p_in={p_in}, p_out={p_out}")
    rng = make_rng(seed)
    n = l * k
    edges = []
    for u, v in combinations(range(n), 2):
        p = p_in if u // k == v // k else p_out
        if rng.random() < p:
            edges.append((u, v))
    return build_graph(n, edges)
