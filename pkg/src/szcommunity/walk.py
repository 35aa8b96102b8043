"""Szegedy quantum walk on the directed-edge space of a graph.

The walk operator acts on amplitudes indexed by directed edges. Its entry
for the pair ``(e, f)`` is nonzero only when ``f`` ends where ``e`` starts:

    u[e, f] = 2 * sqrt(p(e) * p(inv(f))) - [e == inv(f)]

with the equiprobable transition rule ``p(e) = 1 / deg(origin(e))``.

The walk itself never settles, so the package works with the running
(Cesaro) average of the per-step edge probabilities, iterated until two
consecutive averages are closer than ``epsilon`` in Euclidean norm.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _walk_kernel_py
from .exceptions import ConvergenceError, GraphInputError
from .graph import DirectedEdgeSpace, UndirectedGraph, directed_edge_space

try:
    from . import _walk_kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = [
    "BACKENDS",
    "DEFAULT_EPSILON",
    "SzegedyOperator",
    "WalkOutcome",
    "available_backends",
    "build_szegedy_operator",
    "default_backend",
    "default_max_steps",
    "edge_probabilities",
    "initial_state_max_degree",
    "initial_state_uniform",
    "limiting_distribution",
    "run_walk",
    "step",
    "transition_probabilities",
]

DEFAULT_EPSILON = 1e-4
MAX_STEPS_CAP = 1_000_000
UNITARITY_TOL = 1e-10
_TRACE_CHUNK = 2048

BACKENDS = {"compiled": _compiled, "python": _walk_kernel_py}


def available_backends() -> list[str]:
    return [name for name, mod in BACKENDS.items() if mod is not None]


def default_backend() -> str:
    """``compiled`` when the extension imports, else ``python``.

    ``SZCOMMUNITY_BACKEND=python`` forces the fallback.
    """
    forced = os.environ.get("SZCOMMUNITY_BACKEND")
    if forced:
        if forced not in BACKENDS or BACKENDS[forced] is None:
            raise RuntimeError(f"walk backend {forced!r} is not available")
        return forced
    return "compiled" if _compiled is not None else "python"


def transition_probabilities(space: DirectedEdgeSpace, degrees) -> np.ndarray:
    """Equiprobable transition rule: ``1 / deg(origin)`` per directed edge."""
    d = np.asarray(degrees, dtype=np.float64)[space.origin]
    if np.any(d <= 0):
        raise RuntimeError("directed edge leaves a vertex of degree zero")
    return 1.0 / d


@dataclass(frozen=True)
class SzegedyOperator:
    """Sparse walk operator in CSR form (columns sorted within each row)."""

    dim: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    @property
    def matrix(self) -> sp.csr_array:
        return sp.csr_array((self.data, self.indices, self.indptr), shape=(self.dim, self.dim))

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def unitarity_error(self) -> float:
        """``max |U^T U - I|`` (the operator is real, so ``U^dagger = U^T``)."""
        u = self.matrix
        gram = (u.T @ u - sp.eye_array(self.dim, format="csr")).tocsr()
        return float(np.abs(gram.data).max()) if gram.nnz else 0.0

    def row_nnz(self) -> np.ndarray:
        return np.diff(self.indptr)


def build_szegedy_operator(space: DirectedEdgeSpace, p) -> SzegedyOperator:
    """Assemble the walk operator from per-edge transition probabilities.

    Raises
    ------
    RuntimeError
        If the assembled matrix is not unitary to within 1e-10, which means
        ``p`` does not sum to one around some vertex.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (space.size,):
        raise GraphInputError(f"expected {space.size} transition probabilities, got {p.shape}")
    # incoming[v]: directed edges ending at v, ascending
    order = np.argsort(space.terminal, kind="stable")
    starts = np.searchsorted(space.terminal[order], np.arange(space.n + 1))
    counts = np.diff(starts)[space.origin]
    indptr = np.zeros(space.size + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int64)
    data = np.empty(indptr[-1], dtype=np.float64)
    for e in range(space.size):
        v = space.origin[e]
        cols = order[starts[v]:starts[v + 1]]
        lo, hi = indptr[e], indptr[e + 1]
        indices[lo:hi] = cols
        data[lo:hi] = 2.0 * np.sqrt(p[e] * p[space.inverse[cols]])
        data[lo:hi][space.inverse[cols] == e] -= 1.0
    for arr in (indptr, indices, data):
        arr.setflags(write=False)
    op = SzegedyOperator(space.size, indptr, indices, data)
    err = op.unitarity_error()
    if not err < UNITARITY_TOL:
        raise RuntimeError(f"walk operator is not unitary (max deviation {err:.2e})")
    return op


def initial_state_max_degree(g: UndirectedGraph, space: DirectedEdgeSpace) -> np.ndarray:
    """Equal amplitudes on every edge leaving a maximum-degree vertex."""
    deg = g.degrees
    mask = deg[space.origin] == deg.max()
    psi = mask.astype(np.complex128)
    return psi / math.sqrt(mask.sum())


def initial_state_uniform(space: DirectedEdgeSpace) -> np.ndarray:
    """Equal amplitudes ``1/sqrt(2m)`` on all directed edges.

    This state is a fixed point of the walk operator.
    """
    return np.full(space.size, 1.0 / math.sqrt(space.size), dtype=np.complex128)


def step(op: SzegedyOperator, psi) -> np.ndarray:
    psi = np.asarray(psi)
    if psi.shape != (op.dim,):
        raise GraphInputError(f"state has shape {psi.shape}, operator dimension is {op.dim}")
    u = op.matrix
    return (u @ psi.real) + 1j * (u @ psi.imag) if np.iscomplexobj(psi) else u @ psi


def edge_probabilities(psi, space: DirectedEdgeSpace) -> np.ndarray:
    """Probability of finding the walker on each undirected edge."""
    a = np.abs(np.asarray(psi)) ** 2
    return a[: space.m] + a[space.m:]


def default_max_steps(m: int, epsilon: float) -> int:
    return int(min(MAX_STEPS_CAP, math.ceil(10 * 2 * math.sqrt(m) / epsilon)))


@dataclass(frozen=True)
class WalkOutcome:
    """Result of :func:`limiting_distribution`.

    Attributes
    ----------
    pi : ndarray
        Averaged undirected edge distribution at the stopping time.
    steps : int
        Stopping time ``T``; the average covers times ``0..T``.
    epsilon : float
    residual : float
        Distance between the last two averages.
    distance : str
        ``"directed"`` or ``"undirected"``.
    state : ndarray
        Walk state at time ``T``.
    trace : ndarray or None
        Averages for times ``0..T``, shape ``(T + 1, m)``, when requested.
    """

    pi: np.ndarray
    steps: int
    epsilon: float
    residual: float
    distance: str
    state: np.ndarray
    trace: np.ndarray | None = None


def limiting_distribution(
    op: SzegedyOperator,
    psi0,
    epsilon: float = DEFAULT_EPSILON,
    max_steps: int | None = None,
    *,
    distance: str = "directed",
    keep_trace: bool = False,
    backend: str | None = None,
) -> WalkOutcome:
    """Iterate the walk and return the time-averaged edge distribution.

    Stops at the first ``T >= 1`` where the running average moved by less
    than ``epsilon``. With ``distance="directed"`` (default) the change is
    measured on the ``2m`` directed-edge averages; ``"undirected"`` measures
    it on the ``m`` undirected sums. The returned distribution is always the
    undirected one.

    Raises
    ------
    ConvergenceError
        If ``max_steps`` steps pass without meeting the criterion.
    """
    if not epsilon > 0:
        raise GraphInputError(f"epsilon must be positive, got {epsilon}")
    if distance not in ("directed", "undirected"):
        raise GraphInputError(f"distance must be 'directed' or 'undirected', got {distance!r}")
    dim = op.dim
    m = dim // 2
    if max_steps is None:
        max_steps = default_max_steps(m, epsilon)
    if max_steps < 1:
        raise GraphInputError(f"max_steps must be at least 1, got {max_steps}")
    psi0 = np.asarray(psi0)
    if psi0.shape != (dim,):
        raise GraphInputError(f"state has shape {psi0.shape}, operator dimension is {dim}")
    kernel = BACKENDS[backend or default_backend()]
    if kernel is None:
        raise RuntimeError(f"walk backend {backend!r} is not available")

    if np.iscomplexobj(psi0) and np.any(psi0.imag != 0):
        psi = np.ascontiguousarray(np.stack([psi0.real, psi0.imag]), dtype=np.float64)
    else:
        psi = np.ascontiguousarray(psi0.real, dtype=np.float64).reshape(1, dim)
    acc = np.einsum("ci,ci->i", psi, psi)
    indptr = np.ascontiguousarray(op.indptr, dtype=np.longlong)
    indices = np.ascontiguousarray(op.indices, dtype=np.longlong)
    data = np.ascontiguousarray(op.data, dtype=np.float64)
    directed = distance == "directed"

    rows = [(acc[:m] + acc[m:]).copy()] if keep_trace else None
    t = 0
    residual = math.inf
    converged = False
    while t < max_steps and not converged:
        chunk = min(max_steps - t, _TRACE_CHUNK) if keep_trace else max_steps - t
        buf = np.empty((chunk if keep_trace else 0, m), dtype=np.float64)
        t_new, residual, converged = kernel.advance(
            indptr, indices, data, psi, acc, t, chunk, epsilon, m, directed, buf
        )
        if keep_trace:
            rows.append(buf[: t_new - t])
        t = t_new

    avg = acc / (t + 1)
    pi = avg[:m] + avg[m:]
    if not converged:
        raise ConvergenceError(pi, residual, t, epsilon)
    state = psi[0] + 1j * psi[1] if psi.shape[0] == 2 else psi[0].astype(np.complex128)
    trace = np.vstack(rows) if keep_trace else None
    return WalkOutcome(pi, t, float(epsilon), float(residual), distance, state, trace)


def run_walk(
    g: UndirectedGraph,
    epsilon: float = DEFAULT_EPSILON,
    max_steps: int | None = None,
    *,
    initial: str = "max-degree",
    distance: str = "directed",
    keep_trace: bool = False,
    backend: str | None = None,
) -> WalkOutcome:
    """Build the walk on ``g`` and compute its limiting edge distribution.

    ``initial`` selects the starting state: ``"max-degree"`` or ``"uniform"``.
    """
    space = directed_edge_space(g)
    op = build_szegedy_operator(space, transition_probabilities(space, g.degrees))
    if initial == "max-degree":
        psi0 = initial_state_max_degree(g, space)
    elif initial == "uniform":
        psi0 = initial_state_uniform(space)
    else:
        raise GraphInputError(f"unknown initial state {initial!r}")
    return limiting_distribution(
        op, psi0, epsilon, max_steps, distance=distance, keep_trace=keep_trace, backend=backend
    )
