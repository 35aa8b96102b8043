"""The compiled kernel and the pure-Python fallback must agree."""

import numpy as np
import pytest

from szcommunity import walk
from szcommunity.generators import barbell
from szcommunity.io import load_dataset

from conftest import random_connected_graph

pytestmark = pytest.mark.skipif(
    "compiled" not in walk.available_backends(), reason="compiled kernel not built"
)


def _pair(g, **kw):
    a = walk.run_walk(g, backend="compiled", **kw)
    b = walk.run_walk(g, backend="python", **kw)
    return a, b


@pytest.mark.parametrize("name", ["barbell", "karate", "lesmis"])
def test_backends_agree_on_reference_graphs(name):
    g = barbell(2, 5) if name == "barbell" else load_dataset(name)
    a, b = _pair(g)
    assert a.steps == b.steps
    assert np.abs(a.pi - b.pi).max() < 1e-12
    assert np.abs(a.state - b.state).max() < 1e-12


@pytest.mark.parametrize("distance", ["directed", "undirected"])
def test_backends_agree_on_random_graphs(distance):
    rng = np.random.default_rng(11)
    for _ in range(20):
        g = random_connected_graph(rng, n_max=30)
        a, b = _pair(g, distance=distance, keep_trace=True)
        assert a.steps == b.steps
        assert a.trace.shape == b.trace.shape == (a.steps + 1, g.m)
        assert np.abs(a.trace - b.trace).max() < 1e-12


def test_backends_agree_on_complex_state():
    g = barbell(2, 4)
    space = walk.directed_edge_space(g)
    op = walk.build_szegedy_operator(space, walk.transition_probabilities(space, g.degrees))
    rng = np.random.default_rng(3)
    psi = rng.normal(size=space.size) + 1j * rng.normal(size=space.size)
    psi /= np.linalg.norm(psi)
    a = walk.limiting_distribution(op, psi, backend="compiled")
    b = walk.limiting_distribution(op, psi, backend="python")
    assert a.steps == b.steps
    assert np.abs(a.pi - b.pi).max() < 1e-12


def test_env_var_selects_backend(monkeypatch):
    monkeypatch.setenv("SZCOMMUNITY_BACKEND", "python")
    assert walk.default_backend() == "python"
    monkeypatch.setenv("SZCOMMUNITY_BACKEND", "compiled")
    assert walk.default_backend() == "compiled"
