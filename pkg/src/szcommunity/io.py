"""Graph file readers and result writers.

Formats
-------
edge list
    One ``u v`` pair per line, whitespace separated; extra columns are
    ignored and lines starting with ``#`` or ``%`` are comments.
GML
    The ``graph [ node [ id .. ] edge [ source .. target .. ] ]`` subset.
result JSON
    See :class:`ResultDocument`.
distribution CSV
    ``edge_index,u,v,probability``, one row per undirected edge.
trace CSV
    ``t,edge_index,pi_t``, one row per edge per time step.
DOT
    Undirected graph with vertices filled by community; singletons gray.
"""

from __future__ import annotations

import csv
import json
import os
import re
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .exceptions import ParseError
from .graph import UndirectedGraph, build_graph

__all__ = [
    "read_edge_list",
    "read_gml",
    "read_graph",
    "write_edge_list",
    "ResultDocument",
    "write_result",
    "read_result",
    "write_distribution_csv",
    "read_distribution_csv",
    "write_trace_csv",
    "read_trace_csv",
    "write_dot",
    "DATASETS",
    "DATA_DIR_ENV",
    "find_dataset",
    "load_dataset",
]

RESULT_FORMAT = "szcommunity-result"
RESULT_VERSION = 1
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#bcbd22", "#17becf", "#aec7e8",
    "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
)
SINGLETON_COLOR = "gray"


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _relabel(tokens_in_order: list[str]) -> tuple[dict[str, int], list[str] | None]:
    """Map raw labels to ``0..n-1``.

    Labels that already are exactly the integers ``0..n-1`` map to
    themselves; anything else is numbered by first appearance.
    """
    distinct = list(dict.fromkeys(tokens_in_order))
    try:
        as_int = [int(t) for t in distinct]
    except ValueError:
        as_int = None
    if as_int is not None and sorted(as_int) == list(range(len(distinct))):
        return {t: int(t) for t in distinct}, None
    return {t: i for i, t in enumerate(distinct)}, distinct


def read_edge_list(path) -> UndirectedGraph:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text[0] in "#%":
                continue
            parts = text.split()
            if len(parts) < 2:
                raise ParseError(f"expected 'u v', got {text!r}", path, lineno)
            pairs.append((parts[0], parts[1]))
    order = [t for pair in pairs for t in pair]
    mapping, labels = _relabel(order)
    return build_graph(len(mapping), [(mapping[a], mapping[b]) for a, b in pairs], labels)


_GML_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|\[|\]|[^\s\[\]"]+')


def _gml_tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        for match in _GML_TOKEN.finditer(line):
            yield match.group(0), lineno


def _gml_parse(text: str, path) -> list:
    """Nested ``[(key, value, lineno), ...]`` lists; values are str or list."""
    stack: list[list] = [[]]
    key = None
    key_line = 0
    for tok, lineno in _gml_tokens(text):
        if key is None:
            if tok in ("[", "]"):
                if tok == "]" and len(stack) > 1:
                    stack.pop()
                    continue
                raise ParseError(f"unexpected {tok!r}", path, lineno)
            key, key_line = tok, lineno
            continue
        if tok == "[":
            child: list = []
            stack[-1].append((key, child, key_line))
            stack.append(child)
        elif tok == "]":
            raise ParseError(f"key {key!r} has no value", path, lineno)
        else:
            stack[-1].append((key, tok[1:-1] if tok.startswith('"') else tok, key_line))
        key = None
    if key is not None:
        raise ParseError(f"key {key!r} has no value", path, key_line)
    if len(stack) != 1:
        raise ParseError("unbalanced brackets: missing ']'", path)
    return stack[0]


def read_gml(path) -> UndirectedGraph:
    """Read the node/edge subset of GML; ``directed`` is ignored."""
    text = Path(path).read_text(encoding="utf-8")
    top = _gml_parse(text, path)
    graphs = [v for k, v, _ in top if k == "graph" and isinstance(v, list)]
    if not graphs:
        raise ParseError("no 'graph [ ... ]' block", path)
    node_ids: list[str] = []
    node_labels: list[str] = []
    raw_edges = []
    for key, value, lineno in graphs[0]:
        if key == "node" and isinstance(value, list):
            attrs = {k: v for k, v, _ in value if not isinstance(v, list)}
            if "id" not in attrs:
                raise ParseError("node without id", path, lineno)
            node_ids.append(attrs["id"])
            node_labels.append(attrs.get("label", attrs["id"]))
        elif key == "edge" and isinstance(value, list):
            attrs = {k: v for k, v, _ in value if not isinstance(v, list)}
            if "source" not in attrs or "target" not in attrs:
                raise ParseError("edge without source/target", path, lineno)
            raw_edges.append((attrs["source"], attrs["target"], lineno))
    index = {}
    for i, nid in enumerate(node_ids):
        if nid in index:
            raise ParseError(f"duplicate node id {nid}", path)
        index[nid] = i
    edges = []
    for s, t, lineno in raw_edges:
        if s not in index or t not in index:
            raise ParseError(f"edge refers to unknown node ({s}, {t})", path, lineno)
        edges.append((index[s], index[t]))
    identity = node_ids == [str(i) for i in range(len(node_ids))] and node_labels == node_ids
    return build_graph(len(node_ids), edges, None if identity else node_labels)


def read_graph(path, fmt: str | None = None) -> UndirectedGraph:
    """Dispatch on ``fmt`` (``edgelist`` or ``gml``), else on the file suffix."""
    if fmt is None:
        fmt = "gml" if str(path).lower().endswith(".gml") else "edgelist"
    if fmt == "gml":
        return read_gml(path)
    if fmt == "edgelist":
        return read_edge_list(path)
    raise ValueError(f"unknown graph format {fmt!r}")


def write_edge_list(g: UndirectedGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def _canonical(communities: Iterable[Iterable[int]]) -> list[list[int]]:
    lists = [sorted(int(v) for v in c) for c in communities]
    return sorted(lists, key=lambda c: (-len(c), c[0] if c else -1))


@dataclass
class ResultDocument:
    """Serializable summary of one detection run.

    ``communities`` holds ascending vertex lists ordered by descending size,
    then by smallest vertex.
    """

    n: int
    m: int
    config: dict[str, Any]
    walk: dict[str, Any]
    communities: list[list[int]]
    coverage: float
    edge_probabilities: list[float]
    labels: list[str] | None = None
    format: str = field(default=RESULT_FORMAT)
    version: int = field(default=RESULT_VERSION)

    def __post_init__(self):
        self.communities = _canonical(self.communities)

    @classmethod
    def from_result(cls, g: UndirectedGraph, result, config=None, seed: int | None = None):
        walk = result.walk
        cfg = {
            "q": result.q,
            "epsilon": walk.epsilon if walk is not None else None,
            "max_steps": getattr(config, "max_steps", None),
            "refine": getattr(config, "refine", True),
            "distance": walk.distance if walk is not None else None,
            "initial": getattr(config, "initial", "max-degree"),
            "seed": seed,
        }
        return cls(
            n=g.n,
            m=g.m,
            config=cfg,
            walk={
                "steps": walk.steps if walk is not None else None,
                "residual": walk.residual if walk is not None else None,
            },
            communities=[list(c) for c in result.communities],
            coverage=result.coverage,
            edge_probabilities=[float(x) for x in walk.pi] if walk is not None else [],
            labels=list(g.labels) if g.labels is not None else None,
        )

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        return {
            "format": d.pop("format"),
            "version": d.pop("version"),
            "graph": {"n": d.pop("n"), "m": d.pop("m")},
            **d,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ResultDocument":
        if d.get("format") != RESULT_FORMAT:
            raise ParseError(f"not a result document (format={d.get('format')!r})")
        return cls(
            n=d["graph"]["n"],
            m=d["graph"]["m"],
            config=d["config"],
            walk=d["walk"],
            communities=d["communities"],
            coverage=d["coverage"],
            edge_probabilities=d["edge_probabilities"],
            labels=d.get("labels"),
            version=d.get("version", RESULT_VERSION),
        )


def write_result(doc: ResultDocument, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc.to_dict(), fh, indent=2)
        fh.write("\n")


def read_result(path) -> ResultDocument:
    with open(path, encoding="utf-8") as fh:
        return ResultDocument.from_dict(json.load(fh))


def write_distribution_csv(g: UndirectedGraph, pi, path) -> None:
    pi = np.asarray(pi)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["edge_index", "u", "v", "probability"])
        for k, (u, v) in enumerate(g.edges):
            w.writerow([k, u, v, _fmt(pi[k])])


def read_distribution_csv(path) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = np.empty(len(rows))
    for row in rows:
        out[int(row["edge_index"])] = float(row["probability"])
    return out


def write_trace_csv(trace, path) -> None:
    """Write averaged distributions for ``t = 0..T`` (``trace[t, k]``)."""
    trace = np.asarray(trace)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "edge_index", "pi_t"])
        for t, row in enumerate(trace):
            for k, x in enumerate(row):
                w.writerow([t, k, _fmt(x)])


def read_trace_csv(path) -> np.ndarray:
    """Inverse of :func:`write_trace_csv`: array of shape ``(T + 1, m)``."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["t", "edge_index", "pi_t"]:
            raise ParseError(f"unexpected trace header {header}", path, 1)
        rows = [(int(t), int(k), float(x)) for t, k, x in reader]
    if not rows:
        return np.empty((0, 0))
    steps = max(r[0] for r in rows) + 1
    m = max(r[1] for r in rows) + 1
    out = np.full((steps, m), np.nan)
    for t, k, x in rows:
        out[t, k] = x
    return out


def write_dot(g: UndirectedGraph, communities: Sequence[Iterable[int]], path) -> None:
    """DOT file with one fill color per multi-vertex community, gray singletons."""
    color = {}
    palette_i = 0
    for c in _canonical(communities):
        if len(c) == 1:
            color[c[0]] = SINGLETON_COLOR
            continue
        for v in c:
            color[v] = PALETTE[palette_i % len(PALETTE)]
        palette_i += 1
    lines = ["graph communities {", "  node [style=filled];"]
    for v in range(g.n):
        attrs = [f'fillcolor="{color.get(v, SINGLETON_COLOR)}"']
        if g.labels is not None:
            label = g.labels[v].replace("\\", "\\\\").replace('"', '\\"')
            attrs.append(f'label="{label}"')
        lines.append(f"  {v} [{', '.join(attrs)}];")
    lines.extend(f"  {u} -- {v};" for u, v in g.edges)
    lines.append("}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# --- datasets ---------------------------------------------------------------

DATA_DIR_ENV = "SZCOMMUNITY_DATA_DIR"

# name -> candidate file names, searched in bundled data then DATA_DIR_ENV
DATASETS = {
    "karate": ("karate.txt", "karate.gml", "karate.edges"),
    "lesmis": ("lesmis.gml", "lesmis.txt", "lesmis.edges"),
    "dolphins": ("dolphins.gml", "dolphins.txt", "dolphins.edges", "soc-dolphins.mtx", "out.dolphins"),
    "euroroad": (
        "euroroad.txt",
        "euroroad.edges",
        "road-euroroad.edges",
        "out.subelj_euroroad_euroroad",
        "euroroad.gml",
    ),
}


def find_dataset(name: str, data_dir=None) -> Path:
    if name not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; known: {sorted(DATASETS)}")
    dirs = []
    if data_dir is not None:
        dirs.append(Path(data_dir))
    bundled = resources.files("szcommunity") / "data"
    dirs.append(Path(str(bundled)))
    if os.environ.get(DATA_DIR_ENV):
        dirs.append(Path(os.environ[DATA_DIR_ENV]))
    for d in dirs:
        for fname in DATASETS[name]:
            p = d / fname
            if p.is_file():
                return p
    raise FileNotFoundError(
        f"dataset {name!r} not found; place one of {list(DATASETS[name])} "
        f"in ${DATA_DIR_ENV} (searched: {[str(d) for d in dirs]})"
    )


def load_dataset(name: str, data_dir=None) -> UndirectedGraph:
    """Load a named network (``karate``, ``lesmis``, ``dolphins``, ``euroroad``).

    Karate and Les Miserables ship with the package. Dolphins and Euroroad
    are looked up in ``data_dir`` or ``$SZCOMMUNITY_DATA_DIR``. Matrix Market
    (``.mtx``) coordinate files are read as edge lists after their size line.
    """
    path = find_dataset(name, data_dir)
    if path.suffix == ".mtx":
        return _read_mtx(path)
    return read_graph(path)


def _read_mtx(path) -> UndirectedGraph:
    pairs = []
    n = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text[0] == "%":
                continue
            parts = text.split()
            try:
                if n is None:
                    n = int(parts[0])
                    continue
                pairs.append((int(parts[0]) - 1, int(parts[1]) - 1))
            except (ValueError, IndexError):
                raise ParseError(f"malformed Matrix Market line {text!r}", path, lineno) from None
    if n is None:
        raise ParseError("missing Matrix Market size line", path)
    return build_graph(n, pairs)
