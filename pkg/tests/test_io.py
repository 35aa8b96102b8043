import json
import re

import networkx as nx
import numpy as np
import pytest

from szcommunity.community import find_communities
from szcommunity.exceptions import ParseError
from szcommunity.generators import barbell
from szcommunity.io import (
    DATA_DIR_ENV,
    ResultDocument,
    find_dataset,
    load_dataset,
    read_distribution_csv,
    read_edge_list,
    read_gml,
    read_graph,
    read_result,
    read_trace_csv,
    write_distribution_csv,
    write_dot,
    write_edge_list,
    write_result,
    write_trace_csv,
)
from szcommunity.walk import run_walk


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


# edge lists

def test_edge_list_comments_and_extra_columns(tmp_path):
    p = write(tmp_path, "g.txt", "# header\n% other\n\n0 1 0.5\n1 2\t7 x\n2 0\n")
    g = read_edge_list(p)
    assert (g.n, g.m) == (3, 3) and g.labels is None


def test_edge_list_relabels_by_first_appearance(tmp_path):
    p = write(tmp_path, "g.txt", "10 20\n20 30\n5 10\n")
    g = read_edge_list(p)
    assert g.edges == ((0, 1), (1, 2), (0, 3))
    assert g.labels == ("10", "20", "30", "5")


def test_edge_list_one_based_is_relabeled(tmp_path):
    g = read_edge_list(write(tmp_path, "g.txt", "1 2\n2 3\n"))
    assert g.n == 3 and g.labels == ("1", "2", "3")


def test_edge_list_string_labels(tmp_path):
    g = read_edge_list(write(tmp_path, "g.txt", "alice bob\nbob carol\ncarol alice\n"))
    assert g.m == 3 and g.label(2) == "carol"


def test_edge_list_malformed_line_number(tmp_path):
    p = write(tmp_path, "g.txt", "0 1\n# fine\n2\n")
    with pytest.raises(ParseError) as info:
        read_edge_list(p)
    assert info.value.lineno == 3
    assert ":3:" in str(info.value)


def test_edge_list_simplifies(tmp_path):
    g = read_edge_list(write(tmp_path, "g.txt", "0 1\n1 0\n1 1\n1 2\n"))
    assert g.m == 2


def test_edge_list_round_trip(tmp_path):
    g = barbell(3, 4)
    p = tmp_path / "b.txt"
    write_edge_list(g, p)
    assert read_edge_list(p) == g


# GML

def test_gml_single_edge(tmp_path):
    p = write(tmp_path, "g.gml", "graph [\n node [ id 0 ]\n node [ id 1 ]\n edge [ source 0 target 1 ]\n]\n")
    g = read_gml(p)
    assert (g.n, g.m) == (2, 1)


def test_gml_directed_duplicates_collapse(tmp_path):
    text = """graph [
  directed 1
  node [ id 7 label "a" ]
  node [ id 9 label "b" ]
  edge [ source 7 target 9 ]
  edge [ source 9 target 7 ]
]"""
    g = read_gml(write(tmp_path, "g.gml", text))
    assert g.m == 1 and g.labels == ("a", "b")


def test_gml_nested_attributes_and_quotes(tmp_path):
    text = """Creator "someone [with brackets]"
graph [
  node [ id 0 label "x y" graphics [ x 1.0 y 2.0 ] ]
  node [ id 1 ]
  edge [ source 0 target 1 value 3 ]
]"""
    g = read_gml(write(tmp_path, "g.gml", text))
    assert g.m == 1 and g.labels == ("x y", "1")


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("graph [\n node [ id 0 ]\n", None),
        ("graph [\n node [ label \"a\" ]\n]\n", 2),
        ("graph [\n node [ id 0 ]\n edge [ source 0 target 4 ]\n]\n", 3),
        ("graph [\n node [ id 0 ]\n]\n]\n", 4),
        ("nodes [ ]\n", None),
    ],
)
def test_gml_errors(tmp_path, text, lineno):
    with pytest.raises(ParseError) as info:
        read_gml(write(tmp_path, "bad.gml", text))
    assert info.value.lineno == lineno


def test_karate_gml_matches_edge_list(tmp_path):
    G = nx.Graph()
    G.add_nodes_from(range(34))
    G.add_edges_from(nx.karate_club_graph().edges())
    p = tmp_path / "karate.gml"
    nx.write_gml(G, p)
    from_gml = read_gml(p)
    assert from_gml.labels is None
    from_txt = load_dataset("karate")
    assert sorted(from_gml.edges) == sorted(from_txt.edges)
    assert read_graph(p) == from_gml


def test_read_graph_dispatch(tmp_path):
    p = write(tmp_path, "g.dat", "0 1\n")
    assert read_graph(p).m == 1
    with pytest.raises(ValueError):
        read_graph(p, "graphml")


# bundled and external datasets

def test_bundled_datasets():
    k = load_dataset("karate")
    assert (k.n, k.m) == (34, 78)
    lm = load_dataset("lesmis")
    assert (lm.n, lm.m) == (77, 254)
    assert lm.labels[:2] == ("Napoleon", "Myriel")


def test_bundled_datasets_match_networkx():
    ref = nx.les_miserables_graph()
    lm = load_dataset("lesmis")
    ours = {frozenset((lm.label(u), lm.label(v))) for u, v in lm.edges}
    assert ours == {frozenset(e) for e in ref.edges()}
    k = load_dataset("karate")
    assert {frozenset(e) for e in k.edges} == {frozenset(e) for e in nx.karate_club_graph().edges()}


def test_dataset_from_data_dir(tmp_path, monkeypatch):
    write(tmp_path, "soc-dolphins.mtx", "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 2\n")
    monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path))
    g = load_dataset("dolphins")
    assert (g.n, g.m) == (3, 2)
    assert find_dataset("dolphins").name == "soc-dolphins.mtx"


def test_missing_dataset_message(tmp_path, monkeypatch):
    monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path))
    with pytest.raises(FileNotFoundError, match=DATA_DIR_ENV):
        find_dataset("euroroad")
    with pytest.raises(KeyError):
        find_dataset("football")


def test_bad_mtx(tmp_path):
    p = write(tmp_path, "soc-dolphins.mtx", "% c\n3 3 2\n2 x\n")
    with pytest.raises(ParseError) as info:
        load_dataset("dolphins", tmp_path)
    assert info.value.lineno == 3


# result document

@pytest.fixture(scope="module")
def barbell_result():
    g = barbell(2, 5)
    return g, find_communities(g)


def test_result_round_trip(tmp_path, barbell_result):
    g, res = barbell_result
    doc = ResultDocument.from_result(g, res, seed=0)
    p = tmp_path / "r.json"
    write_result(doc, p)
    back = read_result(p)
    assert back == doc
    data = json.loads(p.read_text())
    assert data["graph"] == {"n": 11, "m": 22}
    assert data["walk"]["steps"] == res.walk.steps
    assert data["communities"] == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9], [10]]


def test_result_canonical_order():
    doc = ResultDocument(3, 0, {}, {}, [[2], [1, 0]], 0.0, [])
    assert doc.communities == [[0, 1], [2]]


def test_result_rejects_foreign_json(tmp_path):
    p = write(tmp_path, "x.json", '{"format": "other"}')
    with pytest.raises(ParseError):
        read_result(p)


def test_writers_are_byte_deterministic(tmp_path, barbell_result):
    g, res = barbell_result
    outs = []
    for i in range(2):
        d = tmp_path / str(i)
        d.mkdir()
        write_result(ResultDocument.from_result(g, res), d / "r.json")
        write_distribution_csv(g, res.walk.pi, d / "p.csv")
        write_dot(g, res.communities, d / "g.dot")
        outs.append([(d / f).read_bytes() for f in ("r.json", "p.csv", "g.dot")])
    assert outs[0] == outs[1]


# CSV

def test_distribution_csv(tmp_path, barbell_result):
    g, res = barbell_result
    p = tmp_path / "p.csv"
    write_distribution_csv(g, res.walk.pi, p)
    lines = p.read_text().splitlines()
    assert lines[0] == "edge_index,u,v,probability"
    assert len(lines) == g.m + 1
    back = read_distribution_csv(p)
    assert np.allclose(back, res.walk.pi, rtol=1e-11, atol=0)


def test_trace_csv(tmp_path, two_triangles):
    out = run_walk(two_triangles, keep_trace=True)
    p = tmp_path / "t.csv"
    write_trace_csv(out.trace, p)
    lines = p.read_text().splitlines()
    assert lines[0] == "t,edge_index,pi_t"
    assert len(lines) - 1 == two_triangles.m * (out.steps + 1)
    assert np.allclose(read_trace_csv(p), out.trace, rtol=1e-11, atol=0)


def test_trace_csv_bad_header(tmp_path):
    with pytest.raises(ParseError):
        read_trace_csv(write(tmp_path, "t.csv", "a,b,c\n"))


# DOT

def test_barbell_dot_colors(tmp_path, barbell_result):
    g, res = barbell_result
    p = tmp_path / "g.dot"
    write_dot(g, res.communities, p)
    text = p.read_text()
    colors = dict(re.findall(r'^\s+(\d+) \[fillcolor="([^"]+)"', text, re.M))
    assert colors["10"] == "gray"
    classes = {c for v, c in colors.items() if v != "10"}
    assert len(classes) == 2 and "gray" not in classes
    assert len({colors[str(v)] for v in range(5)}) == 1
    assert text.count(" -- ") == g.m


def test_dot_escapes_labels(tmp_path):
    from szcommunity.graph import build_graph

    g = build_graph(2, [(0, 1)], labels=['say "hi"', "b"])
    p = tmp_path / "g.dot"
    write_dot(g, [[0, 1]], p)
    assert 'label="say \\"hi\\""' in p.read_text()
