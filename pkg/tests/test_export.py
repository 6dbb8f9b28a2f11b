import re
import xml.etree.ElementTree as ET

import networkx as nx
import pytest

from builders import cohort_from_histories
from coursenet.export import export_graph, export_semester_network
from coursenet.louvain import Partition
from coursenet.netcore import CourseGraph
from coursenet.semester import build_semester_network

TRIANGLE = CourseGraph.from_weighted_edges([("A", "B", 1), ("B", "C", 2), ("A", "C", 3)])

DOT_NODE = re.compile(r'^\s*"([^"]+)" \[(.*)\];$')
DOT_EDGE = re.compile(r'^\s*"([^"]+)" (--|->) "([^"]+)" \[(.*)\];$')
DOT_ATTR = re.compile(r'(\w+)="((?:[^"\\]|\\.)*)"')


def read_dot(path):
    """Parser for the subset of DOT this package writes."""
    text = path.read_text(encoding="utf-8")
    G = nx.DiGraph() if text.startswith("digraph") else nx.Graph()
    for line in text.splitlines():
        if m := DOT_EDGE.match(line):
            G.add_edge(m[1], m[3], **dict(DOT_ATTR.findall(m[4])))
        elif m := DOT_NODE.match(line):
            G.add_node(m[1], **dict(DOT_ATTR.findall(m[2])))
    return G


def load(path, fmt):
    if fmt == "graphml":
        return nx.read_graphml(path)
    if fmt == "gexf":
        return nx.read_gexf(path)
    return read_dot(path)


@pytest.mark.parametrize("fmt", ["graphml", "gexf", "dot"])
def test_empty_graph(tmp_path, fmt):
    path = export_graph(CourseGraph(frozenset(), {}), tmp_path / f"g.{fmt}", fmt)
    assert load(path, fmt).number_of_nodes() == 0


@pytest.mark.parametrize("fmt", ["graphml", "gexf", "dot"])
def test_triangle_round_trip(tmp_path, fmt):
    path = export_graph(TRIANGLE, tmp_path / f"g.{fmt}", fmt)
    G = load(path, fmt)
    expected = nx.Graph()
    for (a, b), w in TRIANGLE.edges.items():
        expected.add_edge(a, b, weight=w)
    assert nx.is_isomorphic(G, expected, edge_match=lambda x, y: float(x["weight"]) == float(y["weight"]))
    assert {v: float(G.nodes[v]["strength"]) for v in G} == {"A": 4, "B": 3, "C": 5}


@pytest.mark.parametrize("fmt", ["graphml", "gexf", "dot"])
def test_partition_attributes(tmp_path, fmt):
    p = Partition.from_communities([{"A", "B"}])
    path = export_graph(TRIANGLE, tmp_path / f"g.{fmt}", fmt, partition=p, hubs={"C"},
                        labels={"A": "Intro"})
    G = load(path, fmt)
    comm = {v: int(G.nodes[v]["community"]) for v in G}
    assert comm == {"A": 0, "B": 0, "C": -1}
    assert str(G.nodes["C"]["is_hub"]).lower() == "true"
    assert str(G.nodes["A"]["is_hub"]).lower() == "false"
    assert G.nodes["A"]["label"] == "Intro"


def test_graphml_is_wellformed(tmp_path):
    path = export_graph(TRIANGLE, tmp_path / "g.graphml", "graphml")
    root = ET.parse(path).getroot()
    assert root.tag == "{http://graphml.graphdrawing.org/xmlns}graphml"


def test_bad_format(tmp_path):
    with pytest.raises(ValueError):
        export_graph(TRIANGLE, tmp_path / "g.txt", "txt")


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        export_graph(TRIANGLE, tmp_path / "missing" / "g.graphml", "graphml")


@pytest.mark.parametrize("fmt", ["graphml", "dot"])
def test_semester_export(tmp_path, fmt):
    net = build_semester_network(cohort_from_histories({"S1": [{"A", "B"}, {"C"}], "S2": [{"A", "B"}, {"D"}]}))
    path = export_semester_network(net, tmp_path / f"s.{fmt}", fmt)
    G = load(path, fmt)
    assert G.is_directed() and G.number_of_nodes() == 3 and G.number_of_edges() == 2
    first = G.nodes["t1:A+B"]
    assert int(first["ordinal"]) == 1 and int(first["weight"]) == 2 and first["courses"] == "A B"
    assert all(int(d["weight"]) == 1 for _, _, d in G.edges(data=True))
    if fmt == "dot":
        assert "rank=same" in path.read_text()
