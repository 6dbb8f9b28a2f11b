"""Graph file writers: GraphML, GEXF and DOT."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping, Optional

import networkx as nx

from .louvain import Partition
from .netcore import CourseGraph
from .semester import SemesterNetwork, _sort_key

FORMATS = ("graphml", "gexf", "dot")


def _dot_quote(value) -> str:
    s = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{s}"'


def _dot_attrs(attrs: Mapping) -> str:
    return ", ".join(f"{k}={_dot_quote(v)}" for k, v in attrs.items())


def course_graph_to_nx(g: CourseGraph, partition: Optional[Partition] = None,
                       hubs: Iterable[str] = (), labels: Optional[Mapping[str, str]] = None) -> nx.Graph:
    """networkx copy of ``g`` with the export attributes; nodes and edges in sorted order."""
    hubs = frozenset(hubs)
    labels = labels or {}
    strengths = g.strengths()
    G = nx.Graph()
    for v in sorted(g.nodes):
        attrs = {"label": labels.get(v, v), "strength": float(strengths[v]), "is_hub": v in hubs}
        if partition is not None:
            # nodes outside the partition (removed hubs) get -1
            attrs["community"] = int(partition.assignment.get(v, -1))
        G.add_node(v, **attrs)
    for (a, b) in sorted(g.edges):
        G.add_edge(a, b, weight=float(g.edges[(a, b)]))
    return G


def _write_dot(G: nx.Graph | nx.DiGraph, path: Path, name: str, rank_by: Optional[str] = None) -> None:
    directed = G.is_directed()
    arrow = "->" if directed else "--"
    lines = [f"{'digraph' if directed else 'graph'} {_dot_quote(name)} {{"]
    if rank_by is not None:
        lines.append("  rankdir=LR;")
    for v, data in G.nodes(data=True):
        attrs = {k: (str(x).lower() if isinstance(x, bool) else x) for k, x in data.items()}
        lines.append(f"  {_dot_quote(v)} [{_dot_attrs(attrs)}];")
    if rank_by is not None:
        layers: dict = {}
        for v, data in G.nodes(data=True):
            layers.setdefault(data[rank_by], []).append(v)
        for _, members in sorted(layers.items()):
            lines.append("  { rank=same; " + " ".join(f"{_dot_quote(v)};" for v in members) + " }")
    for a, b, data in G.edges(data=True):
        lines.append(f"  {_dot_quote(a)} {arrow} {_dot_quote(b)} [{_dot_attrs(data)}];")
    lines.append("}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write(G, path: str | Path, fmt: str, name: str, rank_by: Optional[str] = None) -> Path:
    if fmt not in FORMATS:
        raise ValueError(f"unsupported export format {fmt!r}; choose from {FORMATS}")
    path = Path(path)
    if not path.parent.is_dir():
        raise OSError(f"cannot write {path}: directory {path.parent} does not exist")
    if fmt == "graphml":
        nx.write_graphml(G, path)
    elif fmt == "gexf":
        nx.write_gexf(G, path)
    else:
        _write_dot(G, path, name, rank_by)
    return path


def export_graph(g: CourseGraph, path: str | Path, fmt: str = "graphml", partition: Optional[Partition] = None,
                 hubs: Iterable[str] = (), labels: Optional[Mapping[str, str]] = None) -> Path:
    return _write(course_graph_to_nx(g, partition, hubs, labels), path, fmt, "courses")


def semester_network_to_nx(net: SemesterNetwork) -> nx.DiGraph:
    def node_id(key) -> str:
        return f"t{key[0]}:" + "+".join(sorted(key[1]))

    G = nx.DiGraph()
    for key in sorted(net.node_weights, key=_sort_key):
        G.add_node(node_id(key), ordinal=key[0], weight=net.node_weights[key], courses=" ".join(sorted(key[1])))
    for src, dst, w in net.sorted_edges():
        G.add_edge(node_id(src), node_id(dst), weight=w)
    return G


def export_semester_network(net: SemesterNetwork, path: str | Path, fmt: str = "graphml") -> Path:
    return _write(semester_network_to_nx(net), path, fmt, "semesters", rank_by="ordinal")
