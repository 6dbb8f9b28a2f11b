"""End-to-end analysis: ingest, network, communities, scores, semester paths."""

from __future__ import annotations

import io
import json
import shutil
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import ingest, netcore, semester, validation
from .export import export_graph, export_semester_network
from .louvain import LouvainConfig, Partition, louvain, modularity, refine_communities

HUB_METHODS = ("dd", "gt", "both")
JSON_NAME, TEXT_NAME, SHARE_NAME = "report.json", "report.txt", "semester_share.csv"


@dataclass(frozen=True)
class RunConfig:
    input: str
    major: Optional[str] = None
    enroll_from: Optional[int] = None
    enroll_to: Optional[int] = None
    outlier_threshold: float = 0.05
    hub_method: str = "dd"
    mandatory_list: Optional[str] = None
    include_failed: bool = True
    seed: int = 42
    min_gain: float = 1e-7
    refine_guard: Optional[float] = None
    semester_cap: int = 10
    export_format: Optional[str] = None
    out_dir: str = "out"


class PipelineError(Exception):
    """A stage failed; ``exit_code`` is 1 for bad input, 2 for a computation failure."""

    def __init__(self, stage: str, message: str, exit_code: int):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.exit_code = exit_code


class _Stage:
    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None or isinstance(exc, PipelineError):
            return False
        if isinstance(exc, (ingest.IngestError, OSError, UnicodeDecodeError)):
            raise PipelineError(self.name, str(exc), 1) from exc
        if isinstance(exc, (ValueError, KeyError, ZeroDivisionError)):
            raise PipelineError(self.name, str(exc), 2) from exc
        return False


@dataclass
class MethodResult:
    method: str
    hubs: frozenset[str]
    graph: netcore.CourseGraph
    partition: Partition
    modularity: Optional[float]
    history: list[float]
    scores: list[validation.CommunityScore]
    weighted_average: Optional[float]
    members: list[frozenset[str]]


def order_by_size(p: Partition) -> Partition:
    """Renumber communities: largest first, ties by smallest course id."""
    comms = sorted(p.communities(), key=lambda c: (-len(c), sorted(c)))
    return Partition({v: i for i, c in enumerate(comms) for v in c})


def _detect(method: str, projected: netcore.CourseGraph, cohort: ingest.Cohort, cfg: RunConfig,
            mandatory: list[str]) -> MethodResult:
    with _Stage("netcore"):
        hubs = netcore.detect_hubs_dd(projected) if method == "dd" else frozenset(mandatory)
        g = netcore.remove_nodes(projected, hubs)
        if g.n == 0:
            raise ValueError(f"{method} hub removal left no courses")
    with _Stage("louvain"):
        lcfg = LouvainConfig(seed=cfg.seed, min_modularity_gain=cfg.min_gain)
        res = louvain(g, lcfg)
        part = res.partition
        if cfg.refine_guard is not None:
            part = refine_communities(g, part, cfg.refine_guard, lcfg)
        part = order_by_size(part)
    with _Stage("validation"):
        comms = part.communities()
        scores = validation.score_partition(g, comms)
        defined = [s for s in scores if s.defined]
        wavg = validation.weighted_average_ratio(defined) if defined else None
        members = [validation.assign_students(c, cohort) for c in comms]
    q = modularity(g, part) if g.edges else None
    return MethodResult(method, frozenset(hubs) & projected.nodes, g, part, q, res.history, scores, wavg, members)


def _num(x):
    # integral floats (edge weights, counts) print as ints so reports are stable and readable
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def _method_dict(r: MethodResult) -> dict:
    comms = r.partition.communities()
    return {
        "hubs": sorted(r.hubs),
        "graph": _graph_stats(r.graph),
        "modularity": r.modularity,
        "communities": [
            {
                "id": i,
                "courses": sorted(c),
                "size": len(c),
                "wd_inter": s.wd_inter,
                "wd_intra": s.wd_intra,
                "ratio": s.ratio,
                "students": len(m),
            }
            for i, (c, s, m) in enumerate(zip(comms, r.scores, r.members))
        ],
        "weighted_average_ratio": r.weighted_average,
    }


def _graph_stats(g: netcore.CourseGraph) -> dict:
    return {
        "nodes": g.n,
        "edges": len(g.edges),
        "total_weight": _num(g.total_weight()),
        "mean_edge_weight": g.mean_edge_weight() if g.edges else None,
    }


def analyze(cfg: RunConfig) -> tuple[dict, dict]:
    """Run every stage in memory; returns the report and the intermediate objects."""
    if cfg.hub_method not in HUB_METHODS:
        raise PipelineError("cli", f"unknown hub method {cfg.hub_method!r}", 1)
    if cfg.hub_method in ("gt", "both") and not cfg.mandatory_list:
        raise PipelineError("cli", f"hub method {cfg.hub_method} needs --mandatory-list", 1)

    with _Stage("ingest"):
        with open(cfg.input, encoding="utf-8", newline="") as fh:
            raw = ingest.parse_enrollments(fh)
        cohort = ingest.filter_cohort(raw, cfg.major, cfg.enroll_from, cfg.enroll_to)
        cohort = ingest.clean_cohort(cohort)
        if not cfg.include_failed:
            cohort = ingest.passed_only(cohort)
        if not cohort.students:
            raise ingest.IngestError("no students in cohort")
        cohort = ingest.remove_outlier_courses(cohort, cfg.outlier_threshold)
        mandatory = netcore.read_course_list(cfg.mandatory_list) if cfg.mandatory_list else []

    with _Stage("netcore"):
        projected = netcore.project_weighted(netcore.build_bipartite(cohort))
        if projected.n < 2:
            raise ValueError(f"need at least 2 courses after cleaning, got {projected.n}")

    methods = ["gt", "dd"] if cfg.hub_method == "both" else [cfg.hub_method]
    results = {m: _detect(m, projected, cohort, cfg, mandatory) for m in methods}

    similarity = None
    if cfg.hub_method == "both":
        with _Stage("validation"):
            rep = validation.clustering_similarity(results["gt"].partition.communities(),
                                                   results["dd"].partition.communities())
            similarity = {
                "overall": rep.overall,
                "per_gt_community": [{"gt": i, "best_dd": j, "score": s}
                                     for i, (j, s) in enumerate(rep.per_community_best)],
            }

    with _Stage("semester"):
        net = semester.build_semester_network(cohort, cfg.semester_cap)
        path = semester.typical_path(net)
        shares = semester.common_semester_share(net)

    report = {
        "parameters": asdict(cfg),
        "cohort": {
            "students": len(cohort.students),
            "courses": len(cohort.courses),
            "records": len(cohort.records),
            "records_input": len(raw.records),
        },
        "graph": _graph_stats(projected),
        "methods": {m: _method_dict(r) for m, r in results.items()},
        "similarity": similarity,
        "semester": {
            "nodes": len(net.node_weights),
            "edges": len(net.edges),
            "typical_path": [{"ordinal": v.ordinal, "courses": sorted(v.courses), "weight": v.weight} for v in path],
            "share": [{"ordinal": r.ordinal, "max_node_weight": r.max_node_weight,
                       "total_students": r.total_students, "share": r.share} for r in shares],
        },
    }
    names = {}
    for r in cohort.records:
        names.setdefault(r.course_id, r.course_name)
    state = {"cohort": cohort, "projected": projected, "results": results, "semester": net,
             "shares": shares, "course_names": names}
    return report, state


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _fmt(x, spec=".4f") -> str:
    return "undef" if x is None else format(x, spec)


def render_text(report: dict) -> str:
    p = report["parameters"]
    c = report["cohort"]
    g = report["graph"]
    out = io.StringIO()
    w = out.write
    w("Course network analysis\n=======================\n\n")
    w(f"input: {p['input']}  major: {p['major']}  seed: {p['seed']}  hub method: {p['hub_method']}\n")
    w(f"cohort: {c['students']} students, {c['courses']} courses, {c['records']} records "
      f"({c['records_input']} before filtering)\n")
    w(f"projected graph: {g['nodes']} nodes, {g['edges']} edges, total weight {g['total_weight']}, "
      f"mean edge weight {_fmt(g['mean_edge_weight'])}\n")
    for m, r in report["methods"].items():
        w(f"\n[{m.upper()}] hubs removed ({len(r['hubs'])}): {', '.join(r['hubs']) or '-'}\n")
        rg = r["graph"]
        w(f"  network: {rg['nodes']} nodes, {rg['edges']} edges; modularity {_fmt(r['modularity'])}\n")
        w(f"  {'id':>3} {'size':>5} {'students':>8} {'wd_inter':>9} {'wd_intra':>9} {'ratio':>7}  courses\n")
        for cm in r["communities"]:
            w(f"  {cm['id']:>3} {cm['size']:>5} {cm['students']:>8} {_fmt(cm['wd_inter']):>9} "
              f"{_fmt(cm['wd_intra']):>9} {_fmt(cm['ratio'], '.2f'):>7}  {' '.join(cm['courses'])}\n")
        w(f"  weighted average ratio: {_fmt(r['weighted_average_ratio'], '.2f')}\n")
    if report["similarity"] is not None:
        w(f"\nclustering similarity (GT vs DD): {report['similarity']['overall']:.4f}\n")
    s = report["semester"]
    w(f"\nsemester network: {s['nodes']} nodes, {s['edges']} edges\n")
    w("typical student:\n")
    for row, share in zip(s["typical_path"], s["share"]):
        w(f"  semester {row['ordinal']:>2}: {row['weight']:>4}/{share['total_students']:<4} "
          f"({share['share']:.0%})  {' '.join(row['courses'])}\n")
    return out.getvalue()


def run_pipeline(cfg: RunConfig) -> tuple[dict, list[Path]]:
    """Analyze and write the report files; nothing is written if any stage fails."""
    report, state = analyze(cfg)
    out_dir = Path(cfg.out_dir)
    with _Stage("cli"):
        with tempfile.TemporaryDirectory() as tmp:
            tmp = Path(tmp)
            (tmp / JSON_NAME).write_text(render_json(report), encoding="utf-8")
            (tmp / TEXT_NAME).write_text(render_text(report), encoding="utf-8")
            with open(tmp / SHARE_NAME, "w", encoding="utf-8", newline="") as fh:
                semester.write_share_csv(state["shares"], fh)
            if cfg.export_format:
                ext = cfg.export_format
                for m, r in state["results"].items():
                    export_graph(state["projected"], tmp / f"courses_{m}.{ext}", ext,
                                 partition=r.partition, hubs=r.hubs, labels=state["course_names"])
                export_semester_network(state["semester"], tmp / f"semesters.{ext}", ext)
            out_dir.mkdir(parents=True, exist_ok=True)
            written = []
            for f in sorted(tmp.iterdir()):
                dest = out_dir / f.name
                shutil.move(str(f), dest)
                written.append(dest)
    return report, written
