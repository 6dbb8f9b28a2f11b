import math
import random
import warnings

import pytest
from hypothesis import given, strategies as st

from builders import cohort_from_takes, rec
from coursenet.ingest import Cohort, Status
from coursenet.netcore import (
    AggregatedGraph, BipartiteGraph, CourseGraph, build_bipartite, detect_hubs_dd, edge_key,
    project_weighted, read_course_list, remove_nodes, strength,
)
from oracles import pair_counts, random_bipartite

takes_strategy = st.dictionaries(
    st.sampled_from([f"s{i}" for i in range(12)]),
    st.sets(st.sampled_from([f"c{i}" for i in range(8)]), max_size=8),
    max_size=12,
)


def star(center, leaves, w=1):
    return CourseGraph.from_weighted_edges([(center, x, w) for x in leaves])


def with_strengths(values):
    """Graph whose node n<i> has strength values[i], carried entirely by self-loops."""
    nodes = [f"n{i}" for i in range(len(values))]
    return AggregatedGraph(frozenset(nodes), {}, dict(zip(nodes, values)))


class TestBipartite:
    def test_empty(self):
        bg = build_bipartite(Cohort(()))
        assert not bg.students and not bg.courses and not bg.edges

    def test_retake_single_edge(self):
        c = Cohort((rec("s1", "A", 2015, status=Status.COMPLETED_FAIL), rec("s1", "A", 2016)))
        bg = build_bipartite(c)
        assert bg.edges == {("s1", "A")} == {(r.student_id, r.course_id) for r in c.records}

    def test_disjoint(self):
        bg = build_bipartite(cohort_from_takes({"s1": {"A"}, "s2": {"B"}}))
        assert bg.edges == {("s1", "A"), ("s2", "B")}

    def test_rejects_dangling_edge(self):
        with pytest.raises(ValueError):
            BipartiteGraph(frozenset({"s"}), frozenset({"A"}), frozenset({("s", "B")}))


class TestProjection:
    def test_two_students(self):
        g = project_weighted(build_bipartite(cohort_from_takes({"S1": {"A", "B"}, "S2": {"A", "B", "C"}})))
        assert g.edges == {("A", "B"): 2, ("A", "C"): 1, ("B", "C"): 1}

    def test_single_course_students(self):
        g = project_weighted(build_bipartite(cohort_from_takes({"s1": {"A"}, "s2": {"B"}, "s3": {"C"}})))
        assert not g.edges and g.nodes == {"A", "B", "C"}

    @pytest.mark.parametrize("k", [1, 2, 5, 9])
    def test_one_student_complete_graph(self, k):
        g = project_weighted(build_bipartite(cohort_from_takes({"s": {f"c{i}" for i in range(k)}})))
        assert len(g.edges) == k * (k - 1) // 2
        assert set(g.edges.values()) <= {1}

    @given(takes_strategy)
    def test_matches_pair_counting(self, takes):
        g = project_weighted(build_bipartite(cohort_from_takes(takes)))
        assert g.edges == pair_counts(takes)

    @given(takes_strategy)
    def test_total_weight_identity(self, takes):
        g = project_weighted(build_bipartite(cohort_from_takes(takes)))
        assert g.total_weight() == sum(len(c) * (len(c) - 1) // 2 for c in takes.values())

    def test_random_instances_against_oracle(self):
        rng = random.Random(3)
        for _ in range(30):
            takes = random_bipartite(rng)
            g = project_weighted(build_bipartite(cohort_from_takes(takes)))
            assert g.edges == pair_counts(takes)


class TestCourseGraph:
    def test_canonical_keys_and_symmetry(self):
        g = CourseGraph.from_weighted_edges([("b", "a", 2), ("a", "b", 1)])
        assert g.edges == {("a", "b"): 3}
        assert g.weight("a", "b") == g.weight("b", "a") == 3

    def test_rejects_non_canonical(self):
        with pytest.raises(ValueError):
            CourseGraph(frozenset("ab"), {("b", "a"): 1})

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            edge_key("a", "a")

    def test_rejects_zero_weight(self):
        with pytest.raises(ValueError):
            CourseGraph(frozenset("ab"), {("a", "b"): 0})


class TestStrength:
    def test_isolated(self):
        assert strength(CourseGraph(frozenset({"a"}), {}), "a") == 0

    def test_sum(self):
        g = CourseGraph.from_weighted_edges([("a", "b", 2), ("a", "c", 3)])
        assert strength(g, "a") == 5

    def test_missing(self):
        with pytest.raises(KeyError):
            strength(CourseGraph(frozenset({"a"}), {}), "z")

    @given(takes_strategy)
    def test_handshake(self, takes):
        g = project_weighted(build_bipartite(cohort_from_takes(takes)))
        assert sum(strength(g, v) for v in g.nodes) == 2 * sum(w for w in g.edges.values())

    def test_aggregated_includes_self_loop(self):
        g = AggregatedGraph(frozenset("ab"), {("a", "b"): 1}, {"a": 4})
        assert strength(g, "a") == 5


class TestHubsDD:
    def test_all_equal_all_hubs(self):
        g = CourseGraph.from_weighted_edges([("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])
        assert detect_hubs_dd(g) == g.nodes

    def test_star_center_is_hub(self):
        g = CourseGraph.from_weighted_edges([("h", "x", 2), ("h", "y", 2), ("h", "z", 2), ("h", "w", 4)])
        s = g.strengths()
        mean = sum(s.values()) / len(s)
        std = math.sqrt(sum((v - mean) ** 2 for v in s.values()) / len(s))
        assert detect_hubs_dd(g) == {v for v in s if s[v] >= mean + std} == {"h"}

    @pytest.mark.parametrize("values, threshold, hubs", [
        # mean 4, population std sqrt(12)
        ([10, 2, 2, 2], 4 + math.sqrt(12), {"n0"}),
        # mean 4, population std sqrt(3)
        ([5, 5, 5, 1], 4 + math.sqrt(3), set()),
    ])
    def test_arithmetic(self, values, threshold, hubs):
        hand_mean = sum(values) / len(values)
        assert hand_mean == 4
        assert detect_hubs_dd(with_strengths(values)) == hubs
        assert all((v >= threshold) == (f"n{i}" in hubs) for i, v in enumerate(values))

    def test_boundary_inclusive(self):
        # strengths {2, 2, 0, 0}: mean 1, std 1, threshold exactly 2
        g = CourseGraph.from_weighted_edges([("a", "b", 2)], nodes="cd")
        assert detect_hubs_dd(g) == {"a", "b"}

    def test_needs_two_nodes(self):
        with pytest.raises(ValueError):
            detect_hubs_dd(CourseGraph(frozenset({"a"}), {}))

    @given(takes_strategy, st.randoms(use_true_random=False))
    def test_relabel_invariant(self, takes, rnd):
        g = project_weighted(build_bipartite(cohort_from_takes(takes)))
        if g.n < 2:
            return
        names = sorted(g.nodes)
        shuffled = names[:]
        rnd.shuffle(shuffled)
        ren = {a: "z" + b for a, b in zip(names, shuffled)}
        h = CourseGraph.from_weighted_edges([(ren[a], ren[b], w) for (a, b), w in g.edges.items()],
                                            nodes=ren.values())
        assert {ren[v] for v in detect_hubs_dd(g)} == detect_hubs_dd(h)


class TestRemoveNodes:
    def test_empty_set_identity(self):
        g = star("c", "xyz")
        assert remove_nodes(g, set()) == g

    def test_star_center(self):
        g = remove_nodes(star("c", "xyz"), {"c"})
        assert g.nodes == set("xyz") and not g.edges

    def test_triangle(self):
        g = CourseGraph.from_weighted_edges([("A", "B", 1), ("B", "C", 7), ("A", "C", 2)])
        out = remove_nodes(g, {"A"})
        assert out.edges == {k: w for k, w in g.edges.items() if "A" not in k} == {("B", "C"): 7}

    def test_unknown_id_warns(self):
        with pytest.warns(UserWarning, match="not in graph"):
            out = remove_nodes(star("c", "xy"), {"c", "ghost"})
        assert out.nodes == {"x", "y"}

    @given(takes_strategy, st.sets(st.sampled_from([f"c{i}" for i in range(8)])))
    def test_surviving_weights_unchanged(self, takes, hubs):
        g = project_weighted(build_bipartite(cohort_from_takes(takes)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = remove_nodes(g, hubs)
        for k, w in out.edges.items():
            assert g.edges[k] == w
        assert out.nodes == g.nodes - hubs


def test_read_course_list(tmp_path):
    p = tmp_path / "mandatory.txt"
    p.write_text("# core courses\nCS101\n\n  CS102  # intro\n#CS103\n", encoding="utf-8")
    assert read_course_list(p) == ["CS101", "CS102"]
