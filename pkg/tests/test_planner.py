import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multimatch import planner
from multimatch.alignment import DisjointSet
from multimatch.errors import ConfigError, TooFewSources
from multimatch.planner import (
    Direction, Linkage, Measure, OrderingSpec, agglomerate, make_plan, order_kgs,
    plan_all_pairs, plan_first_vs_rest, plan_im_order, plan_im_similarity,
    plan_tp_similarity, plan_windowing,
)
from multimatch.rdf import KgStats
from oracles import brute_force_mst, count_spanning_trees, random_sim, sim_from_distances, tree_weight


def edges_of(plan):
    return [(t.source, t.target) for t in plan.tasks]


def test_windowing_example():
    assert edges_of(plan_windowing("ABCD")) == [("A", "B"), ("B", "C"), ("C", "D")]


def test_first_vs_rest_example():
    assert edges_of(plan_first_vs_rest("ABCD")) == [("A", "B"), ("A", "C"), ("A", "D")]


def test_im_order_example():
    plan = plan_im_order("ABCD")
    assert [(t.source, t.target, t.produces) for t in plan.tasks] == [
        ("A", "B", "union:0"), ("union:0", "C", "union:1"), ("union:1", "D", "union:2"),
    ]
    assert plan.merge_after_match and plan.depth() == 3
    assert plan.leaves_under("union:2") == set("ABCD")


def test_all_pairs_has_no_closure():
    plan = plan_all_pairs(["b", "a", "c"])
    assert edges_of(plan) == [("a", "b"), ("a", "c"), ("b", "c")]
    assert not plan.closure_needed and not plan.merge_after_match


@pytest.mark.parametrize("n", range(2, 11))
def test_cardinalities(n):
    rng = random.Random(n)
    ids = [f"k{i}" for i in range(n)]
    sim = random_sim(rng, n)
    assert len(plan_all_pairs(ids)) == n * (n - 1) // 2
    for plan in (
        plan_windowing(ids), plan_first_vs_rest(ids), plan_im_order(ids), plan_tp_similarity(sim),
        *(plan_im_similarity(sim, l) for l in Linkage),
    ):
        assert len(plan) == n - 1


def test_too_few_sources():
    with pytest.raises(TooFewSources):
        plan_windowing(["only"])
    with pytest.raises(ConfigError):
        plan_all_pairs(["a", "a"])


def test_ordering_ties_and_reverse():
    stats = {"b": KgStats(1, 5, 10), "a": KgStats(1, 5, 10), "c": KgStats(2, 1, 3)}
    asc = order_kgs(stats, OrderingSpec(Measure.MODEL_SIZE, Direction.ASCENDING))
    desc = order_kgs(stats, OrderingSpec(Measure.MODEL_SIZE, Direction.DESCENDING))
    assert asc == ["c", "a", "b"]
    assert desc == asc[::-1]
    assert order_kgs(stats, OrderingSpec(Measure.CLASSES, Direction.DESCENDING)) == ["c", "b", "a"]


def test_ordering_parse():
    assert OrderingSpec.parse("ModelSize,Desc") == OrderingSpec(Measure.MODEL_SIZE, Direction.DESCENDING)
    assert OrderingSpec.parse("instancesascending").name == "InstancesAscending"
    assert len(OrderingSpec.all()) == 6
    with pytest.raises(ConfigError):
        OrderingSpec.parse("Size")


def test_cayley_count_of_oracle():
    assert count_spanning_trees(4) == 16


def test_mst_matches_exhaustive_oracle():
    rng = random.Random(5)
    for _ in range(50):
        sim = random_sim(rng, rng.randint(2, 6))
        plan = plan_tp_similarity(sim)
        assert tree_weight(sim, edges_of(plan)) == pytest.approx(brute_force_mst(sim), abs=1e-9)


def test_mst_keeps_intra_group_edges():
    d = [[0, 0.9, 0.1, 0.8], [0.9, 0, 0.85, 0.15], [0.1, 0.85, 0, 0.95], [0.8, 0.15, 0.95, 0]]
    plan = plan_tp_similarity(sim_from_distances("ABCD", d))
    assert {("A", "C"), ("B", "D")} <= set(edges_of(plan))


def test_mst_ties_broken_by_pair_id():
    d = np.full((3, 3), 0.5)
    np.fill_diagonal(d, 0)
    assert edges_of(plan_tp_similarity(sim_from_distances("CBA", d))) == [("A", "B"), ("A", "C")]


@pytest.mark.parametrize("linkage", list(Linkage))
def test_two_tight_pairs_merge_first(linkage):
    d = [[0, 0.9, 0.1, 0.8], [0.9, 0, 0.85, 0.12], [0.1, 0.85, 0, 0.95], [0.8, 0.12, 0.95, 0]]
    plan = plan_im_similarity(sim_from_distances("ABCD", d), linkage)
    assert [(t.source, t.target) for t in plan.tasks[:2]] == [("A", "C"), ("B", "D")]
    assert (plan.tasks[2].source, plan.tasks[2].target) == ("union:0", "union:1")


def test_single_and_complete_differ_on_chain():
    d = [
        [0, 0.1, 0.25, 0.45],
        [0.1, 0, 0.15, 0.35],
        [0.25, 0.15, 0, 0.2],
        [0.45, 0.35, 0.2, 0],
    ]
    sim = sim_from_distances("ABCD", d)
    single = plan_im_similarity(sim, Linkage.SINGLE)
    complete = plan_im_similarity(sim, Linkage.COMPLETE)
    assert edges_of(single) == [("A", "B"), ("C", "union:0"), ("D", "union:1")]
    assert edges_of(complete) == [("A", "B"), ("C", "D"), ("union:0", "union:1")]


@pytest.mark.parametrize("linkage", ["single", "average", "complete"])
def test_hac_heights_match_scipy(linkage):
    hierarchy = pytest.importorskip("scipy.cluster.hierarchy")
    from scipy.spatial.distance import squareform

    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(2, 8)
        sim = random_sim(rng, n)
        d = sim.distances()
        np.fill_diagonal(d, 0)
        ours = [dist for _, _, dist in agglomerate(sim.ids, d, Linkage(linkage))]
        ref = hierarchy.linkage(squareform(d, checks=False), method=linkage)[:, 2]
        assert np.allclose(sorted(ours), sorted(ref), atol=1e-12)
        assert np.allclose(ours, sorted(ours), atol=1e-12)  # monotone for these linkages


@settings(max_examples=40)
@given(st.integers(2, 9), st.randoms(use_true_random=False))
def test_plans_are_spanning_trees(n, rng):
    sim = random_sim(rng, n)
    for plan in (plan_tp_similarity(sim), plan_windowing(sim.ids), plan_first_vs_rest(sim.ids)):
        ds = DisjointSet(sim.ids)
        assert all(ds.union(a, b) for a, b in edges_of(plan))
    for linkage in Linkage:
        plan = plan_im_similarity(sim, linkage)
        used = [r for t in plan.tasks for r in (t.source, t.target)]
        assert len(used) == len(set(used))  # every node consumed once
        assert plan.leaves_under(plan.tasks[-1].produces) == set(sim.ids)
        for t in plan.tasks:
            assert all(d < t.index for d in plan.dependencies(t))


def test_make_plan_dispatch():
    stats = {k: KgStats(1, 1, i) for i, k in enumerate("abc")}
    plan = make_plan(planner.TP_WINDOW, stats, ordering=OrderingSpec.parse("ModelSizeDesc"))
    assert edges_of(plan) == [("c", "b"), ("b", "a")] and plan.variant == "ModelSizeDescending"
    with pytest.raises(ConfigError):
        make_plan("nope", stats)
    with pytest.raises(ConfigError):
        make_plan(planner.TP_SIM, stats)


def test_dump_format():
    assert plan_im_order("AB").dump() == "0\tA\tB\ttrue\n"
