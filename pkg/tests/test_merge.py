import random

import pytest

from oracles import oracle_full, oracle_no_drift, random_pair
from multimatch.alignment import Correspondence
from multimatch.errors import ForeignEntity, NonBijectiveAlignment
from multimatch.merge import MergeStrategy, merge, merge_full, merge_no_drift, select_roles
from multimatch.rdf import KnowledgeGraph, Literal, Origin, Triple


def kg(kg_id, n, origin=Origin.LEAF):
    return KnowledgeGraph(kg_id, tuple(Triple(f"http://{kg_id}/s{i}", "http://p", "http://o") for i in range(n)), origin)


def test_union_beats_leaf():
    u1, c = kg("union:0", 2, Origin.UNION), kg("C", 50)
    source, target = select_roles(c, u1)
    assert target.id == "union:0" and source.id == "C"


def test_larger_leaf_is_target_and_copied():
    big, small = kg("A", 10), kg("B", 5)
    source, target = select_roles(small, big)
    assert (source.id, target.id) == ("B", "A")
    assert target.origin is Origin.COPIED_LEAF and big.origin is Origin.LEAF


def test_leaf_size_tie_goes_to_larger_id():
    assert select_roles(kg("A", 3), kg("B", 3))[1].id == "B"


def test_later_union_is_target():
    u1, u2 = kg("union:0", 9, Origin.UNION), kg("union:1", 2, Origin.UNION)
    assert select_roles(u1, u2, {"union:0": 0, "union:1": 1})[1].id == "union:1"


S, T = "http://s/", "http://t/"


def test_full_rewrites_subject():
    src = KnowledgeGraph("s", (Triple(S + "s1", S + "p", S + "o1"),))
    tgt = KnowledgeGraph("t", (Triple(T + "t1", T + "q", T + "x"),))
    res = merge_full(tgt, src, [Correspondence(S + "s1", T + "t1")])
    assert Triple(T + "t1", S + "p", S + "o1") in res.union.triple_set
    assert res.union.origin is Origin.UNION


def test_no_drift_rules():
    src = KnowledgeGraph(
        "s",
        (
            Triple(S + "s1", S + "p", S + "o1"),
            Triple(S + "s2", S + "p", S + "o1"),
            Triple(S + "s2", S + "p", Literal("label")),
            Triple(S + "s3", S + "p", S + "s1"),
        ),
    )
    tgt = KnowledgeGraph("t", (Triple(T + "t1", T + "q", T + "x"),))
    alignment = [Correspondence(S + "s1", T + "t1"), Correspondence(T + "q", S + "p")]
    res = merge_no_drift(tgt, src, alignment, "u")
    assert set(res.added_triples) == {
        Triple(S + "s2", T + "q", S + "o1"),
        Triple(S + "s2", T + "q", Literal("label")),
    }
    assert res.skipped_count == 2 and res.union.id == "u"


def test_bijection_and_foreign_checks():
    src = KnowledgeGraph("s", (Triple(S + "a", S + "p", S + "b"),))
    tgt = KnowledgeGraph("t", (Triple(T + "a", T + "p", T + "b"),))
    with pytest.raises(NonBijectiveAlignment):
        merge_full(tgt, src, [Correspondence(S + "a", T + "a"), Correspondence(S + "a", T + "b")])
    with pytest.raises(NonBijectiveAlignment):
        merge_full(tgt, src, [Correspondence(S + "a", T + "a"), Correspondence(S + "b", T + "a")])
    with pytest.raises(ForeignEntity):
        merge_full(tgt, src, [Correspondence(S + "a", "http://else/x")])


def test_random_merges_against_oracle():
    rng = random.Random(23)
    for _ in range(100):
        src, tgt, alignment, mapping = random_pair(rng)
        nd = merge(tgt, src, alignment, MergeStrategy.NO_DRIFT)
        assert nd.union.triple_set == oracle_no_drift(tgt, src, mapping)
        full = merge(tgt, src, alignment, MergeStrategy.FULL)
        assert full.union.triple_set == oracle_full(tgt, src, mapping)
        assert not (set(mapping) & full.union.entities)
        assert tgt.triple_set <= nd.union.triple_set
        assert all(t.subject not in mapping for t in nd.added_triples)
