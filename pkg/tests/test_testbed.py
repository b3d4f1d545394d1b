import hashlib
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from multimatch.errors import InvalidSpec
from multimatch.evaluation import Completeness
from multimatch.experiment import load_golds, load_kgs
from multimatch.matcher import BaselineMatcher
from multimatch.testbed import CorpusSpec, generate, mask_gold, write_corpus


def digest(directory):
    h = hashlib.sha256()
    for p in sorted(directory.rglob("*")):
        if p.is_file():
            h.update(str(p.relative_to(directory)).encode())
            h.update(p.read_bytes())
    return h.hexdigest()


def test_oracle_two_sources():
    corpus = generate(CorpusSpec(num_sources=2, entities_per_source=40, overlap_ratio=1.0, seed=4))
    (gold,) = corpus.golds
    assert BaselineMatcher().match(*corpus.kgs) == gold.alignment
    assert len(gold.alignment) == 40 + 6  # instances plus three classes and three properties


def test_zero_overlap_gives_empty_gold():
    corpus = generate(CorpusSpec(num_sources=3, overlap_ratio=0.0))
    assert all(len(g.alignment) == 0 for g in corpus.golds)
    assert all(len(BaselineMatcher().match(a, b)) == 0 for a, b in combinations(corpus.kgs, 2))


def test_deterministic_directory(tmp_path):
    spec = CorpusSpec(num_sources=3, entities_per_source=20, label_noise=0.2, seed=9)
    write_corpus(generate(spec), tmp_path / "a")
    write_corpus(generate(spec), tmp_path / "b")
    assert digest(tmp_path / "a") == digest(tmp_path / "b")


def test_roundtrip_through_files(tmp_path):
    corpus = generate(CorpusSpec(num_sources=3, entities_per_source=10, distractor_sources=1))
    write_corpus(corpus, tmp_path)
    kgs = load_kgs(tmp_path)
    assert [k.id for k in kgs] == ["kg00", "kg01", "kg02", "kg03"]
    assert all(a == b for a, b in zip(kgs, corpus.kgs))
    golds = load_golds(tmp_path)
    assert [g.pair for g in golds] == [g.pair for g in corpus.golds]
    assert all(a.alignment == b.alignment for a, b in zip(golds, corpus.golds))


def test_distractors_have_no_gold():
    corpus = generate(CorpusSpec(num_sources=3, distractor_sources=2, entities_per_source=10))
    assert corpus.distractors == ["kg03", "kg04"]
    assert len(corpus.kgs) == 5
    assert all(not set(g.pair) & set(corpus.distractors) for g in corpus.golds)
    assert len(corpus.golds) == 3


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(num_sources=1),
        dict(overlap_ratio=1.5),
        dict(topic_groups=5),
        dict(num_sources=3, topic_groups=((0, 1), (1, 2))),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(InvalidSpec):
        generate(CorpusSpec(**kwargs))


def test_spec_from_dict_aliases():
    spec = CorpusSpec.from_dict({"numSources": 3, "topicGroups": [[0, 2], [1]], "labelNoise": 0.1})
    assert spec.num_sources == 3 and spec.groups() == [[0, 2], [1]]
    with pytest.raises(InvalidSpec):
        CorpusSpec.from_dict({"bogus": 1})


def test_mask_gold():
    corpus = generate(CorpusSpec(num_sources=2, entities_per_source=20))
    masked = mask_gold(corpus.golds[0], 0.25, seed=1)
    assert masked.completeness is Completeness.PARTIAL
    assert set(masked.alignment) < set(corpus.golds[0].alignment)
    assert len(masked.alignment) == len(corpus.golds[0].alignment) - round(0.25 * len(corpus.golds[0].alignment))


@settings(max_examples=15, deadline=None)
@given(
    st.integers(2, 5), st.integers(1, 25), st.integers(1, 3), st.floats(0, 1), st.floats(0, 1),
    st.integers(0, 1000),
)
def test_gold_matches_construction(n, e, groups, overlap, noise, seed):
    spec = CorpusSpec(
        num_sources=n, entities_per_source=e, topic_groups=min(groups, n), overlap_ratio=overlap,
        label_noise=noise, seed=seed,
    )
    corpus = generate(spec)
    concept = corpus.concept_of
    by_source = {kg.id: {concept[x] for x in kg.entities if x in concept} for kg in corpus.kgs}
    for g in corpus.golds:
        a, b = g.pair
        assert g.alignment.is_one_to_one()
        for c in g.alignment:
            assert concept[c.entity_one] == concept[c.entity_two]
        shared = by_source[a] & by_source[b]
        if overlap > 0:
            assert len(g.alignment) == len(shared)
        else:
            assert len(g.alignment) == 0
