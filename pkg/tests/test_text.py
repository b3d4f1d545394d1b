import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multimatch._porter import stem
from multimatch.rdf import RDFS_LABEL, KnowledgeGraph, Literal, Triple
from multimatch.text import (
    STOPWORDS, TextProfile, TokenDocument, build_profiles, cosine, extract_document, idf,
    profile_kgs, similarity_matrix, tokenize_fragment, tokenize_literal,
)


def test_literal_document():
    kg = KnowledgeGraph("k", (Triple("urn:x", RDFS_LABEL, Literal("Star Wars", "en")),))
    assert sorted(extract_document(kg).tokens) == ["star", "war"]


def test_fragment_document():
    kg = KnowledgeGraph("k", (Triple("http://x/Jedi_Knight", "urn:p", "urn:o"),))
    assert sorted(extract_document(kg).tokens) == ["jedi", "knight"]


@pytest.mark.parametrize(
    "text, tokens",
    [("The Force", ["forc"]), ("Ships. Ships!", ["ship", "ship"]), ("", [])],
)
def test_tokenize_literal(text, tokens):
    assert tokenize_literal(text) == tokens


@pytest.mark.parametrize(
    "fragment, tokens",
    [("hasPartOf", ["ha", "part"]), ("star-wars_ship", ["star", "war", "ship"]), ("X", ["x"])],
)
def test_tokenize_fragment(fragment, tokens):
    assert tokenize_fragment(fragment) == tokens


def test_non_textual_literals_ignored():
    kg = KnowledgeGraph(
        "k",
        (Triple("urn:x", "urn:p", Literal("42", None, "http://www.w3.org/2001/XMLSchema#integer")),),
    )
    assert extract_document(kg).tokens == ()


def test_idf_formula():
    assert idf(2, 2) == 1.0
    assert idf(3, 1) == pytest.approx(math.log(2) + 1)


def test_cosine_of_unnormalized_counts():
    docs = [TokenDocument("a", ("x", "y")), TokenDocument("b", ("x", "z")), TokenDocument("c", ("y", "z"))]
    a, b, _ = build_profiles(docs)
    # every term has df = 2 here, so idf is uniform
    assert cosine(a, b) == pytest.approx(0.5, abs=1e-12)


def test_empty_profile():
    a, b = build_profiles([TokenDocument("a", ()), TokenDocument("b", ("x",))])
    assert not a
    assert cosine(a, b) == 0.0
    sim = similarity_matrix([a, b])
    assert sim.values[0, 0] == 0.0 and sim.values[1, 1] == 1.0


def test_stopwords_keep_has():
    assert "has" not in STOPWORDS and "the" in STOPWORDS and "of" in STOPWORDS


# Published examples for the 1980 algorithm.
PORTER_EXAMPLES = {
    "caresses": "caress", "ponies": "poni", "ties": "ti", "caress": "caress", "cats": "cat",
    "feed": "feed", "agreed": "agre", "plastered": "plaster", "bled": "bled", "motoring": "motor",
    "sing": "sing", "conflated": "conflat", "troubled": "troubl", "sized": "size", "hopping": "hop",
    "tanned": "tan", "falling": "fall", "hissing": "hiss", "fizzed": "fizz", "failing": "fail",
    "filing": "file", "happy": "happi", "sky": "sky", "relational": "relat",
    "conditional": "condit", "rational": "ration", "valenci": "valenc", "digitizer": "digit",
    "conformabli": "conform", "radicalli": "radic", "differentli": "differ", "vileli": "vile",
    "analogousli": "analog", "vietnamization": "vietnam", "predication": "predic",
    "operator": "oper", "feudalism": "feudal", "decisiveness": "decis", "hopefulness": "hope",
    "callousness": "callous", "formaliti": "formal", "sensitiviti": "sensit",
    "sensibiliti": "sensibl", "triplicate": "triplic", "formative": "form", "formalize": "formal",
    "electriciti": "electr", "electrical": "electr", "hopeful": "hope", "goodness": "good",
    "revival": "reviv", "allowance": "allow", "inference": "infer", "airliner": "airlin",
    "gyroscopic": "gyroscop", "adjustable": "adjust", "defensible": "defens",
    "irritant": "irrit", "replacement": "replac", "adjustment": "adjust", "dependent": "depend",
    "adoption": "adopt", "homologou": "homolog", "communism": "commun", "activate": "activ",
    "angulariti": "angular", "homologous": "homolog", "effective": "effect", "bowdlerize": "bowdler",
    "probate": "probat", "rate": "rate", "cease": "ceas", "controll": "control", "roll": "roll",
}


@pytest.mark.parametrize("word, expected", sorted(PORTER_EXAMPLES.items()))
def test_porter_published_examples(word, expected):
    assert stem(word) == expected


def test_porter_agrees_with_nltk_original():
    porter = pytest.importorskip("nltk.stem.porter")
    ref = porter.PorterStemmer(mode=porter.PorterStemmer.ORIGINAL_ALGORITHM)
    words = {w for text in (
        "knowledge graphs matching multiple sources transitive closure incremental merge "
        "generalization operational oscillators relativity hopefully agreement ponies "
        "universities dying lying skiing happily sensational conditionally nationalism "
        "starships galaxies nebulae mutants sorcerers lighthouses shipwrecks dragons wizards"
    ).split() for w in [text]}
    for w in sorted(words):
        assert stem(w) == ref.stem(w), w


_words = st.lists(st.sampled_from(["alpha", "beta", "gamma", "delta", "eps", "zeta"]), max_size=12)


@settings(max_examples=50)
@given(st.lists(_words, min_size=2, max_size=5))
def test_profiles_match_sklearn(docs):
    text = pytest.importorskip("sklearn.feature_extraction.text")
    if not any(docs):
        return
    vec = text.TfidfVectorizer(
        analyzer=lambda d: d, smooth_idf=True, norm="l2", sublinear_tf=False, lowercase=False
    )
    matrix = vec.fit_transform(docs).toarray()
    vocab = vec.get_feature_names_out()
    profiles = build_profiles([TokenDocument(str(i), tuple(d)) for i, d in enumerate(docs)])
    for row, p in zip(matrix, profiles):
        expected = {t: w for t, w in zip(vocab, row) if w > 0}
        assert p.weights.keys() == expected.keys()
        for t, w in expected.items():
            assert p.weights[t] == pytest.approx(w, abs=1e-12)
    sim = similarity_matrix(profiles).values
    ref = np.clip(matrix @ matrix.T, 0, 1)
    np.fill_diagonal(ref, [1.0 if any(d) else 0.0 for d in docs])
    assert np.allclose(sim, ref, atol=1e-12)


@settings(max_examples=30)
@given(st.lists(_words, min_size=2, max_size=5))
def test_similarity_matrix_properties(docs):
    profiles = build_profiles([TokenDocument(str(i), tuple(d)) for i, d in enumerate(docs)])
    v = similarity_matrix(profiles).values
    assert np.array_equal(v, v.T)
    assert ((v >= 0) & (v <= 1)).all()


def test_topic_groups_separate(tmp_path):
    from multimatch.testbed import CorpusSpec, generate

    corpus = generate(CorpusSpec(num_sources=4, entities_per_source=30, topic_groups=2, seed=3))
    sim = similarity_matrix(profile_kgs(corpus.kgs))
    groups = corpus.spec.groups()
    same = [sim.values[a, b] for g in groups for a in g for b in g if a < b]
    cross = [sim.values[a, b] for a in groups[0] for b in groups[1]]
    assert min(same) > max(cross)


def test_profile_weights_unit_norm():
    (p,) = build_profiles([TokenDocument("a", ("x", "x", "y"))])
    assert isinstance(p, TextProfile)
    assert math.fsum(w * w for w in p.weights.values()) == pytest.approx(1.0)
