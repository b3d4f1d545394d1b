"""Synthetic multi-source corpora with gold standards known by construction.

Every source holds ``entities_per_source`` typed, labelled instances drawn
from three pools:

* a global core shared by all sources (``overlap_ratio * cross_group_factor``
  of the entities),
* a core shared by the sources of one topic group (the rest of
  ``overlap_ratio``),
* private entities.

Labels of group entities and the free-text comments of every entity use the
group's topic vocabulary, so textual similarity separates the groups. Each
source also declares the same small schema under its own namespace. With
``label_noise = 0`` equal labels identify equal concepts.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from itertools import combinations, product
from pathlib import Path
from typing import Sequence

from . import _vocab
from .alignment import Alignment, Correspondence, load_alignment, save_alignment
from .errors import InvalidSpec
from .evaluation import Completeness, GoldStandard
from .rdf import (
    OWL_CLASS,
    OWL_OBJECT_PROPERTY,
    RDF_TYPE,
    RDFS_COMMENT,
    RDFS_LABEL,
    KnowledgeGraph,
    Literal,
    Triple,
    read_ntriples,
    write_ntriples,
)

MANIFEST = "manifest.json"


@dataclass(frozen=True)
class CorpusSpec:
    num_sources: int = 4
    entities_per_source: int = 50
    topic_groups: int | tuple[tuple[int, ...], ...] = 1
    overlap_ratio: float = 0.5
    label_noise: float = 0.0
    distractor_sources: int = 0
    seed: int = 0
    cross_group_factor: float = 0.5
    relation_rate: float = 0.5
    comment_words: int = 4

    def validate(self) -> None:
        if self.num_sources < 2:
            raise InvalidSpec(f"numSources must be >= 2, got {self.num_sources}")
        if self.entities_per_source < 1:
            raise InvalidSpec("entitiesPerSource must be >= 1")
        for name in ("overlap_ratio", "label_noise", "cross_group_factor", "relation_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidSpec(f"{name} must lie in [0, 1], got {value}")
        if self.distractor_sources < 0:
            raise InvalidSpec("distractorSources must be >= 0")
        groups = self.groups()
        if len(groups) > len(_vocab.TOPICS):
            raise InvalidSpec(f"at most {len(_vocab.TOPICS)} topic groups are supported")
        flat = sorted(i for g in groups for i in g)
        if flat != list(range(self.total_sources)):
            raise InvalidSpec("topic groups must partition the sources (distractors included)")
        if any(not g for g in groups):
            raise InvalidSpec("empty topic group")

    @property
    def total_sources(self) -> int:
        return self.num_sources + self.distractor_sources

    def groups(self) -> list[list[int]]:
        if isinstance(self.topic_groups, int):
            k = self.topic_groups
            if k < 1:
                raise InvalidSpec("topic_groups must be >= 1")
            return [list(range(g, self.total_sources, k)) for g in range(k)]
        return [list(g) for g in self.topic_groups]

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusSpec":
        aliases = {
            "numSources": "num_sources",
            "entitiesPerSource": "entities_per_source",
            "topicGroups": "topic_groups",
            "overlapRatio": "overlap_ratio",
            "labelNoise": "label_noise",
            "distractorSources": "distractor_sources",
            "crossGroupFactor": "cross_group_factor",
            "relationRate": "relation_rate",
            "commentWords": "comment_words",
        }
        kwargs = {aliases.get(k, k): v for k, v in data.items()}
        unknown = set(kwargs) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidSpec(f"unknown corpus spec fields: {sorted(unknown)}")
        if isinstance(kwargs.get("topic_groups"), list):
            kwargs["topic_groups"] = tuple(tuple(g) for g in kwargs["topic_groups"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Corpus:
    spec: CorpusSpec
    kgs: list[KnowledgeGraph]
    golds: list[GoldStandard]
    distractors: list[str] = field(default_factory=list)
    concept_of: dict[str, str] = field(default_factory=dict)

    def kg(self, kg_id: str) -> KnowledgeGraph:
        return next(k for k in self.kgs if k.id == kg_id)


def source_id(index: int) -> str:
    return f"kg{index:02d}"


def _namespace(sid: str) -> str:
    return f"http://{sid}.example.org/"


def _camel(label: str) -> str:
    words = label.split()
    return words[0] + "".join(w.capitalize() for w in words[1:])


def _typo(label: str, rng: random.Random) -> str:
    words = label.split()
    i = rng.randrange(len(words))
    w = words[i]
    j = rng.randrange(len(w))
    words[i] = w[: j + 1] + w[j] + w[j + 1 :]
    return " ".join(words)


def _labels(words: Sequence[str], count: int, rng: random.Random) -> list[str]:
    combos = [" ".join(c) for c in product(words, repeat=3) if len(set(c)) == 3]
    if count > len(combos):
        raise InvalidSpec(f"vocabulary too small for {count} distinct labels")
    return rng.sample(combos, count)


@dataclass(frozen=True)
class _Concept:
    id: str
    label: str
    class_index: int


def generate(spec: CorpusSpec) -> Corpus:
    spec.validate()
    rng = random.Random(spec.seed)
    groups = spec.groups()
    group_of = {s: g for g, members in enumerate(groups) for s in members}
    e = spec.entities_per_source
    n_global = round(spec.overlap_ratio * spec.cross_group_factor * e)
    n_group = round(spec.overlap_ratio * e) - n_global
    n_private = e - n_global - n_group
    n_classes = len(_vocab.CLASS_LABELS)

    # concept pools
    global_labels = _labels(_vocab.NEUTRAL, n_global, rng)
    global_core = [_Concept(f"g{i}", lab, rng.randrange(n_classes)) for i, lab in enumerate(global_labels)]
    group_cores, private = {}, {}
    for g, members in enumerate(groups):
        labels = _labels(_vocab.TOPICS[g], n_group + n_private * len(members), rng)
        group_cores[g] = [
            _Concept(f"t{g}c{i}", lab, rng.randrange(n_classes)) for i, lab in enumerate(labels[:n_group])
        ]
        rest = labels[n_group:]
        for k, s in enumerate(members):
            chunk = rest[k * n_private : (k + 1) * n_private]
            private[s] = [_Concept(f"s{s}p{i}", lab, rng.randrange(n_classes)) for i, lab in enumerate(chunk)]

    shared_schema = spec.overlap_ratio > 0
    kgs: list[KnowledgeGraph] = []
    iri_of: dict[tuple[int, str], str] = {}
    concept_of: dict[str, str] = {}
    for s in range(spec.total_sources):
        sid = source_id(s)
        ns = _namespace(sid)
        g = group_of[s]
        topic = _vocab.TOPICS[g]
        triples: list[Triple] = []

        prefix = "" if shared_schema else f"{sid} "
        class_iris = []
        for k, label in enumerate(_vocab.CLASS_LABELS):
            iri = f"{ns}ontology/{label.capitalize()}"
            class_iris.append(iri)
            triples += [Triple(iri, RDF_TYPE, OWL_CLASS), Triple(iri, RDFS_LABEL, Literal(prefix + label))]
            iri_of[(s, f"class{k}")] = iri
            concept_of[iri] = f"class{k}"
        prop_iris = []
        for k, label in enumerate(_vocab.PROPERTY_LABELS):
            iri = f"{ns}ontology/{_camel(label)}"
            prop_iris.append(iri)
            triples += [
                Triple(iri, RDF_TYPE, OWL_OBJECT_PROPERTY),
                Triple(iri, RDFS_LABEL, Literal(prefix + label)),
            ]
            iri_of[(s, f"prop{k}")] = iri
            concept_of[iri] = f"prop{k}"

        concepts = global_core + group_cores[g] + private[s]
        instance_iris = []
        for c in concepts:
            iri = f"{ns}resource/{c.label.title().replace(' ', '_')}"
            label = _typo(c.label, rng) if rng.random() < spec.label_noise else c.label
            comment = " ".join(rng.choice(topic) for _ in range(spec.comment_words))
            triples += [
                Triple(iri, RDF_TYPE, class_iris[c.class_index]),
                Triple(iri, RDFS_LABEL, Literal(label, "en")),
                Triple(iri, RDFS_COMMENT, Literal(comment.capitalize() + ".", "en")),
            ]
            instance_iris.append(iri)
            iri_of[(s, c.id)] = iri
            concept_of[iri] = c.id
        for iri in instance_iris:
            if len(instance_iris) > 1 and rng.random() < spec.relation_rate:
                other = rng.choice(instance_iris)
                if other != iri:
                    triples.append(Triple(iri, rng.choice(prop_iris), other))
        kgs.append(KnowledgeGraph(sid, tuple(triples)))

    golds = []
    schema_ids = [f"class{k}" for k in range(n_classes)] + [
        f"prop{k}" for k in range(len(_vocab.PROPERTY_LABELS))
    ]
    for i, j in combinations(range(spec.num_sources), 2):
        shared = [cid for (s, cid) in iri_of if s == i and (j, cid) in iri_of]
        if not shared_schema:
            shared = [cid for cid in shared if cid not in schema_ids]
        gold = Alignment(Correspondence(iri_of[(i, cid)], iri_of[(j, cid)]) for cid in shared)
        golds.append(GoldStandard((source_id(i), source_id(j)), gold, Completeness.COMPLETE))

    distractors = [source_id(s) for s in range(spec.num_sources, spec.total_sources)]
    return Corpus(spec, kgs, golds, distractors, concept_of)


def mask_gold(gold: GoldStandard, fraction: float, seed: int = 0) -> GoldStandard:
    """Drop a seeded ``fraction`` of the gold correspondences, marking the result partial."""
    items = gold.alignment.sorted()
    rng = random.Random(seed)
    keep = rng.sample(items, len(items) - round(fraction * len(items)))
    return GoldStandard(gold.pair, Alignment(keep), Completeness.PARTIAL)


def gold_filename(pair: tuple[str, str]) -> str:
    return f"{pair[0]}__{pair[1]}.tsv"


def write_corpus(corpus: Corpus, directory: str | Path) -> Path:
    """Write sources, gold standards and ``manifest.json``; return the manifest path."""
    directory = Path(directory)
    (directory / "sources").mkdir(parents=True, exist_ok=True)
    (directory / "gold").mkdir(parents=True, exist_ok=True)
    sources = []
    for kg in corpus.kgs:
        rel = f"sources/{kg.id}.nt"
        write_ntriples(kg, directory / rel)
        sources.append({"id": kg.id, "file": rel, "distractor": kg.id in corpus.distractors})
    golds = []
    for g in corpus.golds:
        rel = f"gold/{gold_filename(g.pair)}"
        save_alignment(g.alignment, directory / rel)
        golds.append({"pair": list(g.pair), "file": rel, "completeness": g.completeness.value})
    manifest = {"spec": corpus.spec.to_dict(), "sources": sources, "golds": golds}
    path = directory / MANIFEST
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_sources(directory: str | Path) -> list[KnowledgeGraph]:
    """Every ``*.nt`` file of ``directory``, id = file stem, sorted by id."""
    return [read_ntriples(p) for p in sorted(Path(directory).glob("*.nt"))]


def read_golds(directory: str | Path, completeness: Completeness = Completeness.COMPLETE) -> list[GoldStandard]:
    """Gold files named ``<kgA>__<kgB>.tsv``."""
    out = []
    for p in sorted(Path(directory).glob("*.tsv")):
        a, sep, b = p.stem.partition("__")
        if not sep:
            raise InvalidSpec(f"gold file {p.name} is not named <kgA>__<kgB>.tsv")
        out.append(GoldStandard((a, b), load_alignment(p), completeness))
    return out
