"""
Repairing an all-pairs similarity graph
=======================================

All-pairs matching yields a graph with one node per entity. Suspicious
edges are those whose endpoints share few neighbours. This script shows
the error degree on a four-node example, then filters the all-pairs output
of a noisy corpus at several thresholds.
"""

import random

from multimatch.alignment import Alignment, Correspondence
from multimatch.evaluation import evaluate_alignment
from multimatch.experiment import RunConfig, kinds_of, run_experiment
from multimatch.orchestrator import leaf_membership
from multimatch.repair import (
    REPRODUCTION_THRESHOLDS,
    RepairConfig,
    RepairMethod,
    SimilarityGraph,
    error_degree,
    repair,
)
from multimatch.testbed import CorpusSpec, generate

# triangle A1-B1-C1 with a pendant edge C1-D1
edges = [Correspondence(a, b) for a, b in [("A1", "B1"), ("B1", "C1"), ("A1", "C1"), ("C1", "D1")]]
g = SimilarityGraph(edges, {"A1": "A", "B1": "B", "C1": "C", "D1": "D"})
for e in edges:
    print(f"err({e.entity_one},{e.entity_two}) = {error_degree(g, e):.3f}")

# The label baseline is precise, so seed some wrong edges between random
# entities of different sources to give the repair something to find.
corpus = generate(CorpusSpec(num_sources=6, entities_per_source=120, overlap_ratio=0.6, seed=1))
base = run_experiment(RunConfig("all-pairs"), corpus.kgs, corpus.golds)
membership = leaf_membership(corpus.kgs)
kinds = kinds_of(corpus.kgs)
rng = random.Random(0)
entities = sorted(e for e in corpus.concept_of if e in membership)
noise = []
while len(noise) < 150:
    a, b = rng.sample(entities, 2)
    if membership[a] != membership[b] and corpus.concept_of[a] != corpus.concept_of[b]:
        noise.append(Correspondence(a, b, confidence=0.5))
noisy = Alignment([*base.run.raw_alignment, *noise])
print(f"\nclean all-pairs F1 {base.report.micro.f1:.4f}")
print(f"with {len(noise)} wrong edges F1 {evaluate_alignment(noisy, corpus.golds, membership, kinds).micro.f1:.4f}")

for t in REPRODUCTION_THRESHOLDS:
    fixed = repair(noisy, membership, RepairConfig(RepairMethod.ERROR_DEGREE, t))
    f1 = evaluate_alignment(fixed, corpus.golds, membership, kinds).micro.f1
    print(f"error-degree {t:.2f}: kept {len(fixed):>5} of {len(noisy)}, F1 {f1:.4f}")
for method in (RepairMethod.SOURCE_CONSISTENCY, RepairMethod.CONNECTED_COMPONENTS):
    fixed = repair(noisy, membership, RepairConfig(method))
    f1 = evaluate_alignment(fixed, corpus.golds, membership, kinds).micro.f1
    print(f"{method.value:<21} kept {len(fixed):>5}, F1 {f1:.4f}")
