"""Independent reference implementations used by the tests.

Each one is deliberately naive: boolean-matrix closure, exhaustive spanning
tree search and a per-triple restatement of the merge rules.
"""

import itertools
import random

import numpy as np

from multimatch.alignment import Alignment, Correspondence, DisjointSet
from multimatch.rdf import KnowledgeGraph, Literal, Triple
from multimatch.text import SimilarityMatrix


def warshall_partition(entities, edges):
    """Reference partition from the boolean transitive closure of the edge matrix."""
    idx = {e: i for i, e in enumerate(entities)}
    n = len(entities)
    reach = np.eye(n, dtype=bool)
    for a, b in edges:
        reach[idx[a], idx[b]] = reach[idx[b], idx[a]] = True
    for k in range(n):
        reach |= np.outer(reach[:, k], reach[k, :])
    groups = {frozenset(entities[j] for j in np.flatnonzero(reach[i])) for i in range(n)}
    return {g for g in groups if len(g) > 1}


def random_alignment(rng, max_entities=30):
    n = rng.randint(2, max_entities)
    entities = [f"http://{'ABC'[i % 3]}/{i}" for i in range(n)]
    membership = {e: e.split("/")[2] for e in entities}
    edges = []
    for _ in range(rng.randint(0, 2 * n)):
        a, b = rng.sample(entities, 2)
        edges.append((a, b))
    return entities, membership, edges


def sim_from_distances(ids, d):
    return SimilarityMatrix(tuple(ids), 1.0 - np.asarray(d, dtype=float))


def random_sim(rng, n):
    d = np.zeros((n, n))
    for i, j in itertools.combinations(range(n), 2):
        d[i, j] = d[j, i] = round(rng.random(), 3)
    return sim_from_distances([f"k{i}" for i in range(n)], d)


def tree_weight(sim, edges):
    return sum(sim.distance(a, b) for a, b in edges)


def brute_force_mst(sim):
    ids = sim.ids
    best = None
    for edges in itertools.combinations(itertools.combinations(ids, 2), len(ids) - 1):
        ds = DisjointSet(ids)
        if all(ds.union(a, b) for a, b in edges):
            w = tree_weight(sim, edges)
            best = w if best is None else min(best, w)
    return best


def count_spanning_trees(n):
    ids = list(range(n))
    count = 0
    for edges in itertools.combinations(itertools.combinations(ids, 2), n - 1):
        ds = DisjointSet(ids)
        count += all(ds.union(a, b) for a, b in edges)
    return count


def random_pair(rng: random.Random):
    def kg(prefix, n_ent):
        ents = [f"http://{prefix}/e{i}" for i in range(n_ent)]
        props = [f"http://{prefix}/p{i}" for i in range(3)]
        triples = []
        for _ in range(rng.randint(0, 12)):
            o = rng.choice(ents) if rng.random() < 0.6 else Literal(f"v{rng.randint(0, 3)}")
            triples.append(Triple(rng.choice(ents), rng.choice(props), o))
        return KnowledgeGraph(prefix, tuple(triples))

    src, tgt = kg("s", rng.randint(1, 6)), kg("t", rng.randint(1, 6))
    s_ents = sorted(src.entities)
    t_ents = sorted(tgt.entities)
    rng.shuffle(s_ents)
    rng.shuffle(t_ents)
    k = rng.randint(0, min(len(s_ents), len(t_ents)))
    pairs = list(zip(s_ents[:k], t_ents[:k]))
    alignment = Alignment(
        Correspondence(*(p if rng.random() < 0.5 else p[::-1])) for p in pairs
    )
    return src, tgt, alignment, dict(pairs)


def oracle_no_drift(target, source, mapping):
    out = list(target.triples)
    for s, p, o in source.triples:
        if s in mapping:
            continue
        if not isinstance(o, Literal) and o in mapping:
            continue
        t = Triple(s, mapping.get(p, p), o)
        if t not in out:
            out.append(t)
    return set(out)


def oracle_full(target, source, mapping):
    out = set(target.triples)
    for s, p, o in source.triples:
        o2 = o if isinstance(o, Literal) else mapping.get(o, o)
        out.add(Triple(mapping.get(s, s), mapping.get(p, p), o2))
    return out
