"""Multi-source knowledge graph matching built from binary matching tasks."""

from .alignment import Alignment, Correspondence, DisjointSet, EntityCluster, closure, expand_to_pairs
from .errors import ConfigError, EvaluationError, MatcherError, MultiMatchError
from .evaluation import Completeness, GoldStandard, evaluate_pair, evaluate_run
from .experiment import RunConfig, compare, run_experiment
from .matcher import BaselineMatcher, ExternalMatcher, ExternalMatcherConfig, Matcher
from .merge import MergeStrategy, merge
from .orchestrator import RunRecord, execute, leaf_membership
from .planner import ExecutionPlan, Linkage, OrderingSpec, make_plan
from .rdf import KnowledgeGraph, Literal, Triple, parse_ntriples, read_ntriples, stats
from .repair import RepairConfig, RepairMethod, repair
from .testbed import CorpusSpec, generate
from .text import profile_kgs, similarity_matrix

__version__ = "0.1.0"

__all__ = [
    "Alignment", "BaselineMatcher", "Completeness", "ConfigError", "CorpusSpec", "Correspondence",
    "DisjointSet", "EntityCluster", "EvaluationError", "ExecutionPlan", "ExternalMatcher",
    "ExternalMatcherConfig", "GoldStandard", "KnowledgeGraph", "Linkage", "Literal", "Matcher",
    "MatcherError", "MergeStrategy", "MultiMatchError", "OrderingSpec", "RepairConfig",
    "RepairMethod", "RunConfig", "RunRecord", "Triple", "closure", "compare", "evaluate_pair",
    "evaluate_run", "execute", "expand_to_pairs", "generate", "leaf_membership", "make_plan",
    "merge", "parse_ntriples", "profile_kgs", "read_ntriples", "repair", "run_experiment",
    "similarity_matrix", "stats",
]
