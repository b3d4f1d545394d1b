"""Binary (1:1) matchers: the contract, a label baseline and a subprocess adapter."""

from __future__ import annotations

import abc
import logging
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .alignment import Alignment, Correspondence, canonical_pair, read_alignment, write_alignment
from .errors import (
    ConfigError,
    ForeignEntity,
    InvalidOutput,
    MalformedRow,
    MatcherNonZeroExit,
    MatcherTimeout,
    WarmStartUnsupported,
)
from .rdf import RDFS_LABEL, KnowledgeGraph, Literal, Triple, is_builtin, iri_fragment, write_ntriples
from .text import tokenize_fragment

log = logging.getLogger(__name__)


class Matcher(abc.ABC):
    """Something that aligns two knowledge graphs.

    Implementations that set ``supports_warm_start`` accept the triples added
    by a merge through :meth:`update_index` and must then not rebuild their
    state for the resulting union from scratch.
    """

    name: str = "matcher"
    one_to_one: bool = True
    supports_warm_start: bool = False

    @abc.abstractmethod
    def match(
        self,
        source: KnowledgeGraph,
        target: KnowledgeGraph,
        input_alignment: Alignment | None = None,
    ) -> Alignment: ...

    def update_index(self, added_triples: Iterable[Triple], *, base_id: str, new_id: str) -> None:
        """Derive the index of graph ``new_id`` from ``base_id`` plus ``added_triples``."""
        raise WarmStartUnsupported(f"{self.name} has no warm start")


_WS = re.compile(r"\s+")


def normalize_label(text: str) -> str:
    return _WS.sub(" ", text).strip().lower()


def fragment_key(iri: str) -> str:
    frag = iri_fragment(iri)
    return " ".join(tokenize_fragment(frag)) if frag else ""


class LabelIndex:
    """Match keys of the entities of one graph.

    An entity's keys are its normalized ``rdfs:label`` values; entities
    without a label fall back to their fragment tokens.
    """

    def __init__(self) -> None:
        self.labels: dict[str, set[str]] = {}

    @classmethod
    def build(cls, triples: Iterable[Triple]) -> "LabelIndex":
        idx = cls()
        idx.add(triples)
        return idx

    def add(self, triples: Iterable[Triple]) -> None:
        labels = self.labels
        for s, p, o in triples:
            for iri in (s, p, o):
                if isinstance(iri, str) and iri not in labels and not is_builtin(iri):
                    labels[iri] = set()
            if p == RDFS_LABEL and isinstance(o, Literal) and not is_builtin(s):
                key = normalize_label(o.lexical)
                if key:
                    labels[s].add(key)

    def keys(self, entity: str) -> tuple[set[str], bool]:
        """(keys, derived_from_label)."""
        labels = self.labels[entity]
        if labels:
            return labels, True
        key = fragment_key(entity)
        return ({key} if key else set()), False


class BaselineMatcher(Matcher):
    """Exact normalized-label matcher with a deterministic 1:1 tie rule.

    Candidate pairs are ranked by (label-derived on both sides first, then the
    lexicographically ordered IRI pair) and accepted greedily while both ends
    are free. The ranking ignores which graph is source or target, so
    ``match(a, b)`` and ``match(b, a)`` return the same pairs.
    """

    name = "baseline"
    one_to_one = True

    def __init__(self, warm_start: bool = False):
        self.supports_warm_start = warm_start
        self._indexes: dict[str, LabelIndex] = {}
        self.index_builds = 0
        self.calls = 0

    def _index(self, kg: KnowledgeGraph) -> LabelIndex:
        if self.supports_warm_start and kg.id in self._indexes:
            return self._indexes[kg.id]
        self.index_builds += 1
        idx = LabelIndex.build(kg.triples)
        if self.supports_warm_start:
            self._indexes[kg.id] = idx
        return idx

    def update_index(self, added_triples: Iterable[Triple], *, base_id: str, new_id: str) -> None:
        if not self.supports_warm_start:
            raise WarmStartUnsupported("baseline matcher created without warm_start")
        try:
            idx = self._indexes.pop(base_id)
        except KeyError:
            raise WarmStartUnsupported(f"no index for {base_id}; match it first") from None
        idx.add(added_triples)
        self._indexes[new_id] = idx

    def match(self, source, target, input_alignment=None):
        self.calls += 1
        fixed = list(input_alignment or ())
        taken = {e for c in fixed for e in (c.entity_one, c.entity_two)}
        src = self._index(source)
        tgt = self._index(target)

        by_key: dict[str, list[tuple[str, bool]]] = {}
        for t in tgt.labels:
            keys, from_label = tgt.keys(t)
            for k in keys:
                by_key.setdefault(k, []).append((t, from_label))

        candidates = set()
        for e in src.labels:
            keys, from_label = src.keys(e)
            for k in keys:
                for t, t_from_label in by_key.get(k, ()):
                    if t != e:
                        rank = 0 if from_label and t_from_label else 1
                        candidates.add((rank, *canonical_pair(e, t), e, t))

        out = list(fixed)
        for _, _, _, e, t in sorted(candidates):
            if e in taken or t in taken:
                continue
            taken.add(e)
            taken.add(t)
            out.append(Correspondence(e, t))
        return Alignment(out)


PLACEHOLDERS = ("{source}", "{target}", "{inputAlignment}", "{outputAlignment}")


@dataclass(frozen=True)
class ExternalMatcherConfig:
    """How to invoke an external matcher executable.

    ``command_template`` is split shell-style and each argument has the
    placeholders ``{source}``, ``{target}``, ``{inputAlignment}`` and
    ``{outputAlignment}`` substituted with file paths.
    """

    command_template: str
    timeout: float = 3600.0
    work_dir: Path | None = None
    name: str = "external"
    one_to_one: bool = False
    env: dict[str, str] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if "{outputAlignment}" not in self.command_template:
            raise ConfigError("command template must contain {outputAlignment}")
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")


class ExternalMatcher(Matcher):
    supports_warm_start = False

    def __init__(self, config: ExternalMatcherConfig):
        self.config = config
        self.name = config.name
        self.one_to_one = config.one_to_one

    def _command(self, paths: dict[str, Path]) -> list[str]:
        args = shlex.split(self.config.command_template)
        out = []
        for arg in args:
            for ph in PLACEHOLDERS:
                arg = arg.replace(ph, str(paths[ph]))
            out.append(arg)
        return out

    def match(self, source, target, input_alignment=None):
        if self.config.work_dir is not None:
            Path(self.config.work_dir).mkdir(parents=True, exist_ok=True)
            call_dir = Path(tempfile.mkdtemp(prefix="match-", dir=self.config.work_dir))
            return self._run(call_dir, source, target, input_alignment)
        with tempfile.TemporaryDirectory(prefix="match-") as tmp:
            return self._run(Path(tmp), source, target, input_alignment)

    def _run(self, call_dir: Path, source, target, input_alignment) -> Alignment:
        paths = {
            "{source}": call_dir / "source.nt",
            "{target}": call_dir / "target.nt",
            "{inputAlignment}": call_dir / "input.tsv",
            "{outputAlignment}": call_dir / "output.tsv",
        }
        write_ntriples(source, paths["{source}"])
        write_ntriples(target, paths["{target}"])
        paths["{inputAlignment}"].write_bytes(write_alignment(input_alignment or ()))
        cmd = self._command(paths)
        log.debug("running %s", cmd)
        try:
            proc = subprocess.run(
                cmd,
                cwd=call_dir,
                capture_output=True,
                timeout=self.config.timeout,
                env=self.config.env,
            )
        except subprocess.TimeoutExpired as exc:
            raise MatcherTimeout(f"{self.name} exceeded {self.config.timeout}s") from exc
        except OSError as exc:
            raise MatcherNonZeroExit(127, str(exc)) from exc
        stderr = proc.stderr.decode("utf-8", "replace")
        if stderr:
            log.info("%s stderr: %s", self.name, stderr.strip())
        if proc.returncode != 0:
            raise MatcherNonZeroExit(proc.returncode, stderr[-500:].strip())
        try:
            result = read_alignment(paths["{outputAlignment}"].read_bytes())
        except FileNotFoundError:
            raise InvalidOutput("matcher wrote no output alignment") from None
        except MalformedRow as exc:
            raise InvalidOutput(str(exc)) from exc

        known = source.entities | target.entities
        for c in result:
            for e in (c.entity_one, c.entity_two):
                if e not in known:
                    raise ForeignEntity(e)
        if self.one_to_one and not result.is_one_to_one():
            raise InvalidOutput(f"{self.name} declared 1:1 but returned a non-1:1 alignment")
        return result
