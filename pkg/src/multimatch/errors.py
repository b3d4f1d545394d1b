"""Exception hierarchy shared by all modules.

The CLI maps the three families (config, matcher, evaluation) to exit codes.
"""

from __future__ import annotations


class MultiMatchError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(MultiMatchError):
    """Invalid user input: bad spec, bad config, missing files."""


class MatcherError(MultiMatchError):
    """A binary matcher failed or produced unusable output."""


class EvaluationError(MultiMatchError):
    """Evaluation inputs could not be reconciled."""


# rdf-core


class MalformedLine(ConfigError):
    def __init__(self, line_number: int, line: str, reason: str = "syntax error"):
        self.line_number = line_number
        self.line = line
        super().__init__(f"line {line_number}: {reason}: {line!r}")


class UnknownEntity(MultiMatchError):
    def __init__(self, entity: str, kg_id: str):
        self.entity = entity
        self.kg_id = kg_id
        super().__init__(f"{entity} does not occur in {kg_id}")


# alignment-core


class MalformedRow(ConfigError):
    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        super().__init__(f"alignment row {line_number}: {reason}")


class ConfidenceOutOfRange(MalformedRow):
    pass


class UnknownSource(EvaluationError):
    def __init__(self, entity: str):
        self.entity = entity
        super().__init__(f"cannot resolve source KG of {entity}")


# planner


class TooFewSources(ConfigError):
    def __init__(self, n: int, needed: int = 2):
        super().__init__(f"need at least {needed} knowledge graphs, got {n}")


# matcher


class MatcherTimeout(MatcherError):
    pass


class MatcherNonZeroExit(MatcherError):
    def __init__(self, code: int, stderr_excerpt: str):
        self.code = code
        self.stderr_excerpt = stderr_excerpt
        super().__init__(f"matcher exited with code {code}: {stderr_excerpt}")


class InvalidOutput(MatcherError):
    pass


class ForeignEntity(MatcherError):
    def __init__(self, iri: str):
        self.iri = iri
        super().__init__(f"{iri} occurs in neither input knowledge graph")


class WarmStartUnsupported(MatcherError):
    pass


# merge


class NonBijectiveAlignment(MatcherError):
    pass


# orchestrator


class UnresolvableEntity(MultiMatchError):
    def __init__(self, entity: str):
        self.entity = entity
        super().__init__(f"{entity} cannot be resolved to a leaf knowledge graph")


class TaskFailed(MultiMatchError):
    """Wraps the error of a single plan task; the run is aborted."""

    def __init__(self, task_index: int, cause: Exception):
        self.task_index = task_index
        self.cause = cause
        super().__init__(f"task {task_index} failed: {cause}")


# testbed


class InvalidSpec(ConfigError):
    pass
