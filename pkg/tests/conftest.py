from __future__ import annotations

import pytest

from multimatch.rdf import RDF_TYPE, RDFS_LABEL, KnowledgeGraph, Literal, Triple


def labelled(kg_id: str, labels: dict[str, str], extra=(), typed: bool = False) -> KnowledgeGraph:
    """Graph whose entities ``http://<kg>/<local>`` carry the given labels."""
    triples = []
    for local, label in labels.items():
        iri = f"http://{kg_id}/{local}"
        triples.append(Triple(iri, RDFS_LABEL, Literal(label, "en")))
        if typed:
            triples.append(Triple(iri, RDF_TYPE, f"http://{kg_id}/Thing"))
    return KnowledgeGraph(kg_id, tuple(triples) + tuple(extra))


@pytest.fixture
def make_kg():
    return labelled


_ACCEPTANCE: list[str] = []


class CriterionLog:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.detail = ""

    def line(self, passed: bool) -> str:
        status = "PASS" if passed else "FAIL"
        return f"[{status}] criterion {self.number:>2}: {self.title}" + (f" ({self.detail})" if self.detail else "")


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""
    marker = request.node.get_closest_marker("criterion")
    log = CriterionLog(*marker.args)
    yield log
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    text = log.line(passed)
    _ACCEPTANCE.append(text)
    print(text)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for text in sorted(_ACCEPTANCE, key=lambda t: int(t.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(text)
