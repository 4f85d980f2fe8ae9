from __future__ import annotations

import dataclasses
from pathlib import Path

import pytest

from specrewriter.essence import Given, Specification, parse_spec
from specrewriter.values import RelationV

DATA = Path(__file__).parent / "data"

# criterion number -> (title, passed)
_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and not report.failed):
        return
    number, title = marker.args
    ok = _CRITERIA.get(number, (title, True))[1] and report.passed
    _CRITERIA[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")


def with_givens_from(spec: Specification, source: Specification) -> Specification:
    """Copy given domains over from ``source``; the rewrite keeps the input's givens."""
    givens = {g.name: g for g in source.givens}
    decls = tuple(givens.get(d.name, d) if isinstance(d, Given) else d for d in spec.declarations)
    return dataclasses.replace(spec, declarations=decls)


def read(name: str) -> str:
    return (DATA / name).read_text()


@pytest.fixture
def relation_spec():
    return parse_spec(read("relation_colouring.essence"))


@pytest.fixture
def function_spec():
    return parse_spec(read("function_colouring.essence"))


@pytest.fixture
def converter_spec():
    return parse_spec(read("converter.essence"))


@pytest.fixture
def tiny_instance():
    """Two vertices joined by an edge, two colours, one colour each."""
    return {"n": 2, "edges": RelationV({(0, 1), (1, 0)}), "numberColours": 2, "coloursPerNode": 1}
