"""One pass/fail line per acceptance criterion at the end of the run."""

from __future__ import annotations

import pytest

_results: dict[str, list[str]] = {}
_titles: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            label, title = mark.args[0], mark.kwargs.get("title", "")
            _results.setdefault(label, [])
            _titles.setdefault(label, title)


def pytest_runtest_logreport(report):
    item_marks = getattr(report, "criterion", None)
    if item_marks is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _results.setdefault(item_marks, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark:
        outcome.get_result().criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label in sorted(_results, key=lambda s: int(s) if s.isdigit() else s):
        outcomes = _results[label]
        if not outcomes:
            verdict = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            verdict = "PASS"
        elif any(o == "failed" for o in outcomes):
            verdict = "FAIL"
        else:
            verdict = "SKIP"
        tr.write_line(f"criterion {label}: {verdict:<7} {_titles.get(label, '')}")


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    if request.param == "numba":
        from votetiming.kernels import _numba
        if _numba is None:
            pytest.skip("numba unavailable")
    return request.param


@pytest.fixture
def numba_disabled(monkeypatch):
    monkeypatch.setenv("VOTETIMING_DISABLE_NUMBA", "1")
