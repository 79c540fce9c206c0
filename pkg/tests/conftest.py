import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_RESULTS = {}


class Criterion:
    def __init__(self, key, title):
        self.key = key
        self.title = title
        self.notes = []

    def note(self, text):
        self.notes.append(str(text))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    crit = getattr(item, "_criterion", None)
    if crit is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _RESULTS[crit.key] = (crit.title, rep.passed, list(crit.notes))


@pytest.fixture
def criterion(request):
    """Register the running test as an acceptance criterion.

    The test must be marked ``@pytest.mark.acceptance(key, title)``.
    """
    mark = request.node.get_closest_marker("acceptance")
    assert mark is not None, "acceptance tests need @pytest.mark.acceptance(key, title)"
    crit = Criterion(*mark.args)
    request.node._criterion = crit
    return crit


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(key, title): an acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.write_sep("=", "acceptance criteria")
    for key in sorted(_RESULTS, key=lambda k: (len(str(k)), str(k))):
        title, ok, notes = _RESULTS[key]
        line = f"{'PASS' if ok else 'FAIL'}  AC{key}: {title}"
        if notes:
            line += "  [" + "; ".join(notes) + "]"
        tr.write_line(line)
    passed = sum(1 for _, ok, _ in _RESULTS.values() if ok)
    tr.write_line(f"{passed}/{len(_RESULTS)} acceptance criteria passed")
