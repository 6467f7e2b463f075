import numpy as np
import pytest

_verdicts = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _verdicts.setdefault(number, {"title": title, "ok": True, "ran": False})
    if call.when == "call":
        entry["ran"] = True
        entry["ok"] = entry["ok"] and call.excinfo is None
    elif call.excinfo is not None:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_verdicts):
        v = _verdicts[number]
        verdict = "PASS" if v["ok"] and v["ran"] else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {number:>2}: {v['title']}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def simplex_weights(rng, k, n):
    """(k, n) weights, each column uniform on the probability simplex."""
    w = rng.dirichlet(np.ones(k), size=n).T
    return w / w.sum(axis=0)
