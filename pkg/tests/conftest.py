import os

import pytest

from support import CRITERIA

_results: dict[int, list[tuple[str, str]]] = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long-running checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


def _slow_enabled(config):
    return config.getoption("--runslow") or os.environ.get("COMPATCYCLES_SLOW") == "1"


def pytest_collection_modifyitems(config, items):
    if _slow_enabled(config):
        return
    skip = pytest.mark.skip(reason="slow; use --runslow or COMPATCYCLES_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k = mark.args[0]
    if rep.when == "setup" and rep.skipped:
        _results.setdefault(k, []).append((item.name, "skipped"))
    elif rep.when == "call":
        if hasattr(rep, "wasxfail"):
            status = "xpass" if rep.passed else "xfail"
        else:
            status = rep.outcome
        _results.setdefault(k, []).append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(CRITERIA):
        parts = _results.get(k)
        if not parts:
            continue
        statuses = [s for _, s in parts]
        ran = [s for s in statuses if s != "skipped"]
        if not ran:
            verdict = "SKIP"
        elif all(s == "passed" for s in ran):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        notes = []
        if "xfail" in statuses:
            notes.append("literal stated value not reproduced, see decisions ledger")
        if "skipped" in statuses and ran:
            notes.append("slow part skipped")
        suffix = f" ({'; '.join(notes)})" if notes else ""
        tr.write_line(f"criterion {k}: {verdict} - {CRITERIA[k]}{suffix}")
