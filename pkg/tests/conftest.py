"""Collects results of tests marked ``criterion(n, title)`` and prints one
PASS/FAIL line per criterion at the end of the session."""
import pytest

_results: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    entry = _results.setdefault(n, {"title": title, "ok": True, "tests": 0, "notes": []})
    if report.when == "call" or (report.when == "setup" and not report.passed):
        entry["tests"] += 1
        if hasattr(report, "wasxfail"):
            entry["ok"] = False
            entry["notes"].append(f"{item.name}: expected failure ({report.wasxfail})")
        elif not report.passed:
            entry["ok"] = False
            entry["notes"].append(f"{item.name}: {report.outcome}")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        e = _results[n]
        status = "PASS" if e["ok"] and e["tests"] else "FAIL"
        tr.write_line(f"criterion {n:>2}: {status}  {e['title']}")
        for note in e["notes"]:
            tr.write_line(f"              {note}")
