import re

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict[int, list[bool]] = {}
_titles: dict[int, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = _CRITERION.match(item.name)
        if m and item.function.__doc__:
            _titles.setdefault(int(m.group(1)), item.function.__doc__.strip().splitlines()[0])


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid.rsplit("::", 1)[-1])
    if not m:
        return
    if report.when == "call" or report.outcome == "failed":
        _results.setdefault(int(m.group(1)), []).append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        verdict = "PASS" if all(_results[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {_titles.get(n, '')}")
