import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            item.user_properties.append(("acceptance", (mark.kwargs["number"], mark.kwargs["title"])))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "acceptance" not in props:
        return
    number, title = props["acceptance"]
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        previous = _acceptance.get(number, (title, True))[1]
        _acceptance[number] = (title, previous and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
