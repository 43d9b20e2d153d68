import pytest

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion")


@pytest.fixture
def detail(request):
    """Attach a one-line measurement summary to the current acceptance test."""

    def _set(text):
        request.node.user_properties.append(("detail", text))

    return _set


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marks = dict(report.user_properties)
    if "criterion" in marks:
        _ACCEPTANCE.append((marks["criterion"], report.outcome, marks.get("detail", "")))


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", f"{m.args[0]} {m.args[1]}"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, text in _ACCEPTANCE:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}" + (f" :: {text}" if text else ""))
