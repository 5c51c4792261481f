import pytest

from bspr import NetworkConfig


@pytest.fixture
def fig5_config():
    k = 8
    return NetworkConfig(k, tuple(0.1 * i / k for i in range(1, k + 1)), (0.3,) * k)


_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the outcome is filled in after the test body."""
    entry = {"name": request.node.name, "label": request.node.get_closest_marker("criterion").args[0]}
    _ACCEPTANCE.append(entry)
    return entry


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.get_closest_marker("criterion"):
        for entry in _ACCEPTANCE:
            if entry["name"] == item.name:
                entry["passed"] = rep.passed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for entry in _ACCEPTANCE:
        status = "PASS" if entry.get("passed") else "FAIL"
        detail = entry.get("detail", "")
        terminalreporter.write_line(f"{status}  {entry['label']}  {detail}".rstrip())
