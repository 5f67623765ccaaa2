import pytest

from css_diffusion import Scenario

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def defaults():
    return Scenario().game_config()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    title = marker.kwargs.get("title", item.name)
    callspec = getattr(item, "callspec", None)
    if callspec is not None:
        title = f"{title} [{callspec.id}]"
    _ACCEPTANCE.append((marker.args[0], "PASS" if report.passed else "FAIL", title))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, title in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{status}] {label}: {title}")
