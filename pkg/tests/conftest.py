import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("acceptance") and rep.when == "call":
        _acceptance_results.append((item.name, item.function.__doc__, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, doc, passed in _acceptance_results:
        label = (doc or name).strip().splitlines()[0]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}")
