import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_acceptance: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test body calls ``criterion(ok, note)``."""
    name = request.node.name

    def record(ok: bool, note: str = "") -> None:
        _acceptance[name] = (bool(ok), note)

    yield record
    if name not in _acceptance:
        outcome = getattr(request.node, "rep_call", None)
        _acceptance[name] = (outcome is not None and outcome.passed, "")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
        name = item.name
        if name in _acceptance and rep.failed:
            _acceptance[name] = (False, _acceptance[name][1])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        ok, note = _acceptance[name]
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if note:
            line += f"  ({note})"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20261016)
