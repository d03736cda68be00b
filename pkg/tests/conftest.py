from __future__ import annotations

import os
import threading
from pathlib import Path

import pytest

from pubtrend import RateLimiter, ReplayTransport

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "studies" / "fixtures"


class FakeClock:
    """Monotonic clock whose ``sleep`` advances time instantly."""

    def __init__(self, start: float = 1000.0):
        self.now = start
        self.sleeps: list[float] = []

    def __call__(self) -> float:
        return self.now

    def sleep(self, seconds: float) -> None:
        self.sleeps.append(seconds)
        self.now += seconds


class ScriptedTransport:
    """Returns canned responses in order and records every URL it was sent."""

    def __init__(self, responses):
        self._responses = list(responses)
        self.urls: list[str] = []

    def send(self, url):
        self.urls.append(url)
        item = self._responses.pop(0) if len(self._responses) > 1 else self._responses[0]
        if isinstance(item, Exception):
            raise item
        return item


class CountingTransport:
    """Wraps another transport and remembers every URL sent through it."""

    def __init__(self, inner):
        self.inner = inner
        self.urls: list[str] = []
        self._lock = threading.Lock()

    def send(self, url):
        with self._lock:
            self.urls.append(url)
        return self.inner.send(url)


class ExplodingTransport:
    def __init__(self):
        self.calls = 0

    def send(self, url):
        self.calls += 1
        raise AssertionError(f"network used: {url}")


@pytest.fixture
def fake_clock() -> FakeClock:
    return FakeClock()


@pytest.fixture
def fast_limiter(fake_clock) -> RateLimiter:
    return RateLimiter(3, 1.0, clock=fake_clock, sleep=fake_clock.sleep)


@pytest.fixture(scope="session")
def replay() -> ReplayTransport:
    return ReplayTransport.from_file(FIXTURES)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("PUBTREND_LIVE") == "1":
        return
    skip = pytest.mark.skip(reason="live NCBI test; set PUBTREND_LIVE=1 to run")
    for item in items:
        if "live" in item.keywords:
            item.add_marker(skip)


# -- one PASS/FAIL line per acceptance criterion ----------------------------------

_acceptance: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    criterion = item.get_closest_marker("criterion")
    if criterion is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        _acceptance.append((f"AC{criterion.args[0]:>2} {criterion.args[1]}", status))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _acceptance:
        terminalreporter.write_line(f"{status}  {name}")
