"""Shared fixtures: a controllable clock, cheap hashing, app and live-server helpers."""

from __future__ import annotations

import threading
from datetime import date, datetime, timedelta, timezone

import pytest
import uvicorn

from forumserver.api import ServerConfig, create_app
from forumserver.domain import Member, PresenceStatus, hash_password

# One PBKDF2 round keeps test suites fast; production default stays strong.
FAST_HASH = 1

START = datetime(2026, 3, 14, 12, 0, 0, tzinfo=timezone.utc)


class MutableClock:
    """Injectable clock; time moves only when a test advances it."""

    def __init__(self, start: datetime = START):
        self.now = start

    def __call__(self) -> datetime:
        return self.now

    def advance(self, **kwargs) -> datetime:
        self.now += timedelta(**kwargs)
        return self.now


@pytest.fixture
def clock() -> MutableClock:
    return MutableClock()


def make_member(
    name: str = "alice",
    password: str = "Secret12",
    dob: date = date(1990, 1, 1),
    doj: date = date(2026, 3, 14),
    handle: PresenceStatus = PresenceStatus.OFFLINE,
) -> Member:
    return Member(
        name=name,
        password=hash_password(password, iterations=FAST_HASH),
        handle=handle,
        member_dob=dob,
        member_doj=doj,
    )


def make_app(config: ServerConfig | None = None, clock: MutableClock | None = None, **kwargs):
    return create_app(
        config,
        clock=clock or MutableClock(),
        hash_iterations=kwargs.pop("hash_iterations", FAST_HASH),
        **kwargs,
    )


# One line per acceptance criterion at the end of the run.
_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::", 1)[1]
        _ACCEPTANCE_RESULTS.append((name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in _ACCEPTANCE_RESULTS:
            label = "PASS" if outcome == "PASSED" else outcome
            terminalreporter.write_line(f"{label:6s} {name}")


class LiveServer:
    """uvicorn on an OS-assigned port, running in a background thread."""

    def __init__(self, app):
        self._server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
        )
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def __enter__(self) -> "LiveServer":
        self._thread.start()
        while not self._server.started:
            if not self._thread.is_alive():
                raise RuntimeError("server thread died during startup")
            threading.Event().wait(0.01)
        socket_ = self._server.servers[0].sockets[0]
        self.base_url = "http://127.0.0.1:%d" % socket_.getsockname()[1]
        return self

    def __exit__(self, *exc) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)
