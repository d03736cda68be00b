"""HTTP transports and the client-side rate limiter.

A transport turns a URL into a :class:`TransportResponse`. Three are provided:

* :class:`LiveTransport` does a real GET with :mod:`urllib`.
* :class:`RecordingTransport` wraps another transport and appends every
  exchange to a JSON-lines fixture file.
* :class:`ReplayTransport` answers only from such a fixture file, matching
  URLs byte for byte, and never touches the network.

Fixture lines look like::

    {"url": "...", "status": 200, "body": "...", "recorded_at": "2021-02-08T12:00:00+00:00"}
"""

from __future__ import annotations

import json
import threading
import time
import urllib.error
import urllib.request
from collections import deque
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Deque, Iterable, Mapping, Optional, Protocol, Union

from . import __version__
from .errors import FixtureError, ReplayMiss, TransportError

PathLike = Union[str, Path]


@dataclass(frozen=True)
class TransportResponse:
    status: int
    body: bytes

    def __post_init__(self) -> None:
        if not 100 <= self.status <= 599:
            raise ValueError(f"HTTP status out of range: {self.status}")


class Transport(Protocol):
    def send(self, url: str) -> TransportResponse: ...


class Limiter(Protocol):
    def acquire(self) -> None: ...


class LiveTransport:
    """Plain HTTPS GET."""

    def __init__(self, timeout: float = 30.0, user_agent: Optional[str] = None):
        self.timeout = timeout
        self.user_agent = user_agent or f"pubtrend/{__version__}"

    def send(self, url: str) -> TransportResponse:
        request = urllib.request.Request(url, headers={"User-Agent": self.user_agent})
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                return TransportResponse(resp.status, resp.read())
        except urllib.error.HTTPError as exc:
            return TransportResponse(exc.code, exc.read() or b"")
        except (urllib.error.URLError, TimeoutError, ConnectionError) as exc:
            reason = getattr(exc, "reason", exc)
            raise TransportError(f"request failed ({reason}): {url}") from exc


def fixture_line(url: str, response: TransportResponse, recorded_at: datetime) -> str:
    record = {
        "url": url,
        "status": response.status,
        "body": response.body.decode("utf-8"),
        "recorded_at": recorded_at.isoformat(),
    }
    return json.dumps(record, ensure_ascii=False)


class RecordingTransport:
    """Forward to ``inner`` and append each exchange to ``path``."""

    def __init__(
        self,
        inner: Transport,
        path: PathLike,
        now: Callable[[], datetime] = lambda: datetime.now(timezone.utc),
    ):
        self.inner = inner
        self.path = Path(path)
        self._now = now
        self._lock = threading.Lock()

    def send(self, url: str) -> TransportResponse:
        response = self.inner.send(url)
        line = fixture_line(url, response, self._now())
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8", newline="\n") as fh:
                fh.write(line + "\n")
        return response


class ReplayTransport:
    """Serve responses recorded earlier. Later lines win for a repeated URL."""

    def __init__(self, responses: Mapping[str, TransportResponse]):
        self._responses = dict(responses)
        self.requests: list[str] = []

    @classmethod
    def from_files(cls, paths: Iterable[PathLike]) -> "ReplayTransport":
        responses: dict[str, TransportResponse] = {}
        for path in paths:
            responses.update(load_fixtures(path))
        return cls(responses)

    @classmethod
    def from_file(cls, path: PathLike) -> "ReplayTransport":
        return cls.from_files([path])

    def __len__(self) -> int:
        return len(self._responses)

    def __contains__(self, url: object) -> bool:
        return url in self._responses

    def send(self, url: str) -> TransportResponse:
        self.requests.append(url)
        try:
            return self._responses[url]
        except KeyError:
            raise ReplayMiss(url) from None


def load_fixtures(path: PathLike) -> dict[str, TransportResponse]:
    """Read a fixture file (or every ``*.jsonl`` in a directory)."""
    path = Path(path)
    if path.is_dir():
        out: dict[str, TransportResponse] = {}
        for child in sorted(path.glob("*.jsonl")):
            out.update(load_fixtures(child))
        return out
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FixtureError(f"cannot read fixtures from {path}: {exc.strerror or exc}") from exc
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            out[record["url"]] = TransportResponse(
                int(record["status"]), record["body"].encode("utf-8")
            )
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise FixtureError(f"{path}:{lineno}: bad fixture line ({exc})") from exc
    return out


class RateLimiter:
    """Sliding-window limiter: at most ``max_requests`` starts per ``period`` seconds.

    Any half-open window ``[t, t + period)`` contains at most ``max_requests``
    calls to :meth:`acquire` returning. Safe to share between threads.
    """

    def __init__(
        self,
        max_requests: int,
        period: float = 1.0,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if max_requests < 1:
            raise ValueError("max_requests must be at least 1")
        if period <= 0:
            raise ValueError("period must be positive")
        self.max_requests = max_requests
        self.period = period
        self._clock = clock
        self._sleep = sleep
        self._starts: Deque[float] = deque()
        self._lock = threading.Lock()
        self.acquired = 0

    @classmethod
    def for_ncbi(cls, api_key: Optional[str] = None, **kwargs) -> "RateLimiter":
        """NCBI allows 3 requests/s anonymously and 10/s with an API key."""
        return cls(10 if api_key else 3, 1.0, **kwargs)

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                while self._starts and self._starts[0] + self.period <= now:
                    self._starts.popleft()
                if len(self._starts) < self.max_requests:
                    self._starts.append(now)
                    self.acquired += 1
                    return
                wait = self._starts[0] + self.period - now
            # floor keeps float rounding from stalling a fake clock at the boundary
            self._sleep(max(wait, 1e-6))


class Unlimited:
    """Limiter stand-in for offline transports."""

    def __init__(self) -> None:
        self.acquired = 0

    def acquire(self) -> None:
        self.acquired += 1
