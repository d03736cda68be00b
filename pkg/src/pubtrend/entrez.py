"""Count queries against the NCBI E-utilities ``esearch`` endpoint.

A count query asks how many records match a quoted keyword in one field for
one publication year, e.g. ``"H1N1"[text]+AND+2018[pdat]``. Only the count is
requested (``rettype=count``) and the response is JSON.
"""

from __future__ import annotations

import json
import os
import random
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Callable, Mapping, Optional, Tuple
from urllib.parse import quote, quote_plus, unquote, unquote_plus

from .cache import CacheRecord, CountCache
from .errors import (
    EntrezError,
    InvalidYear,
    MalformedBody,
    NonOkStatus,
    RetriesExhausted,
    TransportError,
)
from .series import CountSeries, Field, KeywordSpec
from .transport import Limiter, Transport, TransportResponse

ESEARCH_URL = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/esearch.fcgi"

TERM_PATTERN = re.compile(
    r'^"(?P<term>[^"]+)"\[(?P<field>text|MESH)\]\+AND\+(?P<year>\d{4})\[pdat\]$'
)

ENV_API_KEY = "PUBTREND_API_KEY"
ENV_EMAIL = "PUBTREND_EMAIL"
ENV_TOOL = "PUBTREND_TOOL"


@dataclass(frozen=True)
class Credentials:
    """Optional identification NCBI asks clients to send."""

    api_key: Optional[str] = None
    tool: Optional[str] = None
    email: Optional[str] = None

    @classmethod
    def from_env(cls, env: Optional[Mapping[str, str]] = None) -> Optional["Credentials"]:
        env = os.environ if env is None else env
        creds = cls(
            api_key=env.get(ENV_API_KEY) or None,
            tool=env.get(ENV_TOOL) or None,
            email=env.get(ENV_EMAIL) or None,
        )
        return creds if creds else None

    def __bool__(self) -> bool:
        return any((self.api_key, self.tool, self.email))


def build_term(spec: KeywordSpec, year: int) -> str:
    """The unencoded search term for one keyword in one year."""
    if not isinstance(year, int) or isinstance(year, bool) or not 1000 <= year <= 9999:
        raise InvalidYear(f"year must be an integer in 1000..9999, got {year!r}")
    return f'"{spec.term}"[{spec.field.value}]+AND+{year}[pdat]'


@dataclass(frozen=True)
class EntrezQuery:
    database: str
    term_string: str
    count_only: bool = True
    credentials: Optional[Credentials] = None

    def __post_init__(self) -> None:
        if not self.database:
            raise ValueError("database must be non-empty")
        if not TERM_PATTERN.match(self.term_string):
            raise ValueError(f"malformed term string: {self.term_string!r}")
        if not self.count_only:
            raise ValueError("only count queries are supported")

    @classmethod
    def for_year(
        cls, spec: KeywordSpec, year: int, credentials: Optional[Credentials] = None
    ) -> "EntrezQuery":
        return cls(spec.database, build_term(spec, year), True, credentials)


def encode_term(term_string: str) -> str:
    """URL-encode a term string.

    Inside the quoted keyword a space becomes ``+`` and a literal ``+``
    becomes ``%2B``; outside it the ``+AND+`` separators are kept as they are.
    """
    match = TERM_PATTERN.match(term_string)
    if match is None:
        raise ValueError(f"malformed term string: {term_string!r}")
    keyword_end = match.end("term")
    return (
        "%22"
        + quote_plus(match.group("term"), safe="")
        + quote(term_string[keyword_end:], safe="+")
    )


def decode_term(encoded: str) -> str:
    """Inverse of :func:`encode_term`."""
    if not encoded.startswith("%22"):
        raise ValueError(f"encoded term does not start with a quote: {encoded!r}")
    close = encoded.find("%22", 3)
    if close < 0:
        raise ValueError(f"encoded term has no closing quote: {encoded!r}")
    return '"' + unquote_plus(encoded[3:close]) + unquote(encoded[close:])


def encode_request(query: EntrezQuery) -> str:
    """The full esearch URL. Parameter order is fixed so URLs are stable fixture keys."""
    params = [
        ("db", quote_plus(query.database, safe="")),
        ("term", encode_term(query.term_string)),
        ("rettype", "count"),
        ("retmode", "json"),
    ]
    creds = query.credentials
    if creds is not None:
        for name in ("tool", "email", "api_key"):
            value = getattr(creds, name)
            if value:
                params.append((name, quote_plus(value, safe="@")))
    return ESEARCH_URL + "?" + "&".join(f"{k}={v}" for k, v in params)


def term_from_url(url: str) -> str:
    """Pull the ``term`` parameter back out of an esearch URL and decode it."""
    _, _, query = url.partition("?")
    for pair in query.split("&"):
        name, _, value = pair.partition("=")
        if name == "term":
            return decode_term(value)
    raise ValueError(f"no term parameter in {url!r}")


def parse_count(response: TransportResponse, url: Optional[str] = None) -> int:
    """Read ``esearchresult.count`` from an esearch JSON response."""
    if response.status != 200:
        raise NonOkStatus(response.status, url)
    where = f" from {url}" if url else ""
    try:
        payload = json.loads(response.body.decode("utf-8"))
        raw = payload["esearchresult"]["count"]
    except (UnicodeDecodeError, ValueError, KeyError, TypeError) as exc:
        raise MalformedBody(f"no esearchresult.count in response{where}") from exc
    if not isinstance(raw, str) or not raw.isdigit():
        raise MalformedBody(f"count {raw!r} is not a decimal string{where}")
    return int(raw)


def is_retryable(status: int) -> bool:
    return status == 429 or 500 <= status <= 599


@dataclass
class RetryPolicy:
    """Exponential backoff with full jitter.

    The wait after failed attempt ``k`` (1-based) is drawn uniformly from
    ``[0, base_delay * factor ** (k - 1)]``.
    """

    max_attempts: int = 5
    base_delay: float = 1.0
    factor: float = 2.0
    rng: random.Random = field(default_factory=random.Random)
    sleep: Callable[[float], None] = time.sleep

    def __post_init__(self) -> None:
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")

    def cap(self, attempt: int) -> float:
        return self.base_delay * self.factor ** (attempt - 1)

    def delay(self, attempt: int) -> float:
        return self.rng.uniform(0.0, self.cap(attempt))


def fetch_count(
    query: EntrezQuery,
    transport: Transport,
    limiter: Limiter,
    retry: Optional[RetryPolicy] = None,
) -> int:
    """Send one count query, retrying 429/5xx responses and connection failures."""
    retry = retry or RetryPolicy()
    url = encode_request(query)
    last_status: Optional[int] = None
    last_error: Optional[TransportError] = None
    for attempt in range(1, retry.max_attempts + 1):
        limiter.acquire()
        try:
            response = transport.send(url)
        except TransportError as exc:
            last_status, last_error = None, exc
        else:
            if not is_retryable(response.status):
                return parse_count(response, url)
            last_status, last_error = response.status, None
        if attempt < retry.max_attempts:
            retry.sleep(retry.delay(attempt))
    raise RetriesExhausted(url, retry.max_attempts, last_status) from last_error


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


def fetch_year_series(
    spec: KeywordSpec,
    years: Tuple[int, int],
    transport: Transport,
    limiter: Limiter,
    cache: Optional[CountCache] = None,
    credentials: Optional[Credentials] = None,
    retry: Optional[RetryPolicy] = None,
    max_workers: int = 1,
    now: Callable[[], datetime] = _utcnow,
    max_age: Optional[timedelta] = None,
) -> CountSeries:
    """Yearly counts for ``spec`` over the inclusive range ``years``.

    The cache is consulted before the network and filled after each fetch.
    Pass the same cache to several calls to avoid refetching a term.
    Cached counts older than ``max_age`` are fetched again.
    A failing fetch re-raises its error with ``year`` and ``keyword``
    attributes attached.
    """
    start, end = years
    if start > end:
        raise ValueError(f"empty year range {start}:{end}")
    cache = cache if cache is not None else CountCache()
    queries = {y: EntrezQuery.for_year(spec, y, credentials) for y in range(start, end + 1)}

    def one(year: int) -> int:
        query = queries[year]
        hit = cache.get(query.database, query.term_string, max_age, now)
        if hit is not None:
            return hit
        try:
            count = fetch_count(query, transport, limiter, retry)
        except EntrezError as exc:
            exc.year = year  # type: ignore[attr-defined]
            exc.keyword = spec  # type: ignore[attr-defined]
            raise
        cache.put(CacheRecord(query.database, query.term_string, count, now()))
        return count

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            counts = dict(zip(queries, pool.map(one, queries)))
    else:
        counts = {year: one(year) for year in queries}
    return CountSeries(spec, counts)


__all__ = [
    "Credentials",
    "ESEARCH_URL",
    "EntrezQuery",
    "Field",
    "KeywordSpec",
    "RetryPolicy",
    "build_term",
    "decode_term",
    "encode_request",
    "encode_term",
    "fetch_count",
    "fetch_year_series",
    "parse_count",
    "term_from_url",
]
