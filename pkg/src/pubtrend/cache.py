"""Append-only JSON-lines cache of esearch counts.

Each line is one record::

    {"db": "pubmed", "term": "\\"banana\\"[text]+AND+1980[pdat]", "count": 12, "fetched_at": "..."}

Lines are only ever appended. When a key appears more than once the record
with the newest ``fetched_at`` wins (ties go to the later line). Lines that
fail to parse are skipped and counted in :attr:`CountCache.corrupt_lines`.

One process should write a given file at a time; there is no file locking.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable, Optional, Union

log = logging.getLogger(__name__)

CacheKey = tuple[str, str]


@dataclass(frozen=True)
class CacheRecord:
    db: str
    term: str
    count: int
    fetched_at: datetime

    def __post_init__(self) -> None:
        if not isinstance(self.count, int) or isinstance(self.count, bool):
            raise TypeError(f"count must be an int, got {self.count!r}")
        if self.count < 0:
            raise ValueError(f"count must be non-negative, got {self.count}")
        if not self.db or not self.term:
            raise ValueError("db and term must be non-empty")
        if self.fetched_at.tzinfo is None:
            raise ValueError("fetched_at must be timezone-aware")

    @property
    def key(self) -> CacheKey:
        return (self.db, self.term)

    def to_json(self) -> str:
        return json.dumps(
            {
                "db": self.db,
                "term": self.term,
                "count": self.count,
                "fetched_at": self.fetched_at.astimezone(timezone.utc).isoformat(),
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "CacheRecord":
        data = json.loads(line)
        if not isinstance(data, dict) or set(data) != {"db", "term", "count", "fetched_at"}:
            raise ValueError("unexpected record fields")
        return cls(
            data["db"], data["term"], data["count"], datetime.fromisoformat(data["fetched_at"])
        )


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class CountCache:
    """In-memory index over an optional backing file.

    With ``path=None`` the cache lives only in memory and :meth:`flush` is a
    no-op. Use as a context manager to flush on exit.
    """

    def __init__(self, path: Union[str, Path, None] = None):
        self.path = Path(path) if path is not None else None
        self._records: dict[CacheKey, CacheRecord] = {}
        self._pending: list[CacheRecord] = []
        self._lock = threading.RLock()
        self.corrupt_lines = 0

    @classmethod
    def load(cls, path: Union[str, Path]) -> "CountCache":
        cache = cls(path)
        assert cache.path is not None
        if not cache.path.exists():
            return cache
        with cache.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    record = CacheRecord.from_json(line)
                except (ValueError, TypeError, KeyError) as exc:
                    cache.corrupt_lines += 1
                    log.debug("%s:%d: skipping corrupt line (%s)", cache.path, lineno, exc)
                    continue
                cache._index(record)
        if cache.corrupt_lines:
            log.warning(
                "%s: skipped %d corrupt line(s)", cache.path, cache.corrupt_lines
            )
        return cache

    def _index(self, record: CacheRecord) -> None:
        current = self._records.get(record.key)
        if current is None or record.fetched_at >= current.fetched_at:
            self._records[record.key] = record

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: object) -> bool:
        return key in self._records

    def get(
        self,
        db: str,
        term: str,
        max_age: Optional[timedelta] = None,
        now: Callable[[], datetime] = _utcnow,
    ) -> Optional[int]:
        with self._lock:
            record = self._records.get((db, term))
        if record is None:
            return None
        if max_age is not None and now() - record.fetched_at > max_age:
            return None
        return record.count

    def put(self, record: CacheRecord) -> None:
        if not isinstance(record, CacheRecord):
            raise TypeError(f"expected CacheRecord, got {type(record).__name__}")
        with self._lock:
            self._index(record)
            self._pending.append(record)

    def flush(self) -> None:
        """Append pending records to the backing file and fsync it."""
        with self._lock:
            if self.path is None or not self._pending:
                self._pending.clear()
                return
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a+b") as fh:
                fh.seek(0, os.SEEK_END)
                if fh.tell():
                    fh.seek(-1, os.SEEK_END)
                    if fh.read(1) != b"\n":
                        fh.write(b"\n")
                payload = "".join(r.to_json() + "\n" for r in self._pending)
                fh.write(payload.encode("utf-8"))
                fh.flush()
                os.fsync(fh.fileno())
            self._pending.clear()

    def __enter__(self) -> "CountCache":
        return self

    def __exit__(self, *exc_info) -> None:
        self.flush()
