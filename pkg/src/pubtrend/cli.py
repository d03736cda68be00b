"""``pubtrend`` command line.

Example::

    pubtrend --keyword "prefrontal cortex" --keyword amygdala \\
             --reference banana --years 1990:2020 --csv out.csv --svg out.svg

Credentials come from ``PUBTREND_API_KEY``, ``PUBTREND_EMAIL`` and
``PUBTREND_TOOL`` unless given as flags.

Exit codes: 0 success, 2 bad usage, 3 network or fixture failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import enum
import logging
import os
import sys
from dataclasses import dataclass
from datetime import timedelta
from typing import IO, Mapping, Optional, Sequence, Tuple

from . import __version__
from .cache import CountCache
from .entrez import Credentials, RetryPolicy, fetch_year_series
from .errors import ConfigError, EntrezError, PubtrendError
from .metrics import align_years, detect_trailing_dip, normalize, stability_score
from .report import ChartSpec, write_csv, write_svg
from .series import CountSeries, Field, KeywordSpec, RatioSeries
from .transport import (
    Limiter,
    LiveTransport,
    RateLimiter,
    RecordingTransport,
    ReplayTransport,
    Transport,
    Unlimited,
)

PROG = "pubtrend"
DEFAULT_CACHE = "./pubtrend-cache.jsonl"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FETCH = 3
EXIT_IO = 4


class Mode(enum.Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


@dataclass(frozen=True)
class StudyConfig:
    keywords: Tuple[KeywordSpec, ...]
    references: Tuple[KeywordSpec, ...]
    years: Tuple[int, int]
    database: str = "pubmed"
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None
    credentials: Optional[Credentials] = None
    cache_path: Optional[str] = DEFAULT_CACHE
    mode: Mode = Mode.LIVE
    fixture_path: Optional[str] = None
    stability: bool = False
    log_scale: bool = False
    title: Optional[str] = None
    max_age: Optional[timedelta] = None

    def __post_init__(self) -> None:
        if not self.keywords:
            raise ConfigError("at least one --keyword is required")
        if not self.references:
            raise ConfigError("at least one --reference is required")
        start, end = self.years
        if start > end:
            raise ConfigError(f"--years start {start} is after end {end}")
        if self.mode in (Mode.RECORD, Mode.REPLAY) and not self.fixture_path:
            raise ConfigError(f"--mode {self.mode.value} requires --fixtures")
        if self.max_age is not None and self.max_age <= timedelta(0):
            raise ConfigError("--max-age must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog=PROG,
        description="Yearly PubMed counts for keywords, normalized by reference keywords.",
        allow_abbrev=False,
    )
    p.add_argument("--keyword", action="append", default=[], metavar="TERM",
                   help="keyword of interest (repeatable)")
    p.add_argument("--reference", action="append", default=[], metavar="TERM",
                   help="reference keyword; several are averaged (repeatable)")
    p.add_argument("--years", metavar="A:B", help="inclusive year range, e.g. 1990:2020")
    p.add_argument("--field", choices=["text", "mesh"], default="text",
                   help="search field for all terms (default: text)")
    p.add_argument("--db", default="pubmed", help="Entrez database (default: pubmed)")
    p.add_argument("--csv", metavar="PATH", help="write ratios as CSV ('-' for stdout)")
    p.add_argument("--svg", metavar="PATH", help="write ratio chart as SVG ('-' for stdout)")
    p.add_argument("--mode", choices=[m.value for m in Mode], default="live",
                   help="live queries NCBI, record also saves fixtures, replay reads them (default: live)")
    p.add_argument("--fixtures", metavar="PATH",
                   help="fixture file or directory for record/replay")
    p.add_argument("--cache", metavar="PATH",
                   help=f"count cache file (default: {DEFAULT_CACHE}; in-memory in replay mode)")
    p.add_argument("--max-age", type=float, metavar="DAYS",
                   help="refetch cached counts older than this (default: never)")
    p.add_argument("--stability", action="store_true",
                   help="print the coefficient of variation of each keyword's ratio")
    p.add_argument("--log-scale", action="store_true", help="logarithmic y axis in the SVG")
    p.add_argument("--title", help="chart title")
    p.add_argument("--api-key", help="NCBI API key (env PUBTREND_API_KEY)")
    p.add_argument("--email", help="contact email sent to NCBI (env PUBTREND_EMAIL)")
    p.add_argument("--tool", help="tool name sent to NCBI (env PUBTREND_TOOL)")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def parse_years(text: Optional[str]) -> Tuple[int, int]:
    if not text:
        raise ConfigError("--years A:B is required")
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise ConfigError(f"--years expects A:B, got {text!r}") from None


def load_config(
    argv: Optional[Sequence[str]] = None, env: Optional[Mapping[str, str]] = None
) -> StudyConfig:
    """Flags win over environment variables, which win over defaults."""
    env = os.environ if env is None else env
    args = build_parser().parse_args(argv)
    if not args.keyword or not args.reference:
        raise ConfigError("--keyword and --reference are both required")
    field = Field.parse(args.field)
    try:
        keywords = tuple(KeywordSpec(t, field, args.db) for t in args.keyword)
        references = tuple(KeywordSpec(t, field, args.db) for t in args.reference)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    from_env = Credentials.from_env(env) or Credentials()
    creds = Credentials(
        api_key=args.api_key or from_env.api_key,
        tool=args.tool or from_env.tool,
        email=args.email or from_env.email,
    )
    mode = Mode(args.mode)
    cache = args.cache
    if cache is None and mode is not Mode.REPLAY:
        cache = DEFAULT_CACHE
    csv_path = args.csv
    if csv_path is None and args.svg is None:
        csv_path = "-"
    return StudyConfig(
        keywords=keywords,
        references=references,
        years=parse_years(args.years),
        database=args.db,
        csv_path=csv_path,
        svg_path=args.svg,
        credentials=creds or None,
        cache_path=cache,
        mode=mode,
        fixture_path=args.fixtures,
        stability=args.stability,
        log_scale=args.log_scale,
        title=args.title,
        max_age=None if args.max_age is None else timedelta(days=args.max_age),
    )


def make_transport(config: StudyConfig) -> Transport:
    if config.mode is Mode.REPLAY:
        return ReplayTransport.from_file(config.fixture_path)  # type: ignore[arg-type]
    if config.mode is Mode.RECORD:
        return RecordingTransport(LiveTransport(), config.fixture_path)  # type: ignore[arg-type]
    return LiveTransport()


@dataclass
class StudyResult:
    counts: list[CountSeries]
    ratios: list[RatioSeries]
    warnings: list[str]
    stability: list[tuple[str, Optional[float]]]


def compute_study(
    config: StudyConfig, transport: Transport, cache: CountCache, limiter: Limiter
) -> StudyResult:
    """Fetch, align and normalize; no output is written."""
    creds = config.credentials
    fetched = [
        fetch_year_series(
            spec, config.years, transport, limiter, cache, creds, RetryPolicy(), max_age=config.max_age
        )
        for spec in (*config.keywords, *config.references)
    ]
    aligned = align_years(fetched)
    keyword_series = aligned[: len(config.keywords)]
    reference_series = aligned[len(config.keywords):]
    ratios = [normalize(k, reference_series) for k in keyword_series]

    warnings = [dip.message() for dip in map(detect_trailing_dip, aligned) if dip]
    stability: list[tuple[str, Optional[float]]] = []
    if config.stability:
        for r in ratios:
            try:
                stability.append((r.label, stability_score(r)))
            except PubtrendError as exc:
                warnings.append(f"{r.label!r}: no stability score ({exc})")
                stability.append((r.label, None))
    return StudyResult(aligned, ratios, warnings, stability)


def run_study(
    config: StudyConfig,
    transport: Optional[Transport] = None,
    stdout: Optional[IO[str]] = None,
    stderr: Optional[IO[str]] = None,
) -> int:
    """Run a study end to end and return the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        if transport is None:
            transport = make_transport(config)
        cache = CountCache.load(config.cache_path) if config.cache_path else CountCache()
        if config.mode is Mode.REPLAY:
            limiter: Limiter = Unlimited()
        else:
            limiter = RateLimiter.for_ncbi(config.credentials.api_key if config.credentials else None)
        try:
            result = compute_study(config, transport, cache, limiter)
        finally:
            cache.flush()

        for line in result.warnings:
            print(f"{PROG}: warning: {line}", file=stderr)
        if result.stability:
            ranked = sorted(
                result.stability, key=lambda p: (p[1] is None, p[1] if p[1] is not None else 0)
            )
            for label, score in ranked:
                shown = "n/a" if score is None else f"{score:.4f}"
                print(f"stability\t{label}\t{shown}", file=stdout)

        labeled = [(r.label, r) for r in result.ratios]
        if config.csv_path:
            write_csv(labeled, stdout if config.csv_path == "-" else config.csv_path)
        if config.svg_path:
            reference_label = result.ratios[0].reference_label
            chart = ChartSpec(
                title=config.title or f"Publications relative to {reference_label}",
                series=tuple(labeled),
                y_label=f"Ratio to {reference_label}",
                log_scale=config.log_scale,
            )
            write_svg(chart, stdout if config.svg_path == "-" else config.svg_path)
    except EntrezError as exc:
        return _fail(stderr, EXIT_FETCH, _describe(exc))
    except ConfigError as exc:
        return _fail(stderr, EXIT_USAGE, str(exc))
    except PubtrendError as exc:
        return _fail(stderr, EXIT_FETCH, str(exc))
    except OSError as exc:
        where = f" {exc.filename}" if exc.filename else ""
        return _fail(stderr, EXIT_IO, f"I/O failure{where}: {exc.strerror or exc}")
    return EXIT_OK


def _describe(exc: Exception) -> str:
    keyword = getattr(exc, "keyword", None)
    year = getattr(exc, "year", None)
    if keyword is not None and year is not None:
        return f"{keyword.term!r} {year}: {exc}"
    return str(exc)


def _fail(stderr: IO[str], code: int, message: str) -> int:
    print(f"{PROG}: error: {' '.join(message.split())}", file=stderr)
    return code


def main(
    argv: Optional[Sequence[str]] = None,
    env: Optional[Mapping[str, str]] = None,
    stdout: Optional[IO[str]] = None,
    stderr: Optional[IO[str]] = None,
) -> int:
    stderr = stderr or sys.stderr
    try:
        config = load_config(argv, env)
    except ConfigError as exc:
        return _fail(stderr, EXIT_USAGE, f"{exc} (see {PROG} --help)")
    logging.basicConfig(level=logging.WARNING, format=f"{PROG}: %(levelname)s: %(message)s")
    return run_study(config, stdout=stdout, stderr=stderr)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
