"""Yearly PubMed publication counts normalized by reference keywords."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    EmptyIntersection,
    EmptySet,
    EntrezError,
    InsufficientData,
    InvalidTerm,
    InvalidYear,
    MalformedBody,
    NonOkStatus,
    PubtrendError,
    ReplayMiss,
    RetriesExhausted,
    YearMismatch,
    ZeroMean,
)
from .series import ComparisonSet, CountSeries, Field, KeywordSpec, RatioSeries  # noqa: E402
from .metrics import (  # noqa: E402
    TrailingDip,
    align_years,
    detect_trailing_dip,
    normalize,
    normalize_by_reference,
    normalize_by_set,
    rank_by_stability,
    stability_score,
)
from .cache import CacheRecord, CountCache  # noqa: E402
from .transport import (  # noqa: E402
    LiveTransport,
    RateLimiter,
    RecordingTransport,
    ReplayTransport,
    TransportResponse,
    Unlimited,
)
from .entrez import (  # noqa: E402
    Credentials,
    EntrezQuery,
    RetryPolicy,
    build_term,
    encode_request,
    fetch_count,
    fetch_year_series,
    parse_count,
)
from .report import ChartSpec, render_svg, write_csv, write_svg  # noqa: E402

__all__ = [
    "__version__",
    "ConfigError",
    "EmptyIntersection",
    "EmptySet",
    "EntrezError",
    "InsufficientData",
    "InvalidTerm",
    "InvalidYear",
    "MalformedBody",
    "NonOkStatus",
    "PubtrendError",
    "ReplayMiss",
    "RetriesExhausted",
    "YearMismatch",
    "ZeroMean",
    "ComparisonSet",
    "CountSeries",
    "Field",
    "KeywordSpec",
    "RatioSeries",
    "TrailingDip",
    "align_years",
    "detect_trailing_dip",
    "normalize",
    "normalize_by_reference",
    "normalize_by_set",
    "rank_by_stability",
    "stability_score",
    "CacheRecord",
    "CountCache",
    "LiveTransport",
    "RateLimiter",
    "RecordingTransport",
    "ReplayTransport",
    "TransportResponse",
    "Unlimited",
    "Credentials",
    "EntrezQuery",
    "RetryPolicy",
    "build_term",
    "encode_request",
    "fetch_count",
    "fetch_year_series",
    "parse_count",
    "ChartSpec",
    "render_svg",
    "write_csv",
    "write_svg",
]
