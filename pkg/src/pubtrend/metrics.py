"""Normalization of publication counts against reference keywords.

Everything here is pure: no I/O, no clocks, inputs are never mutated.

A normalized value for a year is the keyword's count divided by the reference
count (one reference) or by the arithmetic mean of the reference counts (a
comparison set). A zero denominator gives ``None`` for that year instead of
an error, so a single empty year leaves a gap rather than sinking the series.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import (
    EmptyIntersection,
    InsufficientData,
    YearMismatch,
    ZeroMean,
)
from .series import ComparisonSet, CountSeries, KeywordSpec, RatioSeries

DIP_THRESHOLD = 0.5


def align_years(series: Sequence[CountSeries]) -> list[CountSeries]:
    """Restrict every series to the years all of them cover.

    The common range runs from the latest first year to the earliest last
    year. Years missing inside that range are filled with a count of 0.
    """
    if not series:
        raise ValueError("align_years needs at least one series")
    for s in series:
        if not len(s):
            raise ValueError(f"series for {s.label!r} is empty")
    start = max(s.years[0] for s in series)
    end = min(s.years[-1] for s in series)
    if start > end:
        raise EmptyIntersection(
            f"no common year across {', '.join(repr(s.label) for s in series)}"
        )
    years = range(start, end + 1)
    return [
        CountSeries(s.keyword, {y: s.counts.get(y, 0) for y in years}) for s in series
    ]


def _check_same_years(keyword: CountSeries, references: Sequence[CountSeries]) -> None:
    for ref in references:
        if ref.years != keyword.years:
            raise YearMismatch(
                f"{keyword.label!r} covers {_span(keyword)} but reference "
                f"{ref.label!r} covers {_span(ref)}; align the series first"
            )


def _span(series: CountSeries) -> str:
    if not len(series):
        return "no years"
    return f"{series.years[0]}-{series.years[-1]} ({len(series)} years)"


def normalize_by_reference(keyword: CountSeries, reference: CountSeries) -> RatioSeries:
    """Divide yearly keyword counts by a single reference keyword's counts."""
    _check_same_years(keyword, [reference])
    values: dict[int, Optional[float]] = {}
    for year, count in keyword.counts.items():
        denominator = reference.counts[year]
        values[year] = count / denominator if denominator > 0 else None
    return RatioSeries(keyword.keyword, reference.keyword.term, values)


def normalize_by_set(
    keyword: CountSeries, references: Union[ComparisonSet, Sequence[CountSeries]]
) -> RatioSeries:
    """Divide yearly keyword counts by the mean count of several references.

    Zero-count members still take part in the mean.
    """
    if not isinstance(references, ComparisonSet):
        references = ComparisonSet(references)
    members = references.members
    _check_same_years(keyword, members)
    n = references.n
    values: dict[int, Optional[float]] = {}
    for year, count in keyword.counts.items():
        total = sum(m.counts[year] for m in members)
        if total > 0:
            # must stay count / (total / n): n = 1 then matches normalize_by_reference bit for bit
            values[year] = count / (total / n)
        else:
            values[year] = None
    return RatioSeries(keyword.keyword, references.label, values)


def normalize(
    keyword: CountSeries, references: Sequence[CountSeries]
) -> RatioSeries:
    """Single reference -> plain ratio, several -> ratio to their mean."""
    if len(references) == 1:
        return normalize_by_reference(keyword, references[0])
    return normalize_by_set(keyword, references)


def stability_score(ratios: RatioSeries) -> float:
    """Coefficient of variation (sample sd / mean) of the defined values.

    Lower means steadier. Undefined years are skipped.
    """
    values = list(ratios.defined().values())
    if len(values) < 2:
        raise InsufficientData(
            f"{ratios.label!r} has {len(values)} defined values; need at least 2"
        )
    mean = statistics.fmean(values)
    if mean == 0:
        raise ZeroMean(f"defined values of {ratios.label!r} average to zero")
    return statistics.stdev(values) / mean


def rank_by_stability(candidates: Sequence[RatioSeries]) -> list[tuple[str, float]]:
    """``(label, score)`` pairs, most stable first."""
    scored = [(r.label, stability_score(r)) for r in candidates]
    return sorted(scored, key=lambda pair: pair[1])


@dataclass(frozen=True)
class TrailingDip:
    keyword: KeywordSpec
    year: int
    count: int
    previous_year: int
    previous_count: int

    @property
    def ratio(self) -> float:
        return self.count / self.previous_count

    def message(self) -> str:
        return (
            f"{self.keyword.term!r}: {self.year} count {self.count} is "
            f"{self.ratio:.2f}x the {self.previous_year} count {self.previous_count}; "
            "recent years may be incompletely indexed"
        )


def detect_trailing_dip(
    series: CountSeries, threshold: float = DIP_THRESHOLD
) -> Optional[TrailingDip]:
    """Flag a final year that falls below ``threshold`` times the year before.

    Recent years are often undercounted until indexing catches up, which
    shows up as a cliff at the end of a series.
    """
    if len(series) < 2:
        return None
    (prev_year, prev), (year, last) = list(series.counts.items())[-2:]
    if prev > 0 and last < threshold * prev:
        return TrailingDip(series.keyword, year, last, prev_year, prev)
    return None
