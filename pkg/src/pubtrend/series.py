"""Value types shared by the fetching, metrics and reporting layers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from .errors import EmptySet, InvalidTerm


class Field(enum.Enum):
    """Entrez search field. The value is the tag as it appears in the query."""

    TEXT = "text"
    MESH = "MESH"

    @classmethod
    def parse(cls, name: "str | Field") -> "Field":
        if isinstance(name, Field):
            return name
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown search field {name!r}; expected text or mesh") from None


@dataclass(frozen=True)
class KeywordSpec:
    term: str
    field: Field = Field.TEXT
    database: str = "pubmed"

    def __post_init__(self) -> None:
        if not isinstance(self.term, str) or not self.term.strip():
            raise InvalidTerm("search term must be a non-empty string")
        if '"' in self.term:
            raise InvalidTerm(f"search term may not contain double quotes: {self.term!r}")
        if not self.database:
            raise ValueError("database must be non-empty")
        object.__setattr__(self, "field", Field.parse(self.field))

    def __str__(self) -> str:
        return self.term


def _frozen_years(values: Mapping[int, object]) -> Mapping[int, object]:
    return MappingProxyType({year: values[year] for year in sorted(values)})


@dataclass(frozen=True, eq=True)
class CountSeries:
    """Yearly publication counts for one keyword.

    ``counts`` is copied into a read-only mapping ordered by year.
    """

    keyword: KeywordSpec
    counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for year, count in self.counts.items():
            if not isinstance(year, int) or isinstance(year, bool):
                raise TypeError(f"year must be an int, got {year!r}")
            if not isinstance(count, int) or isinstance(count, bool):
                raise TypeError(f"count for {year} must be an int, got {count!r}")
            if count < 0:
                raise ValueError(f"count for {year} is negative: {count}")
        object.__setattr__(self, "counts", _frozen_years(self.counts))

    @property
    def years(self) -> Tuple[int, ...]:
        return tuple(self.counts)

    @property
    def label(self) -> str:
        return self.keyword.term

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.counts)

    def __getitem__(self, year: int) -> int:
        return self.counts[year]

    def is_contiguous(self) -> bool:
        years = self.years
        return not years or years[-1] - years[0] + 1 == len(years)


@dataclass(frozen=True, eq=True)
class RatioSeries:
    """Yearly normalized interest. ``None`` marks a year whose denominator was zero."""

    keyword: KeywordSpec
    reference_label: str
    values: Mapping[int, Optional[float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for year, value in self.values.items():
            if value is not None and not value >= 0:
                raise ValueError(f"ratio for {year} must be non-negative, got {value!r}")
        object.__setattr__(self, "values", _frozen_years(self.values))

    @property
    def years(self) -> Tuple[int, ...]:
        return tuple(self.values)

    @property
    def label(self) -> str:
        return self.keyword.term

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __getitem__(self, year: int) -> Optional[float]:
        return self.values[year]

    def is_defined(self, year: int) -> bool:
        return self.values[year] is not None

    def defined(self) -> dict[int, float]:
        return {y: v for y, v in self.values.items() if v is not None}


@dataclass(frozen=True)
class ComparisonSet:
    """Reference keywords whose yearly mean forms the denominator."""

    members: Tuple[CountSeries, ...]

    def __init__(self, members: Iterable[CountSeries]):
        members = tuple(members)
        if not members:
            raise EmptySet("a comparison set needs at least one reference series")
        object.__setattr__(self, "members", members)

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def label(self) -> str:
        terms = [m.keyword.term for m in self.members]
        if len(terms) == 1:
            return terms[0]
        return "mean(" + ", ".join(terms) + ")"


Series = Union[CountSeries, RatioSeries]
LabeledSeries = Tuple[str, Series]


def series_values(series: Series) -> Mapping[int, Union[int, float, None]]:
    """The year -> value mapping of either series type."""
    return series.counts if isinstance(series, CountSeries) else series.values


def labeled(series: Sequence[Series]) -> list[LabeledSeries]:
    return [(s.label, s) for s in series]
