"""CSV tables and SVG line charts for count and ratio series.

Both outputs are pure functions of their inputs, so identical series always
produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape, quoteattr

from .errors import YearMismatch
from .series import LabeledSeries, series_values

PALETTE: Tuple[str, ...] = (
    "#1f77b4",
    "#2ca02c",
    "#9467bd",
    "#d62728",
    "#ff7f0e",
    "#8c564b",
    "#e6b800",
    "#17becf",
)

Output = Union[str, Path, IO[str], None]


def _shared_years(series: Sequence[LabeledSeries]) -> Tuple[int, ...]:
    if not series:
        raise ValueError("need at least one series")
    years = tuple(series_values(series[0][1]))
    for label, s in series[1:]:
        if tuple(series_values(s)) != years:
            raise YearMismatch(f"series {label!r} does not cover the same years")
    return years


def format_value(value: Union[int, float, None]) -> str:
    """Counts verbatim, ratios to 6 significant digits, undefined as empty."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:#.6g}"


def format_csv(series: Sequence[LabeledSeries]) -> str:
    years = _shared_years(series)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["year", *(label for label, _ in series)])
    columns = [series_values(s) for _, s in series]
    for year in years:
        writer.writerow([year, *(format_value(col[year]) for col in columns)])
    return buf.getvalue()


def _emit(text: str, out: Output) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    elif isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def write_csv(series: Sequence[LabeledSeries], out: Output) -> None:
    """Write ``year,<label>...`` rows, one per year, ascending.

    ``out`` may be a path, an open text stream, or ``"-"``/``None`` for stdout.
    """
    _emit(format_csv(series), out)


def read_csv(text: str) -> dict[str, dict[int, Optional[float]]]:
    """Parse a table written by :func:`write_csv` back into per-label columns."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    out: dict[str, dict[int, Optional[float]]] = {label: {} for label in header[1:]}
    for row in body:
        year = int(row[0])
        for label, cell in zip(header[1:], row[1:]):
            out[label][year] = float(cell) if cell else None
    return out


# -- SVG ------------------------------------------------------------------------


@dataclass(frozen=True)
class ChartSpec:
    title: str
    series: Tuple[LabeledSeries, ...]
    y_label: str = "Ratio"
    x_label: str = "Year"
    width: int = 860
    height: int = 500
    palette: Tuple[str, ...] = PALETTE
    log_scale: bool = False
    years: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "series", tuple(self.series))
        object.__setattr__(self, "palette", tuple(self.palette))
        if not self.series:
            raise ValueError("a chart needs at least one series")
        object.__setattr__(self, "years", _shared_years(self.series))
        if not self.years:
            raise ValueError("series have no years")
        if len(self.palette) < len(self.series):
            raise ValueError(
                f"palette has {len(self.palette)} colours for {len(self.series)} series"
            )
        if self.width < 200 or self.height < 150:
            raise ValueError("chart is too small to draw")


MARGIN_LEFT = 80
MARGIN_RIGHT = 210
MARGIN_TOP = 50
MARGIN_BOTTOM = 60


def nice_step(span: float, target: int = 6) -> float:
    """A 1/2/5 x 10^k step giving roughly ``target`` intervals over ``span``."""
    if span <= 0:
        return 1.0
    raw = span / target
    magnitude = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * magnitude:
            return mult * magnitude
    return 10 * magnitude


def _tick_text(value: float, step: float) -> str:
    decimals = max(0, -math.floor(math.log10(step))) if step < 1 else 0
    return f"{value:.{decimals}f}"


class _Axes:
    """Affine (or log-affine) maps from data space to pixels."""

    def __init__(self, spec: ChartSpec, values: Sequence[float]):
        self.left = MARGIN_LEFT
        self.right = spec.width - MARGIN_RIGHT
        self.top = MARGIN_TOP
        self.bottom = spec.height - MARGIN_BOTTOM
        self.year0, self.year1 = spec.years[0], spec.years[-1]
        self.log = spec.log_scale
        if self.log:
            positive = [v for v in values if v > 0] or [1.0]
            self.lo = math.floor(math.log10(min(positive)))
            self.hi = math.ceil(math.log10(max(positive)))
            if self.hi == self.lo:
                self.hi += 1
        else:
            top = max(values, default=0.0)
            self.step = nice_step(top if top > 0 else 1.0)
            self.lo = 0.0
            self.hi = self.step * math.ceil((top if top > 0 else 1.0) / self.step)

    def x(self, year: int) -> float:
        if self.year1 == self.year0:
            return (self.left + self.right) / 2
        frac = (year - self.year0) / (self.year1 - self.year0)
        return self.left + frac * (self.right - self.left)

    def y(self, value: float) -> float:
        v = math.log10(value) if self.log else value
        frac = (v - self.lo) / (self.hi - self.lo)
        return self.bottom - frac * (self.bottom - self.top)

    def plottable(self, value: Optional[float]) -> bool:
        return value is not None and (value > 0 or not self.log)

    def y_ticks(self) -> list[tuple[float, str]]:
        if self.log:
            return [(10.0**e, f"{10.0**e:g}") for e in range(int(self.lo), int(self.hi) + 1)]
        n = round(self.hi / self.step)
        return [(i * self.step, _tick_text(i * self.step, self.step)) for i in range(n + 1)]

    def x_ticks(self) -> list[int]:
        span = self.year1 - self.year0
        step = max(1, int(nice_step(span, 8))) if span else 1
        first = math.ceil(self.year0 / step) * step
        return list(range(first, self.year1 + 1, step))


def _segments(years: Sequence[int], values, axes: _Axes) -> list[list[tuple[int, float]]]:
    segments: list[list[tuple[int, float]]] = []
    current: list[tuple[int, float]] = []
    for year in years:
        value = values[year]
        if axes.plottable(value):
            current.append((year, float(value)))
        elif current:
            segments.append(current)
            current = []
    if current:
        segments.append(current)
    return segments


def _pt(x: float, y: float) -> str:
    return f"{x:.2f},{y:.2f}"


def render_svg(spec: ChartSpec) -> str:
    """Draw each series as a polyline, broken wherever a value is undefined."""
    columns = [series_values(s) for _, s in spec.series]
    values = [float(v) for col in columns for v in col.values() if v is not None]
    axes = _Axes(spec, values)
    font = 'font-family="Helvetica, Arial, sans-serif"'
    out: list[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="#ffffff"/>',
        f'<text class="title" x="{(axes.left + axes.right) / 2:.2f}" y="28" '
        f'text-anchor="middle" font-size="18" {font}>{escape(spec.title)}</text>',
    ]

    out.append('<g class="axes" stroke="#333333" stroke-width="1">')
    out.append(f'<line x1="{axes.left}" y1="{axes.bottom}" x2="{axes.right}" y2="{axes.bottom}"/>')
    out.append(f'<line x1="{axes.left}" y1="{axes.top}" x2="{axes.left}" y2="{axes.bottom}"/>')
    out.append("</g>")

    out.append(f'<g class="x-ticks" font-size="11" {font}>')
    for year in axes.x_ticks():
        x = axes.x(year)
        out.append(
            f'<line x1="{x:.2f}" y1="{axes.bottom}" x2="{x:.2f}" y2="{axes.bottom + 5}" stroke="#333333"/>'
        )
        out.append(f'<text x="{x:.2f}" y="{axes.bottom + 18}" text-anchor="middle">{year}</text>')
    out.append("</g>")

    out.append(f'<g class="y-ticks" font-size="11" {font}>')
    for value, text in axes.y_ticks():
        y = axes.y(value)
        out.append(
            f'<line x1="{axes.left - 5}" y1="{y:.2f}" x2="{axes.right}" y2="{y:.2f}" '
            'stroke="#dddddd"/>'
        )
        out.append(f'<text x="{axes.left - 8}" y="{y + 4:.2f}" text-anchor="end">{text}</text>')
    out.append("</g>")

    mid_y = (axes.top + axes.bottom) / 2
    out.append(
        f'<text class="x-label" x="{(axes.left + axes.right) / 2:.2f}" y="{spec.height - 15}" '
        f'text-anchor="middle" font-size="13" {font}>{escape(spec.x_label)}</text>'
    )
    out.append(
        f'<text class="y-label" x="20" y="{mid_y:.2f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 20 {mid_y:.2f})" {font}>{escape(spec.y_label)}</text>'
    )

    for (label, _), column, colour in zip(spec.series, columns, spec.palette):
        out.append(
            f'<g class="series" data-label={quoteattr(label)} fill="none" '
            f'stroke="{colour}" stroke-width="2" stroke-linejoin="round" stroke-linecap="round">'
        )
        for segment in _segments(spec.years, column, axes):
            points = " ".join(_pt(axes.x(year), axes.y(v)) for year, v in segment)
            out.append(f'<polyline points="{points}"/>')
        out.append("</g>")

    legend_x = axes.right + 20
    out.append(f'<g class="legend" font-size="12" {font}>')
    for i, ((label, _), colour) in enumerate(zip(spec.series, spec.palette)):
        y = axes.top + 10 + i * 20
        out.append(f'<g class="legend-entry" data-label={quoteattr(label)}>')
        out.append(
            f'<line x1="{legend_x}" y1="{y}" x2="{legend_x + 24}" y2="{y}" '
            f'stroke="{colour}" stroke-width="3"/>'
        )
        out.append(f'<text x="{legend_x + 30}" y="{y + 4}">{escape(label)}</text>')
        out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(spec: ChartSpec, out: Output) -> None:
    _emit(render_svg(spec), out)
