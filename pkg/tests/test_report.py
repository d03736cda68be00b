import io
import math
import re
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pubtrend import ChartSpec, CountSeries, KeywordSpec, RatioSeries, YearMismatch, render_svg, write_csv
from pubtrend.report import format_csv, format_value, nice_step, read_csv

SVG = "{http://www.w3.org/2000/svg}"


def ratio(values, term="x"):
    return RatioSeries(KeywordSpec(term), "banana", values)


def counts(values, term="x"):
    return CountSeries(KeywordSpec(term), values)


# -- CSV ------------------------------------------------------------------------------


def test_single_value():
    assert format_csv([("x", ratio({2000: 1.0}))]) == "year,x\n2000,1.00000\n"


def test_undefined_is_empty_cell():
    text = format_csv([("a", ratio({2000: None, 2001: 0.5})), ("b", ratio({2000: 2.0, 2001: 3.0}))])
    assert text.splitlines() == ["year,a,b", "2000,,2.00000", "2001,0.500000,3.00000"]


def test_counts_written_as_integers():
    assert format_csv([("banana", counts({1980: 12}))]) == "year,banana\n1980,12\n"


@pytest.mark.parametrize(
    "value, text",
    [
        (1.0, "1.00000"),
        (0.123456789, "0.123457"),
        (1234.5678, "1234.57"),
        (0.0, "0.00000"),
        (1e-7, "1.00000e-07"),
        (None, ""),
        (7, "7"),
    ],
)
def test_format_value(value, text):
    assert format_value(value) == text


def test_labels_with_commas_are_quoted():
    text = format_csv([("a, b", ratio({2000: 1.0}))])
    assert text.splitlines()[0] == 'year,"a, b"'


def test_write_csv_is_byte_deterministic(tmp_path):
    data = [("a", ratio({y: y / 7 for y in range(1990, 2000)}))]
    first, second = tmp_path / "1.csv", tmp_path / "2.csv"
    write_csv(data, first)
    write_csv(data, second)
    assert first.read_bytes() == second.read_bytes()
    assert b"\r" not in first.read_bytes()


def test_write_csv_to_stream():
    buf = io.StringIO()
    write_csv([("x", ratio({2000: 1.0}))], buf)
    assert buf.getvalue() == "year,x\n2000,1.00000\n"


def test_csv_requires_aligned_series():
    with pytest.raises(YearMismatch):
        format_csv([("a", ratio({2000: 1.0})), ("b", ratio({2001: 1.0}))])


@given(
    st.lists(
        st.one_of(st.none(), st.floats(0, 1e6, allow_nan=False, allow_infinity=False)),
        min_size=1,
        max_size=15,
    )
)
def test_csv_round_trip_within_six_digits(values):
    series = ratio(dict(enumerate(values, 1990)))
    parsed = read_csv(format_csv([("x", series)]))["x"]
    assert list(parsed) == list(series.values)
    for year, value in series.values.items():
        if value is None:
            assert parsed[year] is None
        else:
            assert math.isclose(parsed[year], value, rel_tol=5e-6, abs_tol=1e-300)


# -- SVG ------------------------------------------------------------------------------


def two_series_chart(**kw):
    a = ratio({y: 1 + (y - 2000) / 10 for y in range(2000, 2011)}, "a")
    b = ratio({y: 2 - (y - 2000) / 20 for y in range(2000, 2011)}, "b")
    return ChartSpec("Two", (("a", a), ("b", b)), **kw)


def parse(svg_text):
    return ET.fromstring(svg_text.encode("utf-8"))


def groups(root, cls):
    return [g for g in root.iter(SVG + "g") if g.get("class") == cls]


def points(polyline):
    return [tuple(map(float, p.split(","))) for p in polyline.get("points").split()]


def test_two_series_two_groups_two_legend_entries():
    root = parse(render_svg(two_series_chart()))
    assert len(groups(root, "series")) == 2
    assert len(groups(root, "legend-entry")) == 2
    labels = [t.text for g in groups(root, "legend-entry") for t in g.iter(SVG + "text")]
    assert labels == ["a", "b"]


def test_legend_colours_follow_palette():
    palette = ("#111111", "#222222", "#333333")
    root = parse(render_svg(two_series_chart(palette=palette)))
    series_colours = [g.get("stroke") for g in groups(root, "series")]
    legend_colours = [next(g.iter(SVG + "line")).get("stroke") for g in groups(root, "legend-entry")]
    assert series_colours == legend_colours == ["#111111", "#222222"]


def test_undefined_middle_year_splits_polyline():
    values = {2000: 1.0, 2001: 2.0, 2002: None, 2003: 2.0, 2004: 1.0}
    root = parse(render_svg(ChartSpec("gap", (("x", ratio(values)),))))
    (group,) = groups(root, "series")
    lines = list(group.iter(SVG + "polyline"))
    assert len(lines) == 2
    assert [len(points(p)) for p in lines] == [2, 2]


def test_every_defined_point_once_on_affine_axes():
    values = {y: ((y * 37) % 11) / 4 for y in range(1990, 2021)}
    values[1995] = None
    root = parse(render_svg(ChartSpec("affine", (("x", ratio(values)),))))
    pts = [pt for p in root.iter(SVG + "polyline") for pt in points(p)]
    defined = {y: v for y, v in values.items() if v is not None}
    assert len(pts) == len(defined)

    (y0, (x0, _)), (y1, (x1, _)) = list(zip(defined, pts))[0], list(zip(defined, pts))[-1]
    x_per_year = (x1 - x0) / (y1 - y0)
    for (year, value), (x, py) in zip(defined.items(), pts):
        assert x == pytest.approx(x0 + (year - y0) * x_per_year, abs=0.011)

    # y is affine in value: fit through two points with distinct values, check the rest
    items = list(zip(defined.values(), (p[1] for p in pts)))
    (va, pa), (vb, pb) = next((a, b) for a in items for b in items if a[0] != b[0])
    slope = (pb - pa) / (vb - va)
    for value, py in items:
        assert py == pytest.approx(pa + (value - va) * slope, abs=0.011)
    assert slope < 0  # larger values are drawn higher up


def test_log_scale_drops_zero_values_and_is_log_affine():
    values = {2000: 0.01, 2001: 0.1, 2002: 0.0, 2003: 1.0, 2004: 10.0}
    root = parse(render_svg(ChartSpec("log", (("x", ratio(values)),), log_scale=True)))
    lines = list(root.iter(SVG + "polyline"))
    assert len(lines) == 2
    ys = [py for p in lines for _, py in points(p)]
    steps = [b - a for a, b in zip(ys, ys[1:])]
    assert steps[0] == pytest.approx(steps[1], abs=0.02) == pytest.approx(steps[2], abs=0.02)


def test_counts_can_be_charted():
    root = parse(render_svg(ChartSpec("counts", (("banana", counts({1980: 12, 1990: 26})),), y_label="Papers")))
    assert len(list(root.iter(SVG + "polyline"))) == 1


def test_escapes_markup_in_labels():
    svg = render_svg(ChartSpec('<b>&"', (('a<b>"&', ratio({2000: 1.0, 2001: 2.0})),)))
    root = parse(svg)
    assert any(t.text == 'a<b>"&' for t in root.iter(SVG + "text"))


def test_deterministic_and_timestamp_free():
    first = render_svg(two_series_chart())
    assert first == render_svg(two_series_chart())
    assert not re.search(r"20\d\d-\d\d-\d\d", first)


def test_single_year_chart_renders():
    root = parse(render_svg(ChartSpec("one", (("x", ratio({2000: 3.0})),))))
    assert len(list(root.iter(SVG + "polyline"))) == 1


def test_all_undefined_chart_renders():
    root = parse(render_svg(ChartSpec("none", (("x", ratio({2000: None, 2001: None})),))))
    assert list(root.iter(SVG + "polyline")) == []


def test_chart_validation():
    with pytest.raises(ValueError):
        ChartSpec("empty", ())
    with pytest.raises(ValueError):
        two_series_chart(palette=("#000000",))
    with pytest.raises(YearMismatch):
        ChartSpec("bad", (("a", ratio({2000: 1.0})), ("b", ratio({2001: 1.0}))))


@pytest.mark.parametrize("span, step", [(1.0, 0.2), (0.12, 0.02), (95000, 20000), (30, 5), (7, 2)])
def test_nice_step(span, step):
    assert nice_step(span) == pytest.approx(step)
