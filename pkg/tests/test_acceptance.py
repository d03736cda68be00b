"""Acceptance suite: one test per criterion, each tagged for the PASS/FAIL summary.

Everything runs offline against the committed fixtures in ``studies/fixtures``.
"""

import io
import json
import math
import random
import time
import xml.etree.ElementTree as ET
from datetime import datetime, timedelta, timezone
from urllib.parse import unquote_plus

import pytest

from pubtrend import (
    CacheRecord,
    CountCache,
    CountSeries,
    Field,
    KeywordSpec,
    RateLimiter,
    ReplayTransport,
    Unlimited,
    build_term,
    detect_trailing_dip,
    fetch_year_series,
    normalize_by_reference,
    normalize_by_set,
    stability_score,
)
from pubtrend.cli import main

from .conftest import FIXTURES, FakeClock

criterion = pytest.mark.criterion


def fixture_counts(name):
    """Independent reading of a fixture file: {(term, field, year): count}."""
    counts = {}
    for line in (FIXTURES / name).read_text(encoding="utf-8").splitlines():
        row = json.loads(line)
        query = row["url"].split("term=", 1)[1].split("&", 1)[0]
        text = unquote_plus(query.replace("%2B", "\0")).replace("\0", "+")
        head, year = text.rsplit(" AND ", 1)
        term, field = head[1:].rsplit('"[', 1)
        counts[(term, field.rstrip("]"), int(year[:4]))] = int(json.loads(row["body"])["esearchresult"]["count"])
    return counts


def fetch(term, years, replay, field=Field.TEXT):
    return fetch_year_series(KeywordSpec(term, field), years, replay, Unlimited())


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, env={}, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@criterion(1, "banana counts 12/26/83/170/420 from replay fixtures in < 1 s")
def test_banana_counts():
    started = time.perf_counter()
    replay = ReplayTransport.from_file(FIXTURES / "fig2_fruit.jsonl")
    series = fetch("banana", (1980, 2019), replay)
    elapsed = time.perf_counter() - started
    assert [series[y] for y in (1980, 1990, 2000, 2010, 2019)] == [12, 26, 83, 170, 420]
    assert elapsed < 1.0


def _random_series(rng, years):
    return {y: rng.choice([0, 0, rng.randint(1, 9), rng.randint(0, 5000)]) for y in years}


@criterion(2, "ratio properties over 1,000 randomized series in < 5 s")
def test_ratio_properties():
    rng = random.Random(20210208)
    started = time.perf_counter()
    for _ in range(1000):
        years = range(2000, 2000 + rng.randint(1, 8))
        keyword = CountSeries(KeywordSpec("k"), _random_series(rng, years))
        refs = [CountSeries(KeywordSpec(f"r{j}"), _random_series(rng, years)) for j in range(rng.randint(1, 4))]
        ratio = normalize_by_set(keyword, refs)

        # n = 1 equivalence, bit for bit
        single = normalize_by_set(keyword, refs[:1]).values
        assert single == normalize_by_reference(keyword, refs[0]).values

        for year in years:
            total = sum(r[year] for r in refs)
            value = ratio.values[year]
            # zero denominator <=> undefined
            assert (value is None) == (total == 0)
            if value is not None:
                assert value == pytest.approx(keyword[year] * len(refs) / total, rel=1e-12)

        # scale invariance: scaling keyword and references together changes nothing
        c = rng.randint(2, 1000)
        scaled_k = CountSeries(keyword.keyword, {y: c * n for y, n in keyword.counts.items()})
        scaled_r = [CountSeries(r.keyword, {y: c * n for y, n in r.counts.items()}) for r in refs]
        for year, value in normalize_by_set(scaled_k, scaled_r).values.items():
            if value is None:
                assert ratio.values[year] is None
            else:
                assert value == pytest.approx(ratio.values[year], rel=1e-12)

        # monotonicity: more keyword papers never lowers the ratio, more reference papers never raises it
        year = rng.choice(list(years))
        bumped_k = CountSeries(keyword.keyword, {**keyword.counts, year: keyword[year] + rng.randint(1, 50)})
        bumped_r = [CountSeries(refs[0].keyword, {**refs[0].counts, year: refs[0][year] + rng.randint(1, 50)})]
        bumped_r += refs[1:]
        before = ratio.values[year]
        after_k = normalize_by_set(bumped_k, refs).values[year]
        after_r = normalize_by_set(keyword, bumped_r).values[year]
        if before is not None:
            assert after_k >= before
            assert after_r <= before
    assert time.perf_counter() - started < 5.0


@criterion(3, "query template is byte-exact")
def test_query_template():
    assert build_term(KeywordSpec("H1N1", Field.TEXT), 2018) == '"H1N1"[text]+AND+2018[pdat]'


@criterion(4, "SARS-CoV-2 / virus exceeds 1.0 in 2020")
def test_sars_cov_2_headline(replay):
    ratio = normalize_by_reference(fetch("SARS-CoV-2", (2020, 2020), replay), fetch("virus", (2020, 2020), replay))
    assert ratio.values[2020] > 1.0


@criterion(5, "SMA about as interesting as a banana; PFC rises against brain")
def test_neuroimaging_shape(replay):
    sma = normalize_by_reference(
        fetch("supplementary motor area", (2010, 2019), replay), fetch("banana", (2010, 2019), replay)
    )
    mean = sum(sma.values.values()) / len(sma.values)
    assert 0.5 <= mean <= 2.0
    pfc = normalize_by_reference(fetch("prefrontal cortex", (1990, 2019), replay), fetch("brain", (1990, 2019), replay))
    assert pfc.values[2019] > pfc.values[1990]


ENDOCRINE = [
    "Adrenal Gland Neoplasms",
    "Ovarian Neoplasms",
    "Pancreatic Neoplasms",
    "Pituitary Neoplasms",
    "Testicular Neoplasms",
    "Thyroid Neoplasms",
    "Endocrine Gland Neoplasms",
]


@criterion(6, "trailing dip fires exactly for <50% final years and the CLI warns")
def test_endocrine_dip(replay):
    raw = fixture_counts("example4_endocrine.jsonl")
    expected = {t for t in ENDOCRINE if raw[(t, "MESH", 2020)] < 0.5 * raw[(t, "MESH", 2019)]}
    assert expected  # the fixtures must exercise the detector
    fired = {t for t in ENDOCRINE if detect_trailing_dip(fetch(t, (1970, 2020), replay, Field.MESH))}
    assert fired == expected

    argv = ["--field", "mesh", "--years", "1970:2020", "--mode", "replay",
            "--fixtures", str(FIXTURES / "example4_endocrine.jsonl"), "--reference", "Endocrine Gland Neoplasms"]
    for term in ENDOCRINE[:-1]:
        argv += ["--keyword", term]
    code, _, err = run_cli(argv)
    assert code == 0
    warned = {t for t in ENDOCRINE if any(t in line and "warning" in line for line in err.splitlines())}
    assert warned == expected


FRUITS = ["blueberry", "apple", "blackberry", "strawberry", "orange", "banana"]


@criterion(7, "banana is the most stable fruit against fruit")
def test_fruit_stability(replay):
    fruit = fetch("fruit", (1980, 2019), replay)
    raw = fixture_counts("fig2_fruit.jsonl")
    scores = {}
    for name in FRUITS:
        ratio = normalize_by_reference(fetch(name, (1980, 2019), replay), fruit)
        scores[name] = stability_score(ratio)
        # oracle: coefficient of variation computed by hand from the raw fixture counts
        values = [raw[(name, "text", y)] / raw[("fruit", "text", y)] for y in range(1980, 2020)]
        mean = sum(values) / len(values)
        sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1))
        assert scores[name] == pytest.approx(sd / mean, rel=1e-9)
    assert min(scores, key=scores.get) == "banana"


@criterion(8, "no more than 3 request starts per sliding second without a key")
def test_rate_limit():
    clock = FakeClock()
    limiter = RateLimiter.for_ncbi(None, clock=clock, sleep=clock.sleep)
    starts = []
    for _ in range(100):
        limiter.acquire()
        starts.append(clock())
    worst = max(sum(1 for s in starts if t <= s < t + 1.0) for t in starts)
    assert worst <= 3


@criterion(9, "two replay runs of the cancer study are byte-identical and the SVG is strict XML")
def test_determinism(tmp_path):
    outputs = []
    for run in ("a", "b"):
        csv, svg = tmp_path / f"{run}.csv", tmp_path / f"{run}.svg"
        argv = ["--reference", "cancer", "--years", "1970:2020", "--mode", "replay",
                "--fixtures", str(FIXTURES / "example2_cancer.jsonl"), "--csv", str(csv), "--svg", str(svg)]
        for term in ["lung cancer", "breast cancer", "colorectal cancer", "prostate cancer",
                     "skin cancer", "testicular cancer"]:
            argv += ["--keyword", term]
        code, _, err = run_cli(argv)
        assert code == 0, err
        outputs.append((csv.read_bytes(), svg.read_bytes()))
    assert outputs[0] == outputs[1]
    root = ET.fromstring(outputs[0][1])
    assert root.tag == "{http://www.w3.org/2000/svg}svg"


@criterion(10, "cache round-trip, append-only flush and corrupt-line tolerance")
def test_cache(tmp_path):
    rng = random.Random(7)
    t0 = datetime(2021, 2, 8, tzinfo=timezone.utc)
    path = tmp_path / "cache.jsonl"
    expected = {}
    with CountCache.load(path) as cache:
        for _ in range(200):
            key = (rng.choice(["pubmed", "pmc"]), build_term(KeywordSpec(rng.choice(["a", "b c", "d+e"])), rng.randint(2000, 2005)))
            at = t0 + timedelta(hours=rng.randint(0, 48))
            count = rng.randint(0, 10**6)
            cache.put(CacheRecord(key[0], key[1], count, at))
            if key not in expected or at >= expected[key][1]:
                expected[key] = (count, at)
    persisted = path.read_bytes()

    reloaded = CountCache.load(path)
    assert {k: reloaded.get(*k) for k in expected} == {k: v[0] for k, v in expected.items()}

    # append-only: a second session leaves the earlier bytes untouched
    with CountCache.load(path) as cache:
        cache.put(CacheRecord("pubmed", build_term(KeywordSpec("z"), 2010), 5, t0))
    assert path.read_bytes().startswith(persisted)

    # corrupt and truncated lines are skipped, never fatal
    with path.open("a", encoding="utf-8") as handle:
        handle.write("{broken\n[]\n")
        handle.write('{"db": "pubmed", "term": "t", "count"')
    damaged = CountCache.load(path)
    assert damaged.corrupt_lines == 3
    assert damaged.get("pubmed", build_term(KeywordSpec("z"), 2010)) == 5
    assert all(damaged.get(*k) == v[0] for k, v in expected.items())
