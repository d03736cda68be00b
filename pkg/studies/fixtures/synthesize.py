"""Generate the stand-in esearch fixtures used by the studies and the test suite.

These files were NOT recorded from NCBI: the build environment had no route to
eutils.ncbi.nlm.nih.gov. Every response is synthesized from smooth curves with
seeded multiplicative noise. The "banana" counts for 1980, 1990, 2000, 2010 and
2019 are pinned to real PubMed counts as of February 2021 (12, 26, 83, 170,
420); every other series is shaped after the expected trend, not after real
PubMed numbers.

To replace them with real recordings, run each study with ``--mode record``.

Usage::

    python studies/fixtures/synthesize.py   # rewrites the *.jsonl files next to this script
"""

from __future__ import annotations

import json
import math
import random
import zlib
from pathlib import Path

from pubtrend import EntrezQuery, Field, KeywordSpec, encode_request

HERE = Path(__file__).resolve().parent
RECORDED_AT = "2026-10-18T00:00:00+00:00"

TEXT, MESH = Field.TEXT, Field.MESH


def loglinear(points: dict[int, float]):
    """Piecewise log-linear curve through ``points``, extrapolated at both ends."""
    years = sorted(points)

    def curve(year: int) -> float:
        if year <= years[0]:
            a, b = years[0], years[1]
        elif year >= years[-1]:
            a, b = years[-2], years[-1]
        else:
            a = max(y for y in years if y <= year)
            b = min(y for y in years if y > year)
        la, lb = math.log(points[a]), math.log(points[b])
        return math.exp(la + (lb - la) * (year - a) / (b - a))

    return curve


def linear(points: dict[int, float]):
    years = sorted(points)

    def curve(year: int) -> float:
        if year <= years[0]:
            return points[years[0]]
        if year >= years[-1]:
            return points[years[-1]]
        a = max(y for y in years if y <= year)
        b = min(y for y in years if y > year)
        return points[a] + (points[b] - points[a]) * (year - a) / (b - a)

    return curve


def bump(center: float, width: float, height: float):
    return lambda year: height * math.exp(-0.5 * ((year - center) / width) ** 2)


def noisy(term: str, year: int, value: float, sigma: float) -> int:
    rng = random.Random(zlib.crc32(f"{term}|{year}".encode()))
    return max(0, round(value * math.exp(rng.gauss(0.0, sigma))))


# -- reference curves -------------------------------------------------------------

BANANA_2021 = {1980: 12, 1990: 26, 2000: 83, 2010: 170, 2019: 420}
banana_curve = loglinear(BANANA_2021)


def banana(year: int) -> int:
    if year in BANANA_2021:
        return BANANA_2021[year]
    return noisy("banana", year, banana_curve(year), 0.06)


fruit_curve = lambda y: banana_curve(y) / 0.07  # noqa: E731
brain_curve = loglinear({1990: 25000, 2005: 52000, 2020: 95000})
cancer_curve = loglinear({1970: 15000, 1990: 45000, 2020: 200000})
virus_curve = loglinear({1960: 3000, 1990: 22000, 2020: 90000})
endocrine_curve = loglinear({1970: 3000, 1995: 9000, 2019: 22000})

# MeSH indexing lag: the final year is only partly indexed
MESH_2020_FACTOR = {
    "Endocrine Gland Neoplasms": 0.45,
    "Adrenal Gland Neoplasms": 0.40,
    "Ovarian Neoplasms": 0.56,
    "Pancreatic Neoplasms": 0.43,
    "Pituitary Neoplasms": 0.38,
    "Testicular Neoplasms": 0.41,
    "Thyroid Neoplasms": 0.46,
}


def share_series(term, reference_curve, share, sigma=0.05):
    def count(year: int) -> int:
        return noisy(term, year, reference_curve(year) * share(year), sigma)

    return count


def testicular_share(peak_year: int, rise: tuple[float, float], fall_to: float):
    lo, hi = rise

    def share(year: int) -> float:
        if year <= peak_year:
            return lo + (hi - lo) * (year - 1970) / (peak_year - 1970)
        return hi + (fall_to - hi) * min(1.0, (year - peak_year) / 35)

    return share


def mesh_series(term, share):
    base = share_series(term, endocrine_curve, share, 0.04)

    def count(year: int) -> int:
        value = base(year)
        if year == 2020:
            value = round(base(2019) * MESH_2020_FACTOR[term])
        return value

    return count


def endocrine(year: int) -> int:
    if year == 2020:
        return round(endocrine(2019) * MESH_2020_FACTOR["Endocrine Gland Neoplasms"])
    return noisy("Endocrine Gland Neoplasms", year, endocrine_curve(year), 0.03)


def sars_cov_2(year: int) -> int:
    if year < 2019:
        return 0
    if year == 2019:
        return 3
    return noisy("SARS-CoV-2", year, virus_curve(year) * 1.12, 0.0)


def influenza(term, baseline, start, peaks):
    def share(year: int) -> float:
        if year < start:
            return 0.0
        return baseline + sum(p(year) for p in peaks)

    return share_series(term, virus_curve, share, 0.08)


STUDIES = {
    "fig2_fruit": {
        "years": (1980, 2019),
        "terms": {
            ("fruit", TEXT): lambda y: noisy("fruit", y, fruit_curve(y), 0.04),
            ("blueberry", TEXT): share_series(
                "blueberry", fruit_curve, loglinear({1980: 0.004, 2019: 0.06}), 0.15
            ),
            ("apple", TEXT): share_series(
                "apple", fruit_curve, linear({1980: 0.3, 2019: 0.45}), 0.06
            ),
            ("blackberry", TEXT): share_series(
                "blackberry", fruit_curve, linear({1980: 0.02, 2019: 0.012}), 0.35
            ),
            ("strawberry", TEXT): share_series(
                "strawberry", fruit_curve, linear({1980: 0.05, 2019: 0.12}), 0.1
            ),
            ("orange", TEXT): share_series(
                "orange",
                fruit_curve,
                lambda y: 0.8 - 0.005 * (y - 1980) + bump(1987, 3, 0.6)(y),
                0.05,
            ),
            ("banana", TEXT): banana,
        },
    },
    "example1_neuroimaging": {
        "years": (1990, 2020),
        "terms": {
            ("prefrontal cortex", TEXT): share_series(
                "prefrontal cortex", brain_curve, linear({1990: 0.01, 2020: 0.095})
            ),
            ("visual cortex", TEXT): share_series(
                "visual cortex", brain_curve, linear({1990: 0.024, 2020: 0.015})
            ),
            ("cingulate cortex", TEXT): share_series(
                "cingulate cortex", brain_curve, linear({1990: 0.0025, 2020: 0.026})
            ),
            ("amygdala", TEXT): share_series(
                "amygdala", brain_curve, linear({1990: 0.028, 2020: 0.021})
            ),
            ("supplementary motor area", TEXT): share_series(
                "supplementary motor area", brain_curve, lambda y: 0.0045, 0.08
            ),
            ("frontal eye fields", TEXT): share_series(
                "frontal eye fields", brain_curve, lambda y: 0.0008, 0.12
            ),
            ("banana", TEXT): banana,
            ("brain", TEXT): lambda y: noisy("brain", y, brain_curve(y), 0.02),
        },
    },
    "example2_cancer": {
        "years": (1970, 2020),
        "terms": {
            ("lung cancer", TEXT): share_series(
                "lung cancer", cancer_curve, linear({1970: 0.04, 2020: 0.09})
            ),
            ("breast cancer", TEXT): share_series(
                "breast cancer", cancer_curve, linear({1970: 0.05, 2020: 0.12})
            ),
            ("colorectal cancer", TEXT): share_series(
                "colorectal cancer", cancer_curve, linear({1970: 0.005, 2020: 0.05})
            ),
            ("prostate cancer", TEXT): share_series(
                "prostate cancer", cancer_curve, linear({1970: 0.008, 1990: 0.012, 2020: 0.06})
            ),
            ("skin cancer", TEXT): share_series(
                "skin cancer", cancer_curve, lambda y: 0.01
            ),
            ("testicular cancer", TEXT): share_series(
                "testicular cancer", cancer_curve, testicular_share(1985, (0.003, 0.006), 0.002)
            ),
            ("cancer", TEXT): lambda y: noisy("cancer", y, cancer_curve(y), 0.02),
        },
    },
    "example3_virus": {
        "years": (1960, 2020),
        "terms": {
            ("H1N1", TEXT): influenza(
                "H1N1", 0.002, 1975, [bump(1977, 1.0, 0.004), bump(2009.7, 0.9, 0.05)]
            ),
            ("H5N1", TEXT): influenza(
                "H5N1", 0.0008, 1980, [bump(1997.5, 0.6, 0.004), bump(2005.5, 2.0, 0.02)]
            ),
            ("H7N9", TEXT): influenza("H7N9", 0.0001, 1990, [bump(2013.8, 0.8, 0.012)]),
            ("H3N2", TEXT): influenza(
                "H3N2", 0.003, 1966, [bump(1968.8, 1.0, 0.012)]
            ),
            ("SARS-CoV-2", TEXT): sars_cov_2,
            ("virus", TEXT): lambda y: noisy("virus", y, virus_curve(y), 0.02),
        },
    },
    "example4_endocrine": {
        "years": (1970, 2020),
        "terms": {
            ("Adrenal Gland Neoplasms", MESH): mesh_series(
                "Adrenal Gland Neoplasms", testicular_share(1980, (0.08, 0.085), 0.04)
            ),
            ("Ovarian Neoplasms", MESH): mesh_series(
                "Ovarian Neoplasms", linear({1970: 0.28, 2020: 0.30})
            ),
            ("Pancreatic Neoplasms", MESH): mesh_series(
                "Pancreatic Neoplasms", linear({1970: 0.12, 2000: 0.2, 2020: 0.34})
            ),
            ("Pituitary Neoplasms", MESH): mesh_series(
                "Pituitary Neoplasms", testicular_share(1978, (0.15, 0.155), 0.06)
            ),
            ("Testicular Neoplasms", MESH): mesh_series(
                "Testicular Neoplasms", testicular_share(1985, (0.09, 0.11), 0.035)
            ),
            ("Thyroid Neoplasms", MESH): mesh_series(
                "Thyroid Neoplasms", linear({1970: 0.18, 2020: 0.23})
            ),
            ("Endocrine Gland Neoplasms", MESH): endocrine,
        },
    },
    "misc": {
        "years": (2020, 2020),
        "terms": {("zqxjkvbn", TEXT): lambda y: 0},
    },
}


def response_body(count: int) -> str:
    return json.dumps(
        {"header": {"type": "esearch", "version": "0.3"}, "esearchresult": {"count": str(count)}},
        separators=(",", ":"),
    )


def fixture_lines(study: dict) -> list[str]:
    start, end = study["years"]
    lines = []
    for (term, field), count in study["terms"].items():
        spec = KeywordSpec(term, field)
        for year in range(start, end + 1):
            url = encode_request(EntrezQuery.for_year(spec, year))
            record = {
                "url": url,
                "status": 200,
                "body": response_body(count(year)),
                "recorded_at": RECORDED_AT,
            }
            lines.append(json.dumps(record))
    return lines


def main() -> None:
    for name, study in STUDIES.items():
        path = HERE / f"{name}.jsonl"
        path.write_text("\n".join(fixture_lines(study)) + "\n", encoding="utf-8")
        print(f"wrote {path.relative_to(HERE.parent.parent)}")


if __name__ == "__main__":
    main()
