"""
Interest market share of cancer types
=====================================

Every paper on lung cancer is also a paper mentioning "cancer", so the ratio
to "cancer" is the share of cancer research each type receives.

Equivalent CLI::

    pubtrend --mode replay --fixtures studies/fixtures/example2_cancer.jsonl \
        --keyword "lung cancer" --keyword "breast cancer" --keyword "colorectal cancer" \
        --keyword "prostate cancer" --keyword "skin cancer" --keyword "testicular cancer" \
        --reference cancer --years 1970:2020 --csv cancer.csv --svg cancer.svg
"""

from pathlib import Path

from pubtrend import (
    ChartSpec,
    KeywordSpec,
    ReplayTransport,
    Unlimited,
    fetch_year_series,
    normalize_by_reference,
    write_csv,
    write_svg,
)

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

YEARS = (1970, 2020)
TYPES = ["lung cancer", "breast cancer", "colorectal cancer", "prostate cancer", "skin cancer", "testicular cancer"]

transport = ReplayTransport.from_file(HERE / "fixtures" / "example2_cancer.jsonl")
limiter = Unlimited()
cancer = fetch_year_series(KeywordSpec("cancer"), YEARS, transport, limiter)

shares = [
    normalize_by_reference(fetch_year_series(KeywordSpec(t), YEARS, transport, limiter), cancer)
    for t in TYPES
]

# %%
# Share of "cancer" papers in the first and last year.

for share in shares:
    first, last = share.values[YEARS[0]], share.values[YEARS[1]]
    print(f"{share.label:<18} {first:.3f} -> {last:.3f}")

labeled = tuple((s.label, s) for s in shares)
write_csv(labeled, OUT / "example2_cancer.csv")
write_svg(ChartSpec("Share of 'cancer' publications", labeled, y_label="Ratio to cancer"),
          OUT / "example2_cancer.svg")
