"""
Which fruit makes the steadiest reference?
==========================================

A reference keyword should grow at the same pace as the literature around it.
Here six fruits are normalized by "fruit" and scored by the coefficient of
variation of their yearly ratio; the lowest score is the steadiest reference.

Equivalent CLI::

    pubtrend --mode replay --fixtures studies/fixtures/fig2_fruit.jsonl \
        --keyword blueberry --keyword apple --keyword blackberry \
        --keyword strawberry --keyword orange --keyword banana \
        --reference fruit --years 1980:2019 --stability --svg fruit.svg
"""

from pathlib import Path

from pubtrend import (
    ChartSpec,
    KeywordSpec,
    ReplayTransport,
    Unlimited,
    fetch_year_series,
    normalize_by_reference,
    rank_by_stability,
    write_csv,
    write_svg,
)

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

YEARS = (1980, 2019)
FRUITS = ["blueberry", "apple", "blackberry", "strawberry", "orange", "banana"]

transport = ReplayTransport.from_file(HERE / "fixtures" / "fig2_fruit.jsonl")
limiter = Unlimited()


def counts(term):
    return fetch_year_series(KeywordSpec(term), YEARS, transport, limiter)


fruit = counts("fruit")
ratios = [normalize_by_reference(counts(name), fruit) for name in FRUITS]

# %%
# Rank by coefficient of variation, steadiest first.

for label, score in rank_by_stability(ratios):
    print(f"{label:<12} {score:.3f}")

labeled = [(r.label, r) for r in ratios]
write_csv(labeled, OUT / "fig2_fruit.csv")
write_svg(ChartSpec("Fruit mentions relative to 'fruit'", tuple(labeled), y_label="Ratio to fruit", log_scale=True),
          OUT / "fig2_fruit.svg")
