"""
Brain regions, measured in bananas
==================================

Counts for a handful of cortical regions are divided by the count for
"banana" and, separately, by the count for "brain". The banana ratio reads as
"how many times more interesting than a banana"; the brain ratio tracks each
region's share of the neuroscience literature.

Equivalent CLI::

    pubtrend --mode replay --fixtures studies/fixtures/example1_neuroimaging.jsonl \
        --keyword "prefrontal cortex" --keyword "supplementary motor area" \
        --reference brain --years 1990:2020 --svg regions.svg
"""

from pathlib import Path
from statistics import fmean

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

YEARS = (1990, 2020)
REGIONS = [
    "prefrontal cortex",
    "visual cortex",
    "cingulate cortex",
    "amygdala",
    "supplementary motor area",
    "frontal eye fields",
]

transport = ReplayTransport.from_file(HERE / "fixtures" / "example1_neuroimaging.jsonl")
limiter = Unlimited()


def counts(term):
    return fetch_year_series(KeywordSpec(term), YEARS, transport, limiter)


banana, brain = counts("banana"), counts("brain")
regions = {name: counts(name) for name in REGIONS}

# %%
# Against banana: the supplementary motor area hovers around 1.

by_banana = {name: normalize_by_reference(c, banana) for name, c in regions.items()}
decade = [by_banana["supplementary motor area"].values[y] for y in range(2010, 2020)]
print(f"supplementary motor area / banana, 2010-2019 mean: {fmean(decade):.2f}")

# %%
# Against brain: the prefrontal cortex takes a growing share.

by_brain = {name: normalize_by_reference(c, brain) for name, c in regions.items()}
pfc = by_brain["prefrontal cortex"].values
print(f"prefrontal cortex / brain: {pfc[1990]:.4f} in 1990, {pfc[2019]:.4f} in 2019")

for reference, ratios in (("banana", by_banana), ("brain", by_brain)):
    labeled = tuple(ratios.items())
    write_csv(labeled, OUT / f"example1_{reference}.csv")
    write_svg(
        ChartSpec(f"Brain regions relative to '{reference}'", labeled,
                  y_label=f"Ratio to {reference}", log_scale=reference == "banana"),
        OUT / f"example1_{reference}.svg",
    )
