"""
Outbreaks against the background of virology
============================================

Influenza subtypes spike around their outbreaks and then settle. In 2020
"SARS-CoV-2" appears in more papers than the generic reference "virus", so the
ratio climbs above 1 within a year of the first report.

Equivalent CLI::

    pubtrend --mode replay --fixtures studies/fixtures/example3_virus.jsonl \
        --keyword H1N1 --keyword H5N1 --keyword H7N9 --keyword H3N2 --keyword SARS-CoV-2 \
        --reference virus --years 1960:2020 --log-scale --svg virus.svg
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

YEARS = (1960, 2020)
STRAINS = ["H1N1", "H5N1", "H7N9", "H3N2", "SARS-CoV-2"]

transport = ReplayTransport.from_file(HERE / "fixtures" / "example3_virus.jsonl")
limiter = Unlimited()
virus = fetch_year_series(KeywordSpec("virus"), YEARS, transport, limiter)
ratios = {
    s: normalize_by_reference(fetch_year_series(KeywordSpec(s), YEARS, transport, limiter), virus)
    for s in STRAINS
}

# %%
# Peak year per strain, and the 2020 value for SARS-CoV-2.

for name, ratio in ratios.items():
    defined = ratio.defined()
    peak = max(defined, key=defined.get)
    print(f"{name:<11} peak {defined[peak]:.4f} in {peak}")
print(f"SARS-CoV-2 / virus in 2020: {ratios['SARS-CoV-2'].values[2020]:.2f}")

labeled = tuple(ratios.items())
write_csv(labeled, OUT / "example3_virus.csv")
write_svg(ChartSpec("Virus strains relative to 'virus'", labeled, y_label="Ratio to virus", log_scale=True),
          OUT / "example3_virus.svg")
