"""
MeSH terms and the last-year dip
================================

Searching the MeSH field matches curated subject tags. Tagging trails
publication, so the newest year is undercounted and every series appears to
collapse at the end. The dip detector flags a final year below half of the
year before; ratios against a MeSH reference partly cancel the artifact.

Equivalent CLI::

    pubtrend --mode replay --fixtures studies/fixtures/example4_endocrine.jsonl --field mesh \
        --keyword "Adrenal Gland Neoplasms" --keyword "Ovarian Neoplasms" \
        --keyword "Pancreatic Neoplasms" --keyword "Pituitary Neoplasms" \
        --keyword "Testicular Neoplasms" --keyword "Thyroid Neoplasms" \
        --reference "Endocrine Gland Neoplasms" --years 1970:2020 --svg endocrine.svg
"""

from pathlib import Path

from pubtrend import (
    ChartSpec,
    Field,
    KeywordSpec,
    ReplayTransport,
    Unlimited,
    detect_trailing_dip,
    fetch_year_series,
    normalize_by_reference,
    write_csv,
    write_svg,
)

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

YEARS = (1970, 2020)
TERMS = [
    "Adrenal Gland Neoplasms",
    "Ovarian Neoplasms",
    "Pancreatic Neoplasms",
    "Pituitary Neoplasms",
    "Testicular Neoplasms",
    "Thyroid Neoplasms",
]

transport = ReplayTransport.from_file(HERE / "fixtures" / "example4_endocrine.jsonl")
limiter = Unlimited()


def counts(term):
    return fetch_year_series(KeywordSpec(term, Field.MESH), YEARS, transport, limiter)


reference = counts("Endocrine Gland Neoplasms")
series = {t: counts(t) for t in TERMS}

# %%
# Raw counts: which series end in a dip?

for s in (*series.values(), reference):
    dip = detect_trailing_dip(s)
    print(dip.message() if dip else f"{s.keyword.term!r}: no dip")

counts_labeled = tuple((t, s) for t, s in series.items())
write_csv(counts_labeled, OUT / "example4_counts.csv")
write_svg(ChartSpec("Endocrine neoplasms, MeSH counts", counts_labeled, y_label="Papers"),
          OUT / "example4_counts.svg")

# %%
# Ratios to the parent MeSH heading.

ratios = tuple((t, normalize_by_reference(s, reference)) for t, s in series.items())
write_csv(ratios, OUT / "example4_ratios.csv")
write_svg(ChartSpec("Share of 'Endocrine Gland Neoplasms'", ratios, y_label="Ratio"),
          OUT / "example4_ratios.svg")
