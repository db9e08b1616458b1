"""
Languages against population
============================

Load a ``country,population,languages`` export, drop the four outliers,
and average the language counts inside consecutive population intervals.
The small fixture shipped with the tests stands in for a real export here.
"""

from pathlib import Path

from langdiv.empirical import (
    bin_average,
    bins_csv,
    exclude,
    increasing_pair_fraction,
    load_countries,
    load_exclusions,
    scatter_csv,
)

src = Path(__file__).resolve().parents[1] / "tests" / "data" / "countries_fixture.csv"
records = load_countries(src)
print(f"{len(records)} countries loaded; excluding {load_exclusions()}")
kept = exclude(records, load_exclusions())

print(scatter_csv(kept))

# Linear bins anchored at 0; empty bins keep a blank mean.
bins = bin_average(kept, bin_width=250_000)
print(bins_csv(bins))

# Logarithmic bins spread small and large countries more evenly.
log_bins = bin_average(kept, log_base=10)
print(bins_csv(log_bins))
print(f"consecutive occupied bins with a rising mean: {increasing_pair_fraction(log_bins):.2f}")
