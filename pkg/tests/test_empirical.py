from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from langdiv.empirical import (
    BinRow,
    CountryDataError,
    CountryRecord,
    bin_average,
    bins_csv,
    exclude,
    increasing_pair_fraction,
    load_countries,
    load_exclusions,
    parse_countries,
    scatter_csv,
    scatter_export,
)

DATA = Path(__file__).parent / "data"
FIXTURE = DATA / "countries_fixture.csv"
DEFAULT_EXCLUDED = {"China", "India", "Indonesia", "Papua New Guinea"}


def _write(tmp_path, text):
    p = tmp_path / "c.csv"
    p.write_text(text)
    return p


def test_load_valid_rows(tmp_path):
    p = _write(tmp_path, "country,population,languages\nA,10,1\nB,20,2\nC,30,3\n")
    assert load_countries(p) == [CountryRecord("A", 10, 1), CountryRecord("B", 20, 2), CountryRecord("C", 30, 3)]


def test_load_header_only(tmp_path):
    assert load_countries(_write(tmp_path, "country,population,languages\n")) == []


def test_load_rejects_zero_population_with_line(tmp_path):
    p = _write(tmp_path, "country,population,languages\nA,10,1\nB,0,2\nC,x,1\n")
    with pytest.raises(CountryDataError) as err:
        load_countries(p)
    assert err.value.lines == [3, 4]
    assert "line 3" in str(err.value)


def test_load_rejects_bad_header(tmp_path):
    with pytest.raises(CountryDataError):
        load_countries(_write(tmp_path, "name,pop,langs\nA,1,1\n"))


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_countries(tmp_path / "nope.csv")


def test_load_fixture_quoted_names():
    recs = load_countries(FIXTURE)
    assert len(recs) == 13
    assert CountryRecord("Micronesia, Federated States of", 105000, 18) in recs


def test_default_exclusions_are_the_four_outliers():
    assert set(load_exclusions()) == DEFAULT_EXCLUDED


def test_exclude_examples():
    recs = [CountryRecord("China", 10, 1), CountryRecord("Fiji", 5, 2)]
    with pytest.warns(UserWarning):  # three defaults are absent from this data
        assert exclude(recs, load_exclusions()) == [CountryRecord("Fiji", 5, 2)]
    assert exclude(recs, []) == recs
    with pytest.warns(UserWarning, match="Atlantis"):
        assert exclude(recs, ["Atlantis"]) == recs


def test_exclude_trims_and_ignores_case():
    recs = [CountryRecord("Papua New Guinea", 10, 1), CountryRecord("Fiji", 5, 2)]
    assert exclude(recs, ["  papua new GUINEA "]) == [CountryRecord("Fiji", 5, 2)]


def test_bin_average_example():
    recs = [CountryRecord("A", 1_000_000, 5), CountryRecord("B", 1_500_000, 7), CountryRecord("C", 2_500_000, 10)]
    rows = bin_average(recs, 1_000_000)
    assert rows == [
        BinRow(0, 1_000_000, None, 0),
        BinRow(1_000_000, 2_000_000, 6.0, 2),
        BinRow(2_000_000, 3_000_000, 10.0, 1),
    ]


def test_bin_average_single_and_pair():
    assert bin_average([CountryRecord("A", 5, 3)], 10) == [BinRow(0, 10, 3.0, 1)]
    rows = bin_average([CountryRecord("A", 5, 4), CountryRecord("B", 7, 6)], 10)
    assert rows == [BinRow(0, 10, 5.0, 2)]


def test_bin_average_float_width_gives_integer_edges():
    assert bin_average([CountryRecord("A", 5, 3)], 10.0)[0].upper == 10


def test_bin_average_log_bins():
    recs = [CountryRecord("A", 9, 1), CountryRecord("B", 10, 3), CountryRecord("C", 1000, 5), CountryRecord("D", 999, 7)]
    rows = bin_average(recs, log_base=10)
    assert rows == [BinRow(1, 10, 1.0, 1), BinRow(10, 100, 3.0, 1), BinRow(100, 1000, 7.0, 1), BinRow(1000, 10000, 5.0, 1)]


def test_bin_average_bad_args():
    with pytest.raises(ValueError):
        bin_average([], 0)
    with pytest.raises(ValueError):
        bin_average([], 10, log_base=10)
    with pytest.raises(ValueError):
        bin_average([], log_base=1)
    assert bin_average([], 10) == []


def test_scatter_sorted_with_ties():
    recs = [CountryRecord("Z", 5, 1), CountryRecord("B", 3, 1), CountryRecord("A", 5, 2)]
    assert scatter_export(recs) == [(3, 1, "B"), (5, 2, "A"), (5, 1, "Z")]
    assert scatter_csv([]) == "population,languages,country\n"


def test_fixture_matches_golden_files():
    kept = exclude(load_countries(FIXTURE), load_exclusions())
    assert bins_csv(bin_average(kept, 250_000)) == (DATA / "countries_fixture_bins_250k.csv").read_text()
    assert scatter_csv(kept) == (DATA / "countries_fixture_scatter.csv").read_text()


def test_increasing_pair_fraction():
    rows = [BinRow(0, 1, 1.0, 1), BinRow(1, 2, None, 0), BinRow(2, 3, 3.0, 2), BinRow(3, 4, 2.0, 1)]
    assert increasing_pair_fraction(rows) == 0.5


records = st.lists(
    st.builds(CountryRecord, st.text("abcdef", min_size=1, max_size=4),
              st.integers(1, 10**7), st.integers(1, 1000)),
    max_size=40,
)


@settings(max_examples=100, deadline=None)
@given(records, st.integers(10**4, 3 * 10**6), st.randoms())
def test_bin_properties(recs, width, rnd):
    rows = bin_average(recs, width)
    assert sum(r.country_count for r in rows) == len(recs)
    shuffled = list(recs)
    rnd.shuffle(shuffled)
    assert bin_average(shuffled, width) == rows
    for a, b in zip(rows, rows[1:]):
        assert a.upper == b.lower and a.lower < a.upper
    # means recomputed from the scatter export
    scatter = scatter_export(recs)
    for r in rows:
        langs = [lang for pop, lang, _ in scatter if r.lower <= pop < r.upper]
        assert len(langs) == r.country_count
        if langs:
            assert r.mean_languages == sum(langs) / len(langs)
        else:
            assert r.mean_languages is None


def test_parse_countries_skips_blank_lines():
    assert parse_countries("country,population,languages\n\nA,1,1\n") == [CountryRecord("A", 1, 1)]
