"""Country-level language counts against population: loading, exclusions, binning."""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .metrics import format_value

INPUT_HEADER = ("country", "population", "languages")
BIN_COLUMNS = ("lower", "upper", "mean_languages", "country_count")
SCATTER_COLUMNS = ("population", "languages", "country")


class CountryDataError(ValueError):
    """Malformed country CSV.  ``lines`` holds the 1-based offending line numbers."""

    def __init__(self, message: str, lines: Sequence[int] = ()):
        super().__init__(message)
        self.lines = list(lines)


@dataclass(frozen=True)
class CountryRecord:
    country: str
    population: int
    languages: int


@dataclass(frozen=True)
class BinRow:
    lower: int
    upper: int
    mean_languages: Optional[float]
    country_count: int


def _positive_int(text: str) -> int:
    value = int(text.strip())
    if value < 1:
        raise ValueError(f"{value} is not positive")
    return value


def parse_countries(text: str, source: str = "<input>") -> list[CountryRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(h.strip().lower() for h in header) != INPUT_HEADER:
        raise CountryDataError(f"{source}: header must be {','.join(INPUT_HEADER)}, got {header}", [1])
    records, problems = [], []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            problems.append((lineno, f"expected 3 fields, got {len(row)}"))
            continue
        name = row[0].strip()
        if not name:
            problems.append((lineno, "empty country name"))
            continue
        try:
            records.append(CountryRecord(name, _positive_int(row[1]), _positive_int(row[2])))
        except ValueError as exc:
            problems.append((lineno, str(exc)))
    if problems:
        detail = "; ".join(f"line {n}: {msg}" for n, msg in problems)
        raise CountryDataError(f"{source}: rejected rows ({detail})", [n for n, _ in problems])
    return records


def load_countries(path: str | Path) -> list[CountryRecord]:
    """Read a ``country,population,languages`` CSV.  Bad rows raise :class:`CountryDataError`."""
    path = Path(path)
    return parse_countries(path.read_text(encoding="utf-8-sig"), str(path))


def load_exclusions(path: str | Path | None = None) -> list[str]:
    """Country names, one per line (``#`` comments).  ``None`` gives the shipped defaults."""
    if path is None:
        text = resources.files("langdiv").joinpath("data/default_exclusions.txt").read_text()
    else:
        text = Path(path).read_text(encoding="utf-8")
    names = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            names.append(line)
    return names


def _norm(name: str) -> str:
    return name.strip().casefold()


def exclude(records: Iterable[CountryRecord], names: Iterable[str]) -> list[CountryRecord]:
    """Drop records whose country matches a name (trimmed, case-insensitive).

    Names that match nothing trigger a :class:`UserWarning`.
    """
    records = list(records)
    wanted = {_norm(n): n for n in names}
    present = {_norm(r.country) for r in records}
    for key, name in wanted.items():
        if key not in present:
            warnings.warn(f"excluded country {name!r} not found in data", UserWarning, stacklevel=2)
    return [r for r in records if _norm(r.country) not in wanted]


def _log_bin(population: int, base: int) -> int:
    k = int(math.log(population, base))
    # float log can land one off at exact powers
    while base ** k > population:
        k -= 1
    while base ** (k + 1) <= population:
        k += 1
    return k


def bin_average(records: Iterable[CountryRecord], bin_width: int | None = None,
                log_base: int | None = None) -> list[BinRow]:
    """Mean language count per population interval.

    Linear bins are ``[k*w, (k+1)*w)`` from 0 to the largest population;
    with ``log_base`` the bins are ``[b**k, b**(k+1))`` from the smallest to
    the largest population instead.  Empty bins are kept with a count of 0
    and no mean.
    """
    records = list(records)
    if (bin_width is None) == (log_base is None):
        raise ValueError("give exactly one of bin_width or log_base")
    if bin_width is not None:
        if bin_width <= 0:
            raise ValueError(f"bin_width must be positive, got {bin_width}")
        if float(bin_width).is_integer():
            bin_width = int(bin_width)
    if log_base is not None and (int(log_base) != log_base or log_base < 2):
        raise ValueError(f"log_base must be an integer >= 2, got {log_base}")
    if not records:
        return []

    if bin_width is not None:
        key = lambda p: int(p // bin_width)
        first = 0
        edges = lambda k: (k * bin_width, (k + 1) * bin_width)
    else:
        base = int(log_base)
        key = lambda p: _log_bin(p, base)
        first = min(key(r.population) for r in records)
        edges = lambda k: (base ** k, base ** (k + 1))

    totals: dict[int, list[int]] = {}
    for r in records:
        totals.setdefault(key(r.population), []).append(r.languages)
    last = max(totals)
    rows = []
    for k in range(first, last + 1):
        lower, upper = edges(k)
        langs = totals.get(k, [])
        mean = sum(langs) / len(langs) if langs else None
        rows.append(BinRow(lower, upper, mean, len(langs)))
    return rows


def scatter_export(records: Iterable[CountryRecord]) -> list[tuple[int, int, str]]:
    """``(population, languages, country)`` sorted by population, then name."""
    return sorted(((r.population, r.languages, r.country) for r in records), key=lambda t: (t[0], t[2]))


def _csv(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def bins_csv(rows: Iterable[BinRow]) -> str:
    return _csv(BIN_COLUMNS, ((b.lower, b.upper, b.mean_languages, b.country_count) for b in rows))


def scatter_csv(records: Iterable[CountryRecord]) -> str:
    return _csv(SCATTER_COLUMNS, scatter_export(records))


def increasing_pair_fraction(rows: Sequence[BinRow]) -> float:
    """Share of consecutive occupied-bin pairs whose mean goes up."""
    means = [b.mean_languages for b in rows if b.country_count > 0]
    pairs = list(zip(means, means[1:]))
    if not pairs:
        return float("nan")
    return sum(b > a for a, b in pairs) / len(pairs)
