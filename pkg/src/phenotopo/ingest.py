"""CSV ingestion: merged weather+LTE files into validated datasets.

Input files carry one row per observed day with at least CULTIVAR, DATE and
MIN_AT columns (matched case-insensitively after trimming). Rows dated
outside the dormant window are dropped and counted, never errors. The only
missing-value marker is the empty cell; anything else must parse.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .errors import RowError, SchemaError, UnknownLabelError
from .model import LTE_SANITY_MAX, LTE_SANITY_MIN, Dataset, Observation

REQUIRED_COLUMNS = ("CULTIVAR", "DATE", "MIN_AT")
OPTIONAL_COLUMNS = ("SEASON_JDAY", "LTE10", "LTE50", "LTE90", "AVG_AT", "MAX_AT")
CANONICAL_COLUMNS = (
    "CULTIVAR",
    "DATE",
    "SEASON_JDAY",
    "LTE10",
    "LTE50",
    "LTE90",
    "MIN_AT",
    "AVG_AT",
    "MAX_AT",
)

SEASON_START = (9, 7)  # Sep 7 -> day index 250
SEASON_END = (5, 15)  # May 15 -> day index 500 (501 after a Feb 29)


@dataclass(frozen=True)
class CsvSchema:
    """Which columns a file must and may carry. Unknown columns are ignored."""

    required: tuple[str, ...] = REQUIRED_COLUMNS
    optional: tuple[str, ...] = OPTIONAL_COLUMNS


DEFAULT_SCHEMA = CsvSchema()


@dataclass(frozen=True)
class IngestResult:
    dataset: Dataset
    dropped_rows: int  # rows dated outside every dormant window
    warnings: tuple[str, ...]


def season_jday(date: dt.date) -> tuple[str, int] | None:
    """Map a calendar date to its (season label, dormant-season day index).

    The index is anchored at both ends of the window: Sep 7 is always 250
    and May 15 is always 500, or 501 when a Feb 29 intervenes. Dates from
    May 16 through Sep 6 belong to no season and map to None.
    """
    if (date.month, date.day) >= SEASON_START:
        start_year = date.year
    elif (date.month, date.day) <= SEASON_END:
        start_year = date.year - 1
    else:
        return None
    offset = (date - dt.date(start_year, 9, 7)).days
    return f"{start_year}-{start_year + 1}", 250 + offset


def parse_csv(source: str | IO[str], schema: CsvSchema = DEFAULT_SCHEMA) -> IngestResult:
    """Parse UTF-8 CSV text into a dataset.

    Row errors (bad number, bad date, missing required value, duplicate
    (cultivar, season, day) key, LTE outside sanity bounds) abort the parse
    and name the 1-based data row. A provided SEASON_JDAY is advisory only:
    mismatches against the recomputed index become warnings and the
    computed value wins.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty input: header row required") from None

    positions: dict[str, int] = {}
    for pos, name in enumerate(header):
        canon = name.strip().upper()
        if canon and canon not in positions:
            positions[canon] = pos
    missing = [c for c in schema.required if c not in positions]
    if missing:
        raise SchemaError("missing required column(s): " + ", ".join(missing))

    observations: list[Observation] = []
    seen: dict[tuple[str, str, int], int] = {}
    dropped = 0
    warnings: list[str] = []

    for row_no, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue

        def cell(name: str) -> str:
            pos = positions.get(name)
            if pos is None or pos >= len(row):
                return ""
            return row[pos].strip()

        cultivar = cell("CULTIVAR")
        if not cultivar:
            raise RowError(f"row {row_no}: missing CULTIVAR")
        raw_date = cell("DATE")
        if not raw_date:
            raise RowError(f"row {row_no}: missing DATE")
        try:
            date = dt.date.fromisoformat(raw_date)
        except ValueError:
            raise RowError(f"row {row_no}: invalid DATE {raw_date!r} (expected YYYY-MM-DD)") from None

        mapped = season_jday(date)
        if mapped is None:
            dropped += 1
            continue
        season, jday = mapped

        min_at = _required_float(cell("MIN_AT"), "MIN_AT", row_no)
        lte10 = _optional_float(cell("LTE10"), "LTE10", row_no)
        lte50 = _optional_float(cell("LTE50"), "LTE50", row_no)
        lte90 = _optional_float(cell("LTE90"), "LTE90", row_no)
        avg_at = _optional_float(cell("AVG_AT"), "AVG_AT", row_no)
        max_at = _optional_float(cell("MAX_AT"), "MAX_AT", row_no)

        for name, value in (("LTE10", lte10), ("LTE50", lte50), ("LTE90", lte90)):
            if value is not None and not LTE_SANITY_MIN <= value <= LTE_SANITY_MAX:
                raise RowError(
                    f"row {row_no}: {name} = {value} outside sanity bounds "
                    f"[{LTE_SANITY_MIN}, {LTE_SANITY_MAX}]"
                )

        provided = cell("SEASON_JDAY")
        if provided:
            try:
                provided_jday = int(provided)
            except ValueError:
                raise RowError(f"row {row_no}: invalid SEASON_JDAY {provided!r}") from None
            if provided_jday != jday:
                warnings.append(
                    f"row {row_no}: SEASON_JDAY {provided_jday} disagrees with computed {jday}; using {jday}"
                )

        obs = Observation(
            cultivar=cultivar,
            date=date,
            season=season,
            season_jday=jday,
            min_air_temp=min_at,
            lte10=lte10,
            lte50=lte50,
            lte90=lte90,
            avg_air_temp=avg_at,
            max_air_temp=max_at,
        )
        first = seen.setdefault(obs.key, row_no)
        if first != row_no:
            raise RowError(f"row {row_no}: duplicate observation for {obs.key} (first at row {first})")
        observations.append(obs)

    return IngestResult(Dataset.from_observations(observations), dropped, tuple(warnings))


def _required_float(raw: str, name: str, row_no: int) -> float:
    if not raw:
        raise RowError(f"row {row_no}: missing {name}")
    try:
        return float(raw)
    except ValueError:
        raise RowError(f"row {row_no}: invalid {name} {raw!r}") from None


def _optional_float(raw: str, name: str, row_no: int) -> float | None:
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        raise RowError(f"row {row_no}: invalid {name} {raw!r}") from None


def filter_dataset(
    dataset: Dataset,
    cultivars: Iterable[str] | None = None,
    seasons: Iterable[str] | None = None,
) -> Dataset:
    """Subset a dataset by cultivar and/or season label; None keeps everything."""
    keep_cultivars = None
    if cultivars is not None:
        keep_cultivars = frozenset(cultivars)
        unknown = sorted(keep_cultivars - dataset.cultivars)
        if unknown:
            raise UnknownLabelError("unknown cultivar(s): " + ", ".join(unknown))
    keep_seasons = None
    if seasons is not None:
        keep_seasons = frozenset(seasons)
        unknown = sorted(keep_seasons - dataset.seasons)
        if unknown:
            raise UnknownLabelError("unknown season(s): " + ", ".join(unknown))
    selected = [
        o
        for o in dataset.observations
        if (keep_cultivars is None or o.cultivar in keep_cultivars)
        and (keep_seasons is None or o.season in keep_seasons)
    ]
    return Dataset.from_observations(selected)


def merge_datasets(datasets: Sequence[Dataset]) -> Dataset:
    """Concatenate datasets, rejecting duplicate (cultivar, season, day) keys."""
    merged: list[Observation] = []
    seen: set[tuple[str, str, int]] = set()
    for ds in datasets:
        for obs in ds.observations:
            if obs.key in seen:
                raise RowError(f"duplicate observation for {obs.key} while merging inputs")
            seen.add(obs.key)
            merged.append(obs)
    return Dataset.from_observations(merged)


def emit_csv(dataset: Dataset) -> str:
    """Serialize a dataset to the canonical CSV form; parse_csv inverts it exactly.

    Floats are written with repr so every value round-trips bit-for-bit.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CANONICAL_COLUMNS)
    for o in dataset.observations:
        writer.writerow(
            [
                o.cultivar,
                o.date.isoformat(),
                o.season_jday,
                _format_cell(o.lte10),
                _format_cell(o.lte50),
                _format_cell(o.lte90),
                _format_cell(o.min_air_temp),
                _format_cell(o.avg_air_temp),
                _format_cell(o.max_air_temp),
            ]
        )
    return buf.getvalue()


def _format_cell(value: float | None) -> str:
    return "" if value is None else repr(value)
