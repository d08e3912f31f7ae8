"""Domain types for dormant-season cold-hardiness observations.

All types are immutable after construction and safe to share across
concurrent tasks. A ``Dataset`` is the unit every other module consumes:
an ordered tuple of observations plus the distinct cultivar and season
labels occurring in it.
"""

from __future__ import annotations

import datetime as dt
import enum
from dataclasses import dataclass
from typing import Iterable

SEASON_JDAY_MIN = 250
SEASON_JDAY_MAX = 501  # 501 occurs only in seasons spanning a Feb 29

LTE_SANITY_MAX = 10.0  # degC
LTE_SANITY_MIN = -60.0  # degC

ERROR = "error"
WARNING = "warning"


class LteLevel(enum.Enum):
    """Which lethal-temperature percentile an analysis reads."""

    LTE10 = "lte10"
    LTE50 = "lte50"
    LTE90 = "lte90"

    @classmethod
    def from_number(cls, number: int) -> "LteLevel":
        try:
            return cls[f"LTE{number}"]
        except KeyError:
            raise ValueError(f"no LTE level {number}; expected 10, 50 or 90") from None


@dataclass(frozen=True)
class Observation:
    """One sampled day for one cultivar in one dormant season.

    LTE fields are ``None`` on days without a bud sample; weather fields
    other than the daily minimum are optional as well.
    """

    cultivar: str
    date: dt.date
    season: str  # "YYYY-YYYY", start year then end year
    season_jday: int  # 250 (Sep 7) through 500/501 (May 15)
    min_air_temp: float  # degC
    lte10: float | None = None
    lte50: float | None = None
    lte90: float | None = None
    avg_air_temp: float | None = None
    max_air_temp: float | None = None

    def lte(self, level: LteLevel) -> float | None:
        return getattr(self, level.value)

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.cultivar, self.season, self.season_jday)


@dataclass(frozen=True)
class Dataset:
    """Ordered observations plus the label sets they span."""

    observations: tuple[Observation, ...]
    cultivars: frozenset[str]
    seasons: frozenset[str]

    @classmethod
    def from_observations(cls, observations: Iterable[Observation]) -> "Dataset":
        obs = tuple(observations)
        return cls(
            observations=obs,
            cultivars=frozenset(o.cultivar for o in obs),
            seasons=frozenset(o.season for o in obs),
        )

    def __len__(self) -> int:
        return len(self.observations)


@dataclass(frozen=True)
class LabeledPoint:
    """A point of a normalized (day, margin) cloud with its source metadata."""

    x: float  # scaled season day, in [0, 1]
    y: float  # normalized risk margin, unitless
    cultivar: str
    season: str
    raw_jday: int


@dataclass(frozen=True)
class PointCloud:
    """Deterministically ordered labeled points plus a provenance string.

    ``from_points`` applies the canonical order (season, raw_jday, cultivar)
    so downstream diagrams, matrices and plots are byte-reproducible.
    """

    points: tuple[LabeledPoint, ...]
    provenance: str

    @classmethod
    def from_points(cls, points: Iterable[LabeledPoint], provenance: str) -> "PointCloud":
        ordered = sorted(points, key=lambda p: (p.season, p.raw_jday, p.cultivar, p.x, p.y))
        return cls(points=tuple(ordered), provenance=provenance)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Violation:
    row: int | None  # 0-based index into dataset.observations; None for dataset-level rules
    rule: str
    severity: str  # ERROR or WARNING
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def errors(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == ERROR)

    @property
    def warnings(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == WARNING)


def validate_dataset(dataset: Dataset) -> ValidationReport:
    """Check every dataset and observation invariant; violations are data, not failures.

    LTE ordering anomalies are reported with WARNING severity: field data
    contains occasional sensor artifacts and the pipeline must keep going.
    Everything else (duplicate keys, out-of-window day indices, insane LTE
    magnitudes, stale label sets) is an ERROR.
    """
    found: list[Violation] = []
    seen: dict[tuple[str, str, int], int] = {}
    for idx, obs in enumerate(dataset.observations):
        if not SEASON_JDAY_MIN <= obs.season_jday <= SEASON_JDAY_MAX:
            found.append(
                Violation(
                    idx,
                    "season_jday_range",
                    ERROR,
                    f"season_jday {obs.season_jday} outside [{SEASON_JDAY_MIN}, {SEASON_JDAY_MAX}]",
                )
            )
        for name in ("lte10", "lte50", "lte90"):
            value = getattr(obs, name)
            if value is not None and not LTE_SANITY_MIN <= value <= LTE_SANITY_MAX:
                found.append(
                    Violation(
                        idx,
                        "lte_bounds",
                        ERROR,
                        f"{name} = {value} outside sanity bounds [{LTE_SANITY_MIN}, {LTE_SANITY_MAX}]",
                    )
                )
        ordering_checks = [("lte10", "lte50", obs.lte10, obs.lte50), ("lte50", "lte90", obs.lte50, obs.lte90)]
        if obs.lte50 is None:
            ordering_checks.append(("lte10", "lte90", obs.lte10, obs.lte90))
        for hi_name, lo_name, hi, lo in ordering_checks:
            if hi is not None and lo is not None and hi < lo:
                found.append(
                    Violation(
                        idx,
                        "lte_ordering",
                        WARNING,
                        f"{hi_name} = {hi} must be >= {lo_name} = {lo}",
                    )
                )
        first = seen.setdefault(obs.key, idx)
        if first != idx:
            found.append(
                Violation(
                    idx,
                    "duplicate_key",
                    ERROR,
                    f"duplicate observation for {obs.key} (first at row {first})",
                )
            )
    actual_cultivars = frozenset(o.cultivar for o in dataset.observations)
    if actual_cultivars != dataset.cultivars:
        found.append(Violation(None, "label_sets", ERROR, "cultivar set does not match observations"))
    actual_seasons = frozenset(o.season for o in dataset.observations)
    if actual_seasons != dataset.seasons:
        found.append(Violation(None, "label_sets", ERROR, "season set does not match observations"))
    return ValidationReport(tuple(found))
