"""Risk-margin transform and point-cloud assembly.

Each point's y coordinate is a normalized risk margin: the gap between the
day's minimum air temperature and the selected lethal temperature, rescaled
within its trajectory so an oblong branching shape becomes round enough for
hole detection. The x coordinate is the season day index rescaled onto the
fixed dormant window, so the same calendar day lands on the same x in every
cloud.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateScaleError, EmptyGroupError, JdayRangeError, UnknownLabelError
from .model import Dataset, LabeledPoint, LteLevel, Observation, PointCloud

JDAY_WINDOW_START = 250
JDAY_WINDOW_END = 500  # scaling window; leap-season day 501 clamps to 1.0


class DeltaSign(enum.Enum):
    """Orientation of the daily margin.

    AIR_MINUS_LTE shrinks as risk grows and goes negative on (rare) kill
    days; LTE_MINUS_AIR is the mirrored reading, kept as a toggle.
    """

    AIR_MINUS_LTE = "air-minus-lte"
    LTE_MINUS_AIR = "lte-minus-air"


DEFAULT_DELTA_SIGN = DeltaSign.AIR_MINUS_LTE


def compute_delta(
    observation: Observation,
    level: LteLevel,
    sign: DeltaSign = DEFAULT_DELTA_SIGN,
) -> float | None:
    """Daily margin between minimum air temperature and the selected LTE.

    Returns None on days without a sample at the requested level.
    """
    lte = observation.lte(level)
    if lte is None:
        return None
    if sign is DeltaSign.AIR_MINUS_LTE:
        return observation.min_air_temp - lte
    return lte - observation.min_air_temp


@dataclass(frozen=True)
class DeltaEntry:
    season: str
    cultivar: str
    raw_jday: int
    delta: float


@dataclass(frozen=True)
class DeltaSeries:
    """Margins sharing one normalization scope.

    ``scope`` is the (cultivar, season) key the min/max statistics run
    over; "*" marks a pooled dimension.
    """

    scope: tuple[str, str]
    entries: tuple[DeltaEntry, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("a delta series must contain at least one entry")
        want_cultivar, want_season = self.scope
        for e in self.entries:
            if want_cultivar != "*" and e.cultivar != want_cultivar:
                raise ValueError(f"entry cultivar {e.cultivar!r} outside scope {self.scope}")
            if want_season != "*" and e.season != want_season:
                raise ValueError(f"entry season {e.season!r} outside scope {self.scope}")


def eqn1_normalize(series: DeltaSeries) -> list[float]:
    """Rescale margins by the series' |delta| range.

    Output i is (delta_i - min|delta|) / (max|delta| - min|delta|), in the
    entry order given. Nonnegative series land in [0, 1] with the extremes
    pinned to 0 and 1 exactly; negative margins map below 0. A constant
    |delta| series has no scale and raises.
    """
    magnitudes = [abs(e.delta) for e in series.entries]
    lo = min(magnitudes)
    hi = max(magnitudes)
    if hi == lo:
        cultivar, season = series.scope
        raise DegenerateScaleError(
            f"all |delta| equal ({lo}) for cultivar={cultivar} season={season}; cannot rescale"
        )
    span = hi - lo
    return [(e.delta - lo) / span for e in series.entries]


def scale_jday(raw_jday: int) -> float:
    """Affine map of the dormant window onto [0, 1]; leap day 501 clamps to 1.0."""
    if not JDAY_WINDOW_START <= raw_jday <= 501:
        raise JdayRangeError(f"season day {raw_jday} outside [{JDAY_WINDOW_START}, 501]")
    scaled = (raw_jday - JDAY_WINDOW_START) / (JDAY_WINDOW_END - JDAY_WINDOW_START)
    return min(scaled, 1.0)


@dataclass(frozen=True)
class Grouping:
    """Which slice of the dataset one point cloud covers."""

    kind: str  # "cultivar" or "season"
    key: str

    def __post_init__(self) -> None:
        if self.kind not in ("cultivar", "season"):
            raise ValueError(f"grouping kind must be 'cultivar' or 'season', got {self.kind!r}")

    @classmethod
    def by_cultivar(cls, key: str) -> "Grouping":
        return cls("cultivar", key)

    @classmethod
    def by_season(cls, key: str) -> "Grouping":
        return cls("season", key)

    def matches(self, obs: Observation) -> bool:
        return (obs.cultivar if self.kind == "cultivar" else obs.season) == self.key

    def describe(self) -> str:
        return f"{self.kind}={self.key}"


def assemble_point_cloud(
    dataset: Dataset,
    grouping: Grouping,
    level: LteLevel,
    *,
    pooled_scale: bool = False,
    delta_sign: DeltaSign = DEFAULT_DELTA_SIGN,
) -> PointCloud:
    """Build the normalized (day, margin) cloud for one cultivar or season.

    Margin statistics are taken per (cultivar, season) sub-series by
    default, so one extreme trajectory cannot flatten the others inside a
    multi-cultivar season cloud; ``pooled_scale`` switches to one scale for
    the whole group. Observations without the selected LTE are skipped.
    Point order is canonical regardless of dataset row order.
    """
    known = dataset.cultivars if grouping.kind == "cultivar" else dataset.seasons
    if grouping.key not in known:
        raise UnknownLabelError(f"unknown {grouping.kind} {grouping.key!r}")

    selected: list[tuple[Observation, float]] = []
    for obs in dataset.observations:
        if not grouping.matches(obs):
            continue
        delta = compute_delta(obs, level, delta_sign)
        if delta is None:
            continue
        selected.append((obs, delta))
    if not selected:
        raise EmptyGroupError(f"no observations with {level.name} for {grouping.describe()}")

    def scope_of(obs: Observation) -> tuple[str, str]:
        if pooled_scale:
            return (
                grouping.key if grouping.kind == "cultivar" else "*",
                grouping.key if grouping.kind == "season" else "*",
            )
        return (obs.cultivar, obs.season)

    grouped: dict[tuple[str, str], list[tuple[Observation, float]]] = {}
    for obs, delta in selected:
        grouped.setdefault(scope_of(obs), []).append((obs, delta))

    points: list[LabeledPoint] = []
    for scope, members in grouped.items():
        series = DeltaSeries(
            scope=scope,
            entries=tuple(
                DeltaEntry(obs.season, obs.cultivar, obs.season_jday, delta) for obs, delta in members
            ),
        )
        normalized = eqn1_normalize(series)
        for (obs, _), y in zip(members, normalized):
            points.append(
                LabeledPoint(
                    x=scale_jday(obs.season_jday),
                    y=y,
                    cultivar=obs.cultivar,
                    season=obs.season,
                    raw_jday=obs.season_jday,
                )
            )

    provenance = (
        f"{grouping.describe()} level={level.name} "
        f"delta={delta_sign.value} scale={'pooled' if pooled_scale else 'per-series'}"
    )
    return PointCloud.from_points(points, provenance)


def delta_series_for(
    observations: Sequence[Observation],
    level: LteLevel,
    scope: tuple[str, str],
    sign: DeltaSign = DEFAULT_DELTA_SIGN,
) -> DeltaSeries:
    """Collect the margins of one scope from already-filtered observations."""
    entries = [
        DeltaEntry(obs.season, obs.cultivar, obs.season_jday, delta)
        for obs in observations
        if (delta := compute_delta(obs, level, sign)) is not None
    ]
    if not entries:
        raise EmptyGroupError(f"no observations with {level.name} in scope {scope}")
    return DeltaSeries(scope=scope, entries=tuple(entries))
