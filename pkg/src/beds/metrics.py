"""Evaluation statistics for daily admission series.

Inputs are per-day counts of elective surgical admissions to one unit. The
headline dispersion metric is the 90%-quantile-to-median ratio, which is
invariant to volume scaling and therefore usable for before/after comparisons
across periods with different patient volumes; the accompanying one-sided
bootstrap test asks whether that ratio dropped by more than a chosen margin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import DateWindow, Day, ONE_DAY

WEEKDAY_NAMES = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday")

#: Replicates drawn per chunk; fixed so a given seed yields the same stream.
_BOOTSTRAP_CHUNK = 10_000


class EmptySeries(ValueError):
    """The operation needs at least one observation."""


class ZeroMedian(ValueError):
    """The quantile-to-median ratio is undefined when the median is zero."""


class SeriesTooShort(ValueError):
    """Autocorrelation needs more observations than the maximum lag."""


class ZeroVariance(ValueError):
    """Autocorrelation is undefined for a constant series."""


@dataclass(frozen=True)
class AdmissionRecord:
    """One admission event: the day, the destination unit, elective or not."""

    day: Day
    unit: str
    elective: bool = True


@dataclass(frozen=True)
class DailySeries:
    """Ordered day -> count series for one unit and filter."""

    days: tuple[Day, ...]
    counts: tuple[int, ...]
    unit: str = ""
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.days) != len(self.counts):
            raise ValueError("days and counts must have equal length")
        if any(b <= a for a, b in zip(self.days, self.days[1:])):
            raise ValueError("days must be strictly increasing")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    def __len__(self) -> int:
        return len(self.days)

    def values(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float)

    def weekdays_only(self) -> DailySeries:
        """Monday-to-Friday entries only (weekend days dropped)."""
        kept = [(d, c) for d, c in zip(self.days, self.counts) if d.weekday() < 5]
        return DailySeries(
            days=tuple(d for d, _ in kept),
            counts=tuple(c for _, c in kept),
            unit=self.unit,
            label=f"{self.label} (weekdays)".strip(),
        )

    def restrict(self, window: DateWindow) -> DailySeries:
        kept = [(d, c) for d, c in zip(self.days, self.counts) if window.contains(d)]
        return DailySeries(
            days=tuple(d for d, _ in kept),
            counts=tuple(c for _, c in kept),
            unit=self.unit,
            label=self.label,
        )


def daily_admissions(
    records: Iterable[AdmissionRecord],
    unit: str,
    window: DateWindow,
    elective_only: bool = True,
) -> DailySeries:
    """Count admissions to one unit per day over the window, zero-filled."""
    by_day: dict[Day, int] = {}
    for record in records:
        if record.unit != unit:
            continue
        if elective_only and not record.elective:
            continue
        if window.contains(record.day):
            by_day[record.day] = by_day.get(record.day, 0) + 1
    days = tuple(window.days())
    return DailySeries(
        days=days,
        counts=tuple(by_day.get(d, 0) for d in days),
        unit=unit,
        label="elective" if elective_only else "all",
    )


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    coefficient_of_variation: float
    median: float
    q90: float
    qmra: float | None
    n_days: int

    def to_json_dict(self) -> dict:
        return {
            "mean": self.mean,
            "coefficient_of_variation": self.coefficient_of_variation,
            "median": self.median,
            "q90": self.q90,
            "qmra": self.qmra,
            "n_days": self.n_days,
        }


def _interpolated_quantile(ordered: Sequence[int], p: Fraction) -> Fraction:
    """Linear interpolation between order statistics at index p*(n-1).

    Integer counts make the result an exact rational, which is what makes
    the quantile-to-median ratio exactly invariant under integer scaling.
    """
    index = p * (len(ordered) - 1)
    i = int(index)
    frac = index - i
    lo = Fraction(ordered[i])
    if frac == 0 or i + 1 >= len(ordered):
        return lo
    return lo + frac * (ordered[i + 1] - lo)


def summarize(series: DailySeries, population_sd: bool = True) -> SummaryStats:
    """Mean, CoV, and interpolated order statistics of a daily series.

    Quantiles interpolate linearly between order statistics at index
    p*(n-1); the CoV uses the population standard deviation by default.
    """
    if len(series) == 0:
        raise EmptySeries("cannot summarize an empty series")
    x = series.values()
    mean = float(np.mean(x))
    sd = float(np.std(x, ddof=0 if population_sd else 1))
    ordered = sorted(series.counts)
    median = _interpolated_quantile(ordered, Fraction(1, 2))
    q90 = _interpolated_quantile(ordered, Fraction(9, 10))
    return SummaryStats(
        mean=mean,
        coefficient_of_variation=sd / mean if mean else float("nan"),
        median=float(median),
        q90=float(q90),
        qmra=float(q90 / median) if median > 0 else None,
        n_days=len(series),
    )


def count_outlier_days(series: DailySeries, lo: int = 2, hi: int = 5) -> int:
    """Days whose count falls below ``lo`` or above ``hi``."""
    if len(series) == 0:
        raise EmptySeries("cannot count outliers of an empty series")
    return sum(1 for c in series.counts if c < lo or c > hi)


def weekday_split(series: DailySeries) -> dict[str, DailySeries]:
    """Partition into five Monday..Friday sub-series; weekends are dropped."""
    if len(series) == 0:
        raise EmptySeries("cannot split an empty series")
    out: dict[str, DailySeries] = {}
    for i, name in enumerate(WEEKDAY_NAMES):
        kept = [(d, c) for d, c in zip(series.days, series.counts) if d.weekday() == i]
        out[name] = DailySeries(
            days=tuple(d for d, _ in kept),
            counts=tuple(c for _, c in kept),
            unit=series.unit,
            label=f"{series.label} {name}".strip(),
        )
    return out


def _qmra(x: np.ndarray) -> float:
    median = float(np.percentile(x, 50))
    if median <= 0:
        raise ZeroMedian("median is zero; quantile-to-median ratio undefined")
    return float(np.percentile(x, 90)) / median


@dataclass(frozen=True)
class BootstrapResult:
    observed_relative_change: float
    observed_absolute_change: float
    p_value: float
    m: int
    delta: float
    seed: int
    change_mode: str = "relative"

    def to_json_dict(self) -> dict:
        return {
            "observed_relative_change": self.observed_relative_change,
            "observed_absolute_change": self.observed_absolute_change,
            "p_value": self.p_value,
            "m": self.m,
            "delta": self.delta,
            "seed": self.seed,
            "change_mode": self.change_mode,
        }


def bootstrap_test(
    before: DailySeries,
    after: DailySeries,
    delta: float = 0.25,
    m: int = 100_000,
    seed: int = 0,
    change_mode: str = "relative",
) -> BootstrapResult:
    """One-sided test of whether the quantile-to-median ratio dropped by more
    than ``delta`` from ``before`` to ``after``.

    Null hypothesis: the drop is at most ``delta`` (change >= -delta). Days
    are resampled with replacement within each series; the p-value is the
    fraction of the m replicates whose change statistic stays at or above
    -delta. ``change_mode`` selects a relative (default) or absolute change
    statistic; replicates whose ratio is undefined (zero resampled median)
    are counted as consistent with the null, which is conservative.
    """
    if len(before) == 0 or len(after) == 0:
        raise EmptySeries("both series must be nonempty")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if m < 1:
        raise ValueError("m must be at least 1")
    if change_mode not in ("relative", "absolute"):
        raise ValueError("change_mode must be 'relative' or 'absolute'")
    b = before.values()
    a = after.values()
    qm_before = _qmra(b)
    qm_after = _qmra(a)
    observed_abs = qm_after - qm_before
    observed_rel = observed_abs / qm_before

    rng = np.random.default_rng(seed)
    supporting = 0
    remaining = m
    while remaining > 0:
        k = min(_BOOTSTRAP_CHUNK, remaining)
        res_b = b[rng.integers(0, len(b), size=(k, len(b)))]
        res_a = a[rng.integers(0, len(a), size=(k, len(a)))]
        with np.errstate(invalid="ignore", divide="ignore"):
            qb = np.percentile(res_b, 90, axis=1) / np.percentile(res_b, 50, axis=1)
            qa = np.percentile(res_a, 90, axis=1) / np.percentile(res_a, 50, axis=1)
            if change_mode == "relative":
                change = (qa - qb) / qb
            else:
                change = qa - qb
        defined = np.isfinite(change)
        supporting += int(np.sum(change[defined] >= -delta)) + int(np.sum(~defined))
        remaining -= k
    return BootstrapResult(
        observed_relative_change=observed_rel,
        observed_absolute_change=observed_abs,
        p_value=supporting / m,
        m=m,
        delta=delta,
        seed=seed,
        change_mode=change_mode,
    )


def autocorrelation(series: DailySeries, max_lag: int) -> list[float]:
    """Sample autocorrelation at lags 1..max_lag.

    Each lag is the Pearson correlation between the series and its lagged
    copy, so an exactly periodic series scores 1.0 at multiples of its
    period. Callers analyzing weekly structure should pass a weekday-only
    series (see :meth:`DailySeries.weekdays_only`).
    """
    if max_lag < 1:
        raise ValueError("max_lag must be at least 1")
    if len(series) <= max_lag:
        raise SeriesTooShort(f"need more than {max_lag} observations, have {len(series)}")
    x = series.values()
    if np.ptp(x) == 0:
        raise ZeroVariance("autocorrelation undefined for a constant series")
    out = []
    for lag in range(1, max_lag + 1):
        head, tail = x[:-lag], x[lag:]
        sh, st = float(np.std(head)), float(np.std(tail))
        if sh == 0 or st == 0:
            out.append(float("nan"))
            continue
        cov = float(np.mean((head - head.mean()) * (tail - tail.mean())))
        out.append(cov / (sh * st))
    return out


@dataclass(frozen=True)
class Histogram:
    """Counts of values binned by ``bin_width``; keys are bin lower edges."""

    bin_width: int
    counts: dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json_dict(self) -> dict:
        return {
            "bin_width": self.bin_width,
            "bins": [{"start": k, "count": v} for k, v in sorted(self.counts.items())],
        }


def reschedule_histogram(
    records: Iterable,
    bin_width_days: int = 1,
    include_unrescheduled: bool = False,
) -> Histogram:
    """Bin the day shifts of simulated reschedules.

    ``records`` need ``delta_days`` and ``rescheduled`` attributes. Patients
    the scheduler never moved contribute to the zero bin only when
    ``include_unrescheduled`` is set.
    """
    if bin_width_days < 1:
        raise ValueError("bin width must be at least 1 day")
    counts: dict[int, int] = {}
    for record in records:
        if not record.rescheduled and not include_unrescheduled:
            continue
        start = (record.delta_days // bin_width_days) * bin_width_days
        counts[start] = counts.get(start, 0) + 1
    return Histogram(bin_width=bin_width_days, counts=counts)


def series_from_records(
    records: Iterable[AdmissionRecord],
    units: Sequence[str],
    window: DateWindow,
    elective_only: bool = True,
) -> dict[str, DailySeries]:
    """Daily series per unit over a shared window."""
    records = list(records)
    return {
        unit: daily_admissions(records, unit, window, elective_only) for unit in units
    }
