"""Feasible-day search, pluggable ranking, and the calendar heatmap projection.

The shipped default policy is the greedy one: among feasible days, prefer the
day with the fewest admissions already scheduled to the target unit, breaking
ties by the earliest day. Other policies plug in through the same ``rank``
interface and the top-n recommendation path.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from decimal import Decimal
from typing import Protocol, Sequence

from .core import (
    Booking,
    CaseRequest,
    DateWindow,
    Day,
    DayNotFeasible,
    NoFeasibleDay,
    ScheduleState,
)

#: Admission-count color boundaries; bucket = number of thresholds <= count.
DEFAULT_THRESHOLDS: tuple[int, ...] = (2, 4, 6)

#: Upper bound on the number of days scanned per request, so a malformed
#: request with a huge window cannot stall the service.
MAX_WINDOW_DAYS = 365


class RankingPolicy(Protocol):
    name: str

    def rank(
        self, state: ScheduleState, request: CaseRequest, candidates: list[Day]
    ) -> list[Day]:
        """Return candidates ordered best-first; must be a permutation of a
        subset of ``candidates`` and deterministic for fixed inputs."""
        ...


class FewestAdmissionsFirst:
    """Greedy ranking: fewest scheduled admissions to the target unit, then
    earliest day."""

    name = "fewest-admissions"

    def rank(
        self, state: ScheduleState, request: CaseRequest, candidates: list[Day]
    ) -> list[Day]:
        return sorted(
            candidates,
            key=lambda d: (state.unit_admissions(d, request.post_op_unit), d),
        )


class EarliestFirst:
    """Rank by date only; minimizes wait time, ignores unit load."""

    name = "earliest"

    def rank(
        self, state: ScheduleState, request: CaseRequest, candidates: list[Day]
    ) -> list[Day]:
        return sorted(candidates)


POLICIES: dict[str, RankingPolicy] = {
    policy.name: policy for policy in (FewestAdmissionsFirst(), EarliestFirst())
}

DEFAULT_POLICY = POLICIES["fewest-admissions"]


def get_policy(name: str) -> RankingPolicy:
    try:
        return POLICIES[name]
    except KeyError:
        raise ValueError(f"unknown ranking policy {name!r}; known: {sorted(POLICIES)}")


def candidate_days(
    state: ScheduleState, request: CaseRequest, max_days: int = MAX_WINDOW_DAYS
) -> list[Day]:
    """Ascending list of days in the request's window intersection on which
    the surgeon has enough remaining hours for the case."""
    window = request.search_window()
    if window is None:
        return []
    out: list[Day] = []
    for i, day in enumerate(window.days()):
        if i >= max_days:
            break
        if state.surgeon_hours(day, request.surgeon_id) >= request.duration_hours:
            out.append(day)
    return out


def recommend_greedy(state: ScheduleState, request: CaseRequest) -> Day:
    """Earliest day among those minimizing admissions to the target unit."""
    days = candidate_days(state, request)
    if not days:
        raise NoFeasibleDay(
            f"no feasible day for patient {request.patient_id} "
            f"(surgeon {request.surgeon_id}, {request.duration_hours}h)"
        )
    return min(days, key=lambda d: (state.unit_admissions(d, request.post_op_unit), d))


def color_bucket(count: int, thresholds: Sequence[int] = DEFAULT_THRESHOLDS) -> int:
    """Bucket index for a count: the number of thresholds at or below it."""
    return bisect_right(list(thresholds), count)


def _check_thresholds(thresholds: Sequence[int]) -> None:
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError(f"thresholds must be strictly increasing: {thresholds}")


@dataclass(frozen=True)
class DayAnnotation:
    """What a scheduler sees for one candidate day."""

    day: Day
    admissions: int
    remaining_hours: Decimal
    bucket: int


@dataclass(frozen=True)
class Recommendation:
    ranked_days: list[Day]
    annotations: list[DayAnnotation]
    policy: str


def _annotate(
    state: ScheduleState,
    request: CaseRequest,
    days: Sequence[Day],
    thresholds: Sequence[int],
) -> list[DayAnnotation]:
    return [
        DayAnnotation(
            day=d,
            admissions=state.unit_admissions(d, request.post_op_unit),
            remaining_hours=state.surgeon_hours(d, request.surgeon_id),
            bucket=color_bucket(state.unit_admissions(d, request.post_op_unit), thresholds),
        )
        for d in days
    ]


def recommend_topn(
    state: ScheduleState,
    request: CaseRequest,
    policy: RankingPolicy = DEFAULT_POLICY,
    n: int = 1,
    thresholds: Sequence[int] = DEFAULT_THRESHOLDS,
) -> Recommendation:
    """The n top-ranked feasible days under the given policy, annotated."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _check_thresholds(thresholds)
    candidates = candidate_days(state, request)
    if not candidates:
        raise NoFeasibleDay(f"no feasible day for patient {request.patient_id}")
    ranked = list(policy.rank(state, request, candidates))[:n]
    return Recommendation(
        ranked_days=ranked,
        annotations=_annotate(state, request, ranked, thresholds),
        policy=policy.name,
    )


def book_request(state: ScheduleState, request: CaseRequest, day: Day) -> Booking:
    """Commit the request onto ``day``, updating hours, admissions, and the
    journal. The state is unchanged if the day is not feasible."""
    if day not in candidate_days(state, request):
        raise DayNotFeasible(
            f"day {day} is not feasible for patient {request.patient_id}"
        )
    return state.book(
        patient_id=request.patient_id,
        surgeon_id=request.surgeon_id,
        unit_id=request.post_op_unit,
        day=day,
        duration_hours=request.duration_hours,
    )


@dataclass(frozen=True)
class HeatmapCell:
    day: Day
    admissions: int
    remaining_hours: Decimal
    bucket: int


def heatmap(
    state: ScheduleState,
    unit_id: str,
    surgeon_id: str,
    window: DateWindow,
    thresholds: Sequence[int] = DEFAULT_THRESHOLDS,
) -> list[HeatmapCell]:
    """One cell per day in the window: scheduled admissions to the unit, the
    surgeon's remaining hours, and the color bucket for the count."""
    _check_thresholds(thresholds)
    return [
        HeatmapCell(
            day=d,
            admissions=state.unit_admissions(d, unit_id),
            remaining_hours=state.surgeon_hours(d, surgeon_id),
            bucket=color_bucket(state.unit_admissions(d, unit_id), thresholds),
        )
        for d in window.days()
    ]
