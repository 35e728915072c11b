"""Calendar dates, availability windows, and the booking ledger.

Everything downstream (recommendation engine, simulator, service) speaks in
terms of the types defined here. Hours are held as ``Decimal`` at 0.01-hour
resolution so that "surgeon has enough time" comparisons are exact and
reproducible across platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from decimal import Decimal, InvalidOperation, ROUND_HALF_UP
from pathlib import Path
from typing import Iterable, Iterator, Mapping

Day = date

ONE_DAY = timedelta(days=1)
HOURS_RESOLUTION = Decimal("0.01")
ZERO_HOURS = Decimal("0.00")

#: Reserved unit id for cases that do not need a hospital bed after surgery.
#: Their bookings are tracked in the ledger but excluded from level-loading
#: statistics.
OUTPATIENT_UNIT = "NONE"


class SchedulingError(Exception):
    """Base class for scheduling domain errors."""


class InsufficientHours(SchedulingError):
    """The surgeon does not have enough remaining hours on the requested day."""


class NoFeasibleDay(SchedulingError):
    """No candidate day satisfies the request's windows and surgeon hours."""


class DayNotFeasible(SchedulingError):
    """The requested day is not among the feasible candidates."""


def hours(value: Decimal | float | int | str) -> Decimal:
    """Normalize an hour quantity to the ledger's 0.01-hour resolution."""
    try:
        return Decimal(str(value)).quantize(HOURS_RESOLUTION, rounding=ROUND_HALF_UP)
    except InvalidOperation as exc:
        raise ValueError(f"not an hour quantity: {value!r}") from exc


def timedelta_hours(delta: timedelta) -> Decimal:
    """Duration of a timedelta in decimal hours, 0.01-hour resolution."""
    return hours(Decimal(delta.total_seconds()) / Decimal(3600))


@dataclass(frozen=True, order=True)
class DateWindow:
    """Inclusive range of calendar days."""

    start: Day
    end: Day

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"window start {self.start} is after end {self.end}")

    def contains(self, day: Day) -> bool:
        return self.start <= day <= self.end

    def days(self) -> Iterator[Day]:
        day = self.start
        while day <= self.end:
            yield day
            day += ONE_DAY

    def n_days(self) -> int:
        return (self.end - self.start).days + 1

    def intersect(self, other: DateWindow) -> DateWindow | None:
        """Overlap of two windows, or None when they are disjoint."""
        lo = max(self.start, other.start)
        hi = min(self.end, other.end)
        if lo > hi:
            return None
        return DateWindow(lo, hi)


def window_intersect(a: DateWindow, b: DateWindow) -> DateWindow | None:
    return a.intersect(b)


@dataclass(frozen=True)
class CaseRequest:
    """One patient's request to be scheduled for surgery.

    ``clinical_window`` is the clinically/institutionally acceptable range,
    ``patient_window`` the patient's own availability; the feasible search
    space is their intersection. Callers that only know a single inferred
    window pass it as both.
    """

    patient_id: str
    surgeon_id: str
    duration_hours: Decimal
    clinical_window: DateWindow
    patient_window: DateWindow
    post_op_unit: str
    extras: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "duration_hours", hours(self.duration_hours))
        if self.duration_hours <= 0:
            raise ValueError("case duration must be positive")

    def search_window(self) -> DateWindow | None:
        return self.clinical_window.intersect(self.patient_window)


@dataclass(frozen=True)
class Booking:
    """One committed booking; the journal is an append-only list of these."""

    patient_id: str
    surgeon_id: str
    unit_id: str
    day: Day
    duration_hours: Decimal
    sequence_number: int
    booked_at: datetime

    def to_json_dict(self) -> dict:
        return {
            "patient_id": self.patient_id,
            "surgeon_id": self.surgeon_id,
            "unit_id": self.unit_id,
            "day": self.day.isoformat(),
            "duration_hours": float(self.duration_hours),
            "sequence_number": self.sequence_number,
            "booked_at": self.booked_at.isoformat(),
        }

    @classmethod
    def from_json_dict(cls, payload: Mapping) -> Booking:
        return cls(
            patient_id=str(payload["patient_id"]),
            surgeon_id=str(payload["surgeon_id"]),
            unit_id=str(payload["unit_id"]),
            day=date.fromisoformat(payload["day"]),
            duration_hours=hours(payload["duration_hours"]),
            sequence_number=int(payload["sequence_number"]),
            booked_at=datetime.fromisoformat(payload["booked_at"]),
        )


class ScheduleState:
    """Ledger of remaining surgeon hours and scheduled unit admissions.

    Only nonzero entries are stored; lookups for unknown (day, surgeon) or
    (day, unit) pairs return 0. The state is a single-writer value: all
    booking mutation goes through :meth:`apply_booking` (or :meth:`book`,
    which constructs the record first), and every applied booking is appended
    to the journal so the ledger can be reproduced by replay.
    """

    def __init__(self, day_attributes: Mapping[Day, Mapping[str, str]] | None = None):
        self._surgeon_hours: dict[tuple[Day, str], Decimal] = {}
        self._unit_admissions: dict[tuple[Day, str], int] = {}
        self.day_attributes: dict[Day, dict[str, str]] = {
            d: dict(v) for d, v in (day_attributes or {}).items()
        }
        self.journal: list[Booking] = []
        self._sequence = 0

    # -- reads ---------------------------------------------------------

    @property
    def sequence(self) -> int:
        """Sequence number of the last applied booking (0 when fresh)."""
        return self._sequence

    def surgeon_hours(self, day: Day, surgeon_id: str) -> Decimal:
        return self._surgeon_hours.get((day, surgeon_id), ZERO_HOURS)

    def unit_admissions(self, day: Day, unit_id: str) -> int:
        return self._unit_admissions.get((day, unit_id), 0)

    def surgeon_hours_items(self) -> list[tuple[Day, str, Decimal]]:
        return sorted((d, s, h) for (d, s), h in self._surgeon_hours.items())

    def unit_admissions_items(self) -> list[tuple[Day, str, int]]:
        return sorted((d, u, n) for (d, u), n in self._unit_admissions.items())

    # -- availability / simulator mutations -----------------------------

    def set_surgeon_hours(self, day: Day, surgeon_id: str, value: Decimal | float | str) -> None:
        value = hours(value)
        if value < 0:
            raise ValueError("surgeon hours must be nonnegative")
        if value == 0:
            self._surgeon_hours.pop((day, surgeon_id), None)
        else:
            self._surgeon_hours[(day, surgeon_id)] = value

    def add_surgeon_hours(self, day: Day, surgeon_id: str, value: Decimal | float | str) -> None:
        self.set_surgeon_hours(day, surgeon_id, self.surgeon_hours(day, surgeon_id) + hours(value))

    def consume_surgeon_hours(
        self, day: Day, surgeon_id: str, value: Decimal | float | str, clamp: bool = False
    ) -> None:
        """Decrement hours outside a booking (historical replay); clamp floors at 0."""
        value = hours(value)
        remaining = self.surgeon_hours(day, surgeon_id) - value
        if remaining < 0:
            if not clamp:
                raise InsufficientHours(
                    f"surgeon {surgeon_id} has {self.surgeon_hours(day, surgeon_id)}h "
                    f"on {day}, needs {value}h"
                )
            remaining = ZERO_HOURS
        self.set_surgeon_hours(day, surgeon_id, remaining)

    def count_admission(self, day: Day, unit_id: str, n: int = 1) -> None:
        """Record scheduled admissions outside a booking (historical replay)."""
        self._unit_admissions[(day, unit_id)] = self.unit_admissions(day, unit_id) + n

    # -- bookings --------------------------------------------------------

    def next_sequence(self) -> int:
        return self._sequence + 1

    def book(
        self,
        patient_id: str,
        surgeon_id: str,
        unit_id: str,
        day: Day,
        duration_hours: Decimal | float | str,
        booked_at: datetime | None = None,
    ) -> Booking:
        """Construct the next booking record and apply it."""
        booking = Booking(
            patient_id=patient_id,
            surgeon_id=surgeon_id,
            unit_id=unit_id,
            day=day,
            duration_hours=hours(duration_hours),
            sequence_number=self.next_sequence(),
            booked_at=booked_at or datetime.now(),
        )
        self.apply_booking(booking)
        return booking

    def apply_booking(self, booking: Booking) -> None:
        """Apply one booking; the state is untouched when a check fails."""
        if booking.sequence_number <= self._sequence:
            raise ValueError(
                f"sequence {booking.sequence_number} not after {self._sequence}"
            )
        available = self.surgeon_hours(booking.day, booking.surgeon_id)
        if available < booking.duration_hours:
            raise InsufficientHours(
                f"surgeon {booking.surgeon_id} has {available}h on {booking.day}, "
                f"needs {booking.duration_hours}h"
            )
        self.set_surgeon_hours(
            booking.day, booking.surgeon_id, available - booking.duration_hours
        )
        self._unit_admissions[(booking.day, booking.unit_id)] = (
            self.unit_admissions(booking.day, booking.unit_id) + 1
        )
        self.journal.append(booking)
        self._sequence = booking.sequence_number

    # -- snapshots & equality ---------------------------------------------

    def copy(self) -> ScheduleState:
        clone = ScheduleState(self.day_attributes)
        clone._surgeon_hours = dict(self._surgeon_hours)
        clone._unit_admissions = dict(self._unit_admissions)
        clone.journal = list(self.journal)
        clone._sequence = self._sequence
        return clone

    def snapshot_dict(self) -> dict:
        return {
            "sequence": self._sequence,
            "surgeon_hours": [
                [d.isoformat(), s, float(h)] for d, s, h in self.surgeon_hours_items()
            ],
            "unit_admissions": [
                [d.isoformat(), u, n] for d, u, n in self.unit_admissions_items()
            ],
            "day_attributes": {
                d.isoformat(): dict(v) for d, v in sorted(self.day_attributes.items())
            },
        }

    @classmethod
    def from_snapshot_dict(cls, payload: Mapping) -> ScheduleState:
        state = cls()
        state._sequence = int(payload.get("sequence", 0))
        for d, s, h in payload.get("surgeon_hours", []):
            state.set_surgeon_hours(date.fromisoformat(d), str(s), h)
        for d, u, n in payload.get("unit_admissions", []):
            state._unit_admissions[(date.fromisoformat(d), str(u))] = int(n)
        for d, attrs in payload.get("day_attributes", {}).items():
            state.day_attributes[date.fromisoformat(d)] = dict(attrs)
        return state

    def ledger_equal(self, other: ScheduleState) -> bool:
        """Field-for-field equality of the two ledgers (journal excluded)."""
        return (
            self._surgeon_hours == other._surgeon_hours
            and self._unit_admissions == other._unit_admissions
            and self._sequence == other._sequence
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScheduleState):
            return NotImplemented
        return self.ledger_equal(other) and self.journal == other.journal

    def __repr__(self) -> str:
        return (
            f"ScheduleState(entries={len(self._surgeon_hours)} hours, "
            f"{len(self._unit_admissions)} admissions, seq={self._sequence})"
        )


def apply_booking(state: ScheduleState, booking: Booking) -> ScheduleState:
    """Functional-style wrapper; mutates and returns the same state value."""
    state.apply_booking(booking)
    return state


def replay_journal(bookings: Iterable[Booking], initial: ScheduleState) -> ScheduleState:
    """Fold a journal over a copy of the initial state.

    Bookings at or below the initial state's sequence are skipped, so a
    journal that overlaps a snapshot replays cleanly.
    """
    state = initial.copy()
    for booking in bookings:
        if booking.sequence_number <= state.sequence:
            continue
        state.apply_booking(booking)
    return state


# -- journal persistence (newline-delimited JSON, one booking per line) ----


def write_journal(path: Path | str, bookings: Iterable[Booking]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for booking in bookings:
            fh.write(json.dumps(booking.to_json_dict()) + "\n")


def read_journal(path: Path | str) -> list[Booking]:
    bookings: list[Booking] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            bookings.append(Booking.from_json_dict(json.loads(line)))
    return bookings
