"""Discrete-event simulation of patient flow under two scheduling modes.

Historical mode replays each profile's recorded trajectory event by event.
In counterfactual mode, elective surgical patients headed for a targeted
unit are re-booked through the greedy recommendation engine at the moment
their scheduling request arrives; the chosen day shifts the patient's whole
downstream trajectory by a constant number of days while preserving every
length of stay.
"""

from __future__ import annotations

import csv
import heapq
import json
import random
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from decimal import Decimal
from pathlib import Path
from typing import Iterable

from .core import CaseRequest, Day, NoFeasibleDay, ScheduleState
from .engine import book_request, recommend_greedy
from .ingest import (
    NegativeLead,
    PatientProfile,
    SurgeonAvailabilityRow,
    available_window,
    classify_elective,
)
from .metrics import AdmissionRecord

ARRIVAL = "ARRIVAL"
TRANSFER_IN = "TRANSFER_IN"
READY_TO_TRANSFER = "READY_TO_TRANSFER"
DISCHARGE = "DISCHARGE"

# Tie-break for equal-time events; after kind, insertion order decides.
_KIND_ORDER = {ARRIVAL: 0, TRANSFER_IN: 1, READY_TO_TRANSFER: 2, DISCHARGE: 3}

MODE_HISTORICAL = "historical"
MODE_BEDS = "beds"


@dataclass(frozen=True)
class SimEvent:
    kind: str
    time: datetime
    patient_id: str
    unit_id: str | None = None
    unit_index: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "time": self.time.isoformat(),
            "patient": self.patient_id,
            "unit": self.unit_id,
        }


class EventQueue:
    """Priority queue over (time, kind order, insertion order)."""

    def __init__(self) -> None:
        self._heap: list[tuple[datetime, int, int, SimEvent]] = []
        self._counter = 0

    def push(self, event: SimEvent) -> None:
        heapq.heappush(self._heap, (event.time, _KIND_ORDER[event.kind], self._counter, event))
        self._counter += 1

    def pop(self) -> SimEvent:
        return heapq.heappop(self._heap)[3]

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)


@dataclass(frozen=True)
class SimConfig:
    scheduler_mode: str = MODE_HISTORICAL
    beds_start_date: Day | None = None
    beds_units: frozenset[str] = frozenset()
    alpha: Decimal = Decimal("1")
    rng_seed: int = 0
    # Bounded-uniform multiplicative noise on each stay length: a stay of L
    # becomes L * (1 + u), u ~ U(-f, f). Zero disables it.
    los_perturbation: float = 0.0
    # Historically kept patients also consume surgeon hours (flooring at 0)
    # so counterfactual bookings see true contention.
    consume_hours_for_historical: bool = True

    def __post_init__(self) -> None:
        if self.scheduler_mode not in (MODE_HISTORICAL, MODE_BEDS):
            raise ValueError(f"unknown scheduler mode {self.scheduler_mode!r}")
        if self.scheduler_mode == MODE_BEDS:
            if not self.beds_units:
                raise ValueError("counterfactual mode needs a nonempty unit set")
            if self.beds_start_date is None:
                raise ValueError("counterfactual mode needs a start date")
        if not (0 <= self.los_perturbation < 1):
            raise ValueError("los_perturbation must be in [0, 1)")


@dataclass
class SimRecord:
    """Per-patient outcome: where the admission landed and how far it moved."""

    primary_csn: str
    unit: str | None
    original_day: Day | None
    simulated_day: Day | None
    delta_days: int
    rescheduled: bool
    elective: bool
    unit_entries: list[tuple[str, datetime]] = field(default_factory=list)


@dataclass
class SimResult:
    events: list[SimEvent]
    records: list[SimRecord]
    fallback_no_feasible_day: int
    skipped_empty_window: int
    final_state: ScheduleState

    def admission_records(self) -> list[AdmissionRecord]:
        return [
            AdmissionRecord(day=r.simulated_day, unit=r.unit, elective=r.elective)
            for r in self.records
            if r.simulated_day is not None and r.unit is not None
        ]


def next_events(
    current: SimEvent,
    profile: PatientProfile,
    delta_days: int = 0,
    los: timedelta | None = None,
) -> list[SimEvent]:
    """Successor events for one patient.

    An arrival produces the transfer into the first unit (shifted by the
    reschedule delta); a transfer-in produces the ready-to-transfer at entry
    plus the stay length (``los`` overrides the recorded one); ready-to-
    transfer rolls into the next unit immediately, or the discharge when the
    patient was in the last unit.
    """
    csn = profile.primary_csn
    if current.kind == ARRIVAL:
        if not profile.unit_list:
            return []
        entry = profile.unit_entry_times()[0] + timedelta(days=delta_days)
        return [SimEvent(TRANSFER_IN, entry, csn, profile.unit_list[0], 0)]
    if current.kind == TRANSFER_IN:
        stay = los if los is not None else profile.los_list[current.unit_index]
        return [
            SimEvent(
                READY_TO_TRANSFER,
                current.time + stay,
                csn,
                current.unit_id,
                current.unit_index,
            )
        ]
    if current.kind == READY_TO_TRANSFER:
        nxt = current.unit_index + 1
        if nxt < len(profile.unit_list):
            return [SimEvent(TRANSFER_IN, current.time, csn, profile.unit_list[nxt], nxt)]
        return [SimEvent(DISCHARGE, current.time, csn)]
    return []


def _schedule_arrival(
    state: ScheduleState,
    profile: PatientProfile,
    config: SimConfig,
    counters: dict[str, int],
) -> SimRecord:
    """Decide the admission day for one arriving request and update the ledger."""
    elective = classify_elective(profile)
    unit = profile.first_postop_unit()
    original_day = profile.scheduled_admission_day()
    record = SimRecord(
        primary_csn=profile.primary_csn,
        unit=unit,
        original_day=original_day,
        simulated_day=original_day,
        delta_days=0,
        rescheduled=False,
        elective=elective,
    )
    if not profile.is_surgical():
        return record

    surgeon = profile.primary_surgeon_id or ""
    duration = profile.or_duration_hours()
    applicable = (
        config.scheduler_mode == MODE_BEDS
        and elective
        and unit in config.beds_units
        and profile.arrival_time.date() >= config.beds_start_date
        and duration is not None
        and duration > 0
    )
    if applicable:
        try:
            window = available_window(
                profile.arrival_time.date(),
                profile.in_or_times[0].date(),
                profile.admission_time.date(),
                config.alpha,
            )
        except (NegativeLead, ValueError):
            counters["empty_window"] += 1
        else:
            request = CaseRequest(
                patient_id=profile.primary_csn,
                surgeon_id=surgeon,
                duration_hours=duration,
                clinical_window=window,
                patient_window=window,
                post_op_unit=unit,
            )
            try:
                day = recommend_greedy(state, request)
            except NoFeasibleDay:
                counters["no_feasible_day"] += 1
            else:
                book_request(state, request, day)
                record.delta_days = (day - original_day).days
                record.simulated_day = day
                record.rescheduled = True
                return record

    # Historical booking: the ledger still reflects this patient so later
    # counterfactual requests see true occupancy.
    if elective and unit is not None and original_day is not None:
        state.count_admission(original_day, unit)
    if config.consume_hours_for_historical and duration is not None and surgeon:
        state.consume_surgeon_hours(profile.in_or_times[0].date(), surgeon, duration, clamp=True)
    return record


def run(
    profiles: Iterable[PatientProfile],
    availability: Iterable[SurgeonAvailabilityRow],
    config: SimConfig,
) -> SimResult:
    """Simulate the whole population under the configured scheduler.

    Arrivals are processed in (arrival time, patient id) order, so the ledger
    each request sees contains exactly the bookings of earlier requests. The
    run is single-threaded and fully deterministic for a fixed config.
    """
    rng = random.Random(config.rng_seed)
    state = ScheduleState()
    for row in availability:
        state.add_surgeon_hours(row.date, row.primary_surgeon_id, row.available_hours)

    ordered = sorted(profiles, key=lambda p: (p.arrival_time, p.primary_csn))
    by_csn = {p.primary_csn: p for p in ordered}
    if len(by_csn) != len(ordered):
        raise ValueError("duplicate patient ids in profiles")

    queue = EventQueue()
    for profile in ordered:
        queue.push(SimEvent(ARRIVAL, profile.arrival_time, profile.primary_csn))

    counters = {"no_feasible_day": 0, "empty_window": 0}
    records: dict[str, SimRecord] = {}
    events: list[SimEvent] = []

    while queue:
        event = queue.pop()
        events.append(event)
        profile = by_csn[event.patient_id]
        if event.kind == ARRIVAL:
            record = _schedule_arrival(state, profile, config, counters)
            records[profile.primary_csn] = record
            for successor in next_events(event, profile, delta_days=record.delta_days):
                queue.push(successor)
        elif event.kind == TRANSFER_IN:
            records[profile.primary_csn].unit_entries.append((event.unit_id, event.time))
            los = None
            if config.los_perturbation:
                factor = 1 + rng.uniform(-config.los_perturbation, config.los_perturbation)
                los = profile.los_list[event.unit_index] * factor
            for successor in next_events(event, profile, los=los):
                queue.push(successor)
        elif event.kind == READY_TO_TRANSFER:
            for successor in next_events(event, profile):
                queue.push(successor)
        # DISCHARGE has no successors.

    return SimResult(
        events=events,
        records=[records[p.primary_csn] for p in ordered],
        fallback_no_feasible_day=counters["no_feasible_day"],
        skipped_empty_window=counters["empty_window"],
        final_state=state,
    )


# --------------------------------------------------------------------------
# Artifact output
# --------------------------------------------------------------------------


def write_events(path: Path | str, events: Iterable[SimEvent]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(json.dumps(event.to_json_dict()) + "\n")


RECORD_COLUMNS = ("primary_csn", "original_day", "simulated_day", "delta_days", "unit")


def write_records_csv(path: Path | str, records: Iterable[SimRecord]) -> None:
    """Persist the schedulable (elective surgical) records."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            if not r.elective or r.original_day is None:
                continue
            writer.writerow(
                [
                    r.primary_csn,
                    r.original_day.isoformat(),
                    r.simulated_day.isoformat(),
                    r.delta_days,
                    r.unit,
                ]
            )


@dataclass(frozen=True)
class RecordRow:
    primary_csn: str
    original_day: Day
    simulated_day: Day
    delta_days: int
    unit: str

    @property
    def rescheduled(self) -> bool:
        # The CSV does not carry the flag; a moved day implies a reschedule.
        return self.delta_days != 0


def read_records_csv(path: Path | str) -> list[RecordRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for raw in csv.DictReader(fh):
            rows.append(
                RecordRow(
                    primary_csn=raw["primary_csn"],
                    original_day=date.fromisoformat(raw["original_day"]),
                    simulated_day=date.fromisoformat(raw["simulated_day"]),
                    delta_days=int(raw["delta_days"]),
                    unit=raw["unit"],
                )
            )
    return rows
