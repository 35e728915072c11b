"""Input-table parsing, cleaning, and patient-profile reconstruction.

Three CSV tables come in: the midnight census (one row per patient per night),
the procedure record (one row per surgery), and optionally per-day surgeon
availability. Out come PatientProfile records describing each visit's unit
trajectory, plus a cleaning report accounting for every excluded patient.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, asdict
from datetime import date, datetime, timedelta
from decimal import Decimal
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .core import (
    DateWindow,
    Day,
    ONE_DAY,
    OUTPATIENT_UNIT,
    ScheduleState,
    hours,
    timedelta_hours,
)

DEFAULT_SCOPE_UNITS = frozenset({"PICUs", "PCUs", "MAIN OR"})
DEFAULT_WARMUP_DAYS = 365
DEFAULT_ALPHA = Decimal("1")

# Surgeon-availability inference: a surgeon whose recorded cases exceed the
# threshold on a day is assumed available for a full block that day.
DEFAULT_AVAILABILITY_THRESHOLD_HOURS = Decimal("3.0")
DEFAULT_BLOCK_HOURS = Decimal("7.0")

CENSUS_REQUIRED = ("Primary CSN", "Dept Abbrev", "Effective Date/Time", "Hospital Admission Dt/Tm")
CENSUS_OPTIONAL = ("Hospital Discharge Dt/Tm", "Service", "Admit Type", "Admit Source")
PROCEDURE_REQUIRED = (
    "Primary CSN",
    "Primary Surgeon ID",
    "Location",
    "Originally Scheduled On",
    "Originally Scheduled For",
    "Patient in Room",
    "Patient out of Room",
)
PROCEDURE_OPTIONAL = ("Patient Class", "Service", "Primary Procedure ID")
AVAILABILITY_REQUIRED = ("Date", "Primary Surgeon ID", "Service", "Available Hours")


class MalformedHeader(ValueError):
    """A required column is missing from a CSV header."""

    def __init__(self, table: str, column: str):
        self.table = table
        self.column = column
        super().__init__(f"{table}: missing required column {column!r}")


class UnparseableTimestamp(ValueError):
    """A timestamp cell could not be parsed."""

    def __init__(self, table: str, row_number: int, text: str):
        self.table = table
        self.row_number = row_number
        super().__init__(f"{table} row {row_number}: cannot parse timestamp {text!r}")


class NegativeLead(ValueError):
    """Admission day precedes the arrival (request) day."""


def parse_timestamp(text: str) -> datetime:
    """Parse ISO-8601 or the legacy 'YY-M-D H:MM[:SS]' form.

    Two-digit years are read as 2000 + YY; times may omit seconds; a bare
    date parses to midnight.
    """
    s = text.strip()
    try:
        return datetime.fromisoformat(s)
    except ValueError:
        pass
    date_part, _, time_part = s.partition(" ")
    y, m, d = date_part.split("-")
    year = int(y)
    if len(y) <= 2:
        year += 2000
    if time_part:
        pieces = time_part.split(":")
        if len(pieces) == 2:
            pieces.append("0")
        hh, mm, ss = (int(p) for p in pieces)
    else:
        hh = mm = ss = 0
    return datetime(year, int(m), int(d), hh, mm, ss)


# --------------------------------------------------------------------------
# Input row types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    primary_csn: str
    dept: str
    effective_datetime: datetime
    admission_datetime: datetime
    discharge_datetime: datetime | None = None
    service: str | None = None
    admit_type: str | None = None
    admit_source: str | None = None


@dataclass(frozen=True)
class ProcedureRow:
    primary_csn: str
    primary_surgeon_id: str
    location: str
    scheduled_on: datetime
    scheduled_for: datetime
    patient_in_room: datetime
    patient_out_of_room: datetime
    patient_class: str | None = None
    service: str | None = None
    procedure_id: str | None = None


@dataclass(frozen=True)
class SurgeonAvailabilityRow:
    date: Day
    primary_surgeon_id: str
    service: str
    available_hours: Decimal


class PatientClass(str, Enum):
    SURGICAL_OUTPATIENT = "Surgical Outpatient"
    SURGICAL_ADMIT = "Surgical Admit"
    SURGICAL_INPATIENT = "Surgical Inpatient"
    MEDICAL_INPATIENT = "Medical Inpatient"


_CLASS_MAP = {
    "Outpatient Surgery": PatientClass.SURGICAL_OUTPATIENT,
    "Surgical Outpatient": PatientClass.SURGICAL_OUTPATIENT,
    "Surgery Admit": PatientClass.SURGICAL_ADMIT,
    "Surgical Admit": PatientClass.SURGICAL_ADMIT,
    "Surgical Inpatient": PatientClass.SURGICAL_INPATIENT,
}


@dataclass
class PatientProfile:
    """One reconstructed hospital visit.

    ``unit_list`` and ``los_list`` describe the trajectory in order; entries
    whose index appears in ``or_indices`` are operating-room stints whose
    start times are the corresponding ``in_or_times``. The available window
    is the inferred day range in which the first surgery could have been
    scheduled.
    """

    primary_csn: str
    patient_class: PatientClass
    arrival_time: datetime
    admission_time: datetime
    available_window: DateWindow
    unit_list: list[str]
    los_list: list[timedelta]
    in_or_times: list[datetime]
    primary_surgeon_id: str | None
    or_indices: list[int] = field(default_factory=list)
    raw_class: str | None = None

    def is_surgical(self) -> bool:
        return bool(self.in_or_times)

    def lead_days(self) -> int:
        return (self.admission_time.date() - self.arrival_time.date()).days

    def first_surgery_day(self) -> Day | None:
        return self.in_or_times[0].date() if self.in_or_times else None

    def or_duration_hours(self) -> Decimal | None:
        """In-room duration of the first surgery, in decimal hours."""
        if not self.or_indices:
            return None
        return timedelta_hours(self.los_list[self.or_indices[0]])

    def first_postop_unit(self) -> str | None:
        """Unit entered right after the first surgery; the reserved
        outpatient id when the patient goes home from the OR; None when the
        patient never has surgery."""
        if not self.or_indices:
            return None
        i = self.or_indices[0]
        if i + 1 < len(self.unit_list):
            return self.unit_list[i + 1]
        return OUTPATIENT_UNIT

    def scheduled_admission_day(self) -> Day | None:
        """Calendar day of admission to the first post-surgery unit.

        Surgeries never span midnight (overnight cases are excluded during
        cleaning), so this equals the first surgery's date.
        """
        if not self.or_indices:
            return None
        return (self.in_or_times[0] + self.los_list[self.or_indices[0]]).date()

    def unit_entry_times(self) -> list[datetime]:
        """Entry timestamp for each trajectory segment.

        The chain is anchored at the first surgery's in-room time when the
        patient has one (segments before it are positioned backward, after it
        forward), otherwise at the admission time. Each segment starts when
        the previous one ends, which is the transfer semantics the simulator
        replays.
        """
        n = len(self.unit_list)
        entries: list[datetime] = [self.admission_time] * n
        if self.or_indices:
            i0 = self.or_indices[0]
            entries[i0] = self.in_or_times[0]
            for k in range(i0 - 1, -1, -1):
                entries[k] = entries[k + 1] - self.los_list[k]
            start = i0
        else:
            start = 0
        for k in range(start + 1, n):
            entries[k] = entries[k - 1] + self.los_list[k - 1]
        return entries


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RejectedRow:
    table: str
    row_number: int
    reason: str


@dataclass
class ParsedTables:
    census: list[CensusRow]
    procedures: list[ProcedureRow]
    availability: list[SurgeonAvailabilityRow] | None
    rejects: list[RejectedRow]


def _check_header(table: str, fieldnames: Sequence[str] | None, required: Sequence[str]) -> None:
    present = set(fieldnames or ())
    for column in required:
        if column not in present:
            raise MalformedHeader(table, column)


def _missing(row: Mapping[str, str], required: Sequence[str]) -> str | None:
    for column in required:
        if not (row.get(column) or "").strip():
            return column
    return None


def _ts(table: str, row_number: int, text: str) -> datetime:
    try:
        return parse_timestamp(text)
    except (ValueError, TypeError):
        raise UnparseableTimestamp(table, row_number, text)


def _opt_ts(table: str, row_number: int, text: str | None) -> datetime | None:
    if not (text or "").strip():
        return None
    return _ts(table, row_number, text)  # type: ignore[arg-type]


def _opt_str(text: str | None) -> str | None:
    text = (text or "").strip()
    return text or None


def parse_census_csv(path: Path | str, rejects: list[RejectedRow]) -> list[CensusRow]:
    rows: list[CensusRow] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _check_header("census", reader.fieldnames, CENSUS_REQUIRED)
        for i, raw in enumerate(reader, start=2):
            missing = _missing(raw, CENSUS_REQUIRED)
            if missing:
                rejects.append(RejectedRow("census", i, f"missing {missing!r}"))
                continue
            rows.append(
                CensusRow(
                    primary_csn=raw["Primary CSN"].strip(),
                    dept=raw["Dept Abbrev"].strip(),
                    effective_datetime=_ts("census", i, raw["Effective Date/Time"]),
                    admission_datetime=_ts("census", i, raw["Hospital Admission Dt/Tm"]),
                    discharge_datetime=_opt_ts("census", i, raw.get("Hospital Discharge Dt/Tm")),
                    service=_opt_str(raw.get("Service")),
                    admit_type=_opt_str(raw.get("Admit Type")),
                    admit_source=_opt_str(raw.get("Admit Source")),
                )
            )
    return rows


def parse_procedure_csv(path: Path | str, rejects: list[RejectedRow]) -> list[ProcedureRow]:
    rows: list[ProcedureRow] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _check_header("procedure", reader.fieldnames, PROCEDURE_REQUIRED)
        for i, raw in enumerate(reader, start=2):
            missing = _missing(raw, PROCEDURE_REQUIRED)
            if missing:
                rejects.append(RejectedRow("procedure", i, f"missing {missing!r}"))
                continue
            in_room = _ts("procedure", i, raw["Patient in Room"])
            out_of_room = _ts("procedure", i, raw["Patient out of Room"])
            if in_room > out_of_room:
                rejects.append(
                    RejectedRow("procedure", i, "'Patient in Room' after 'Patient out of Room'")
                )
                continue
            rows.append(
                ProcedureRow(
                    primary_csn=raw["Primary CSN"].strip(),
                    primary_surgeon_id=raw["Primary Surgeon ID"].strip(),
                    location=raw["Location"].strip(),
                    scheduled_on=_ts("procedure", i, raw["Originally Scheduled On"]),
                    scheduled_for=_ts("procedure", i, raw["Originally Scheduled For"]),
                    patient_in_room=in_room,
                    patient_out_of_room=out_of_room,
                    patient_class=_opt_str(raw.get("Patient Class")),
                    service=_opt_str(raw.get("Service")),
                    procedure_id=_opt_str(raw.get("Primary Procedure ID")),
                )
            )
    return rows


def parse_availability_csv(
    path: Path | str, rejects: list[RejectedRow]
) -> list[SurgeonAvailabilityRow]:
    rows: list[SurgeonAvailabilityRow] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _check_header("availability", reader.fieldnames, AVAILABILITY_REQUIRED)
        for i, raw in enumerate(reader, start=2):
            missing = _missing(raw, AVAILABILITY_REQUIRED)
            if missing:
                rejects.append(RejectedRow("availability", i, f"missing {missing!r}"))
                continue
            try:
                avail = hours(raw["Available Hours"].strip())
            except ValueError:
                rejects.append(RejectedRow("availability", i, "unparseable 'Available Hours'"))
                continue
            if avail < 0:
                rejects.append(RejectedRow("availability", i, "negative 'Available Hours'"))
                continue
            rows.append(
                SurgeonAvailabilityRow(
                    date=_ts("availability", i, raw["Date"]).date(),
                    primary_surgeon_id=raw["Primary Surgeon ID"].strip(),
                    service=raw["Service"].strip(),
                    available_hours=avail,
                )
            )
    return rows


def parse_tables(
    census_csv: Path | str,
    procedure_csv: Path | str,
    availability_csv: Path | str | None = None,
) -> ParsedTables:
    """Parse the input tables; rows missing required values are routed to the
    rejects list, never silently dropped."""
    rejects: list[RejectedRow] = []
    census = parse_census_csv(census_csv, rejects)
    procedures = parse_procedure_csv(procedure_csv, rejects)
    availability = (
        parse_availability_csv(availability_csv, rejects) if availability_csv else None
    )
    return ParsedTables(census, procedures, availability, rejects)


# --------------------------------------------------------------------------
# Derivations
# --------------------------------------------------------------------------


def classify_elective(profile: PatientProfile) -> bool:
    """Elective if the class is surgical outpatient/admit, or the request
    preceded the admission by at least one day."""
    if profile.patient_class in (
        PatientClass.SURGICAL_OUTPATIENT,
        PatientClass.SURGICAL_ADMIT,
    ):
        return True
    return profile.lead_days() >= 1


def available_window(
    arrival_day: Day,
    original_surgery_day: Day,
    admission_day: Day,
    alpha: Decimal | float | int = DEFAULT_ALPHA,
) -> DateWindow:
    """Inferred day range in which the surgery could have been scheduled.

    The window spans the original surgery day plus/minus the lead time scaled
    by ``alpha``, clipped so it never starts on or before the arrival day.
    Fractional scaled spans are truncated to whole days.
    """
    if admission_day < arrival_day:
        raise NegativeLead(
            f"admission {admission_day} precedes arrival {arrival_day}"
        )
    if original_surgery_day < arrival_day:
        raise ValueError(
            f"surgery day {original_surgery_day} precedes arrival {arrival_day}"
        )
    alpha = Decimal(str(alpha))
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    lead = (admission_day - arrival_day).days
    span = timedelta(days=int(alpha * lead))
    start = max(arrival_day + ONE_DAY, original_surgery_day - span)
    end = original_surgery_day + span
    # start > end is only possible for a same-day request (lead 0); the
    # DateWindow constructor rejects it, signalling "no room to reschedule".
    return DateWindow(start, end)


def infer_surgeon_availability(
    procedures: Iterable[ProcedureRow],
    threshold_hours: Decimal | float = DEFAULT_AVAILABILITY_THRESHOLD_HOURS,
    block_hours: Decimal | float = DEFAULT_BLOCK_HOURS,
) -> list[SurgeonAvailabilityRow]:
    """Assume a full block for each (day, surgeon) whose recorded in-room
    hours strictly exceed the threshold; emit nothing otherwise."""
    threshold = hours(threshold_hours)
    block = hours(block_hours)
    totals: dict[tuple[Day, str], Decimal] = {}
    services: dict[tuple[Day, str], set[str]] = {}
    for row in procedures:
        key = (row.patient_in_room.date(), row.primary_surgeon_id)
        totals[key] = totals.get(key, Decimal(0)) + timedelta_hours(
            row.patient_out_of_room - row.patient_in_room
        )
        if row.service:
            services.setdefault(key, set()).add(row.service)
    out = []
    for key in sorted(totals):
        if totals[key] > threshold:
            day, surgeon = key
            service = min(services.get(key, {""}))
            out.append(
                SurgeonAvailabilityRow(
                    date=day,
                    primary_surgeon_id=surgeon,
                    service=service,
                    available_hours=block,
                )
            )
    return out


# --------------------------------------------------------------------------
# Profile building
# --------------------------------------------------------------------------


@dataclass
class CleaningReport:
    """Per-reason tallies of excluded patients; every input patient lands in
    exactly one bucket (included or one exclusion reason)."""

    input_patients: int = 0
    included: int = 0
    duplicate_census: int = 0
    inconsecutive_census: int = 0
    overnight_surgery: int = 0
    missing_or_times: int = 0
    pre_warmup: int = 0
    out_of_scope: int = 0
    rejected_rows: int = 0

    def excluded_total(self) -> int:
        return (
            self.duplicate_census
            + self.inconsecutive_census
            + self.overnight_surgery
            + self.missing_or_times
            + self.pre_warmup
            + self.out_of_scope
        )

    def accounted(self) -> bool:
        return self.input_patients == self.included + self.excluded_total()

    def to_json_dict(self) -> dict:
        return asdict(self)


def _census_runs(
    census: list[CensusRow], stints: list[ProcedureRow]
) -> list[tuple[datetime, str, timedelta]]:
    """Split a patient's census nights into (start, unit, length) runs.

    A run breaks when the unit changes or an operating-room stint falls
    between two nights. Census effective times are assumed to be end-of-day
    midnight snapshots, so a stint during the day sorts before that night.
    """
    stint_times = sorted(p.patient_in_room for p in stints)
    runs: list[tuple[datetime, str, timedelta]] = []
    current: list[CensusRow] = []

    def flush() -> None:
        if current:
            runs.append(
                (current[0].effective_datetime, current[0].dept, timedelta(days=len(current)))
            )
            current.clear()

    for row in sorted(census, key=lambda r: r.effective_datetime):
        if current:
            prev = current[-1]
            stint_between = any(
                prev.effective_datetime < t < row.effective_datetime for t in stint_times
            )
            if row.dept != prev.dept or stint_between or (
                row.effective_datetime.date() != prev.effective_datetime.date() + ONE_DAY
            ):
                flush()
        current.append(row)
    flush()
    return runs


def _build_one(
    csn: str,
    census: list[CensusRow],
    procedures: list[ProcedureRow],
    alpha: Decimal,
) -> PatientProfile:
    procedures = sorted(procedures, key=lambda p: p.patient_in_room)
    if procedures:
        arrival = min(p.scheduled_on for p in procedures)
        raw_class = procedures[0].patient_class
        patient_class = _CLASS_MAP.get(raw_class or "", PatientClass.SURGICAL_INPATIENT)
        surgeon = procedures[0].primary_surgeon_id
    else:
        arrival = min(r.admission_datetime for r in census)
        raw_class = None
        patient_class = PatientClass.MEDICAL_INPATIENT
        surgeon = None
    if census:
        admission = min(r.admission_datetime for r in census)
    else:
        admission = procedures[0].patient_in_room

    segments: list[tuple[datetime, str, timedelta, datetime | None]] = []
    for start, unit, los in _census_runs(census, procedures):
        segments.append((start, unit, los, None))
    for p in procedures:
        segments.append(
            (p.patient_in_room, p.location, p.patient_out_of_room - p.patient_in_room, p.patient_in_room)
        )
    segments.sort(key=lambda s: s[0])

    unit_list = [s[1] for s in segments]
    los_list = [s[2] for s in segments]
    or_indices = [i for i, s in enumerate(segments) if s[3] is not None]
    in_or_times = [segments[i][3] for i in or_indices]  # type: ignore[misc]

    if in_or_times:
        d0 = in_or_times[0].date()
        d1, d2 = arrival.date(), admission.date()
        try:
            window = available_window(d1, d0, d2, alpha)
        except (NegativeLead, ValueError):
            # Inconsistent or zero-lead dates leave no room to reschedule;
            # keep a degenerate window on the recorded surgery day.
            window = DateWindow(d0, d0)
    else:
        d2 = admission.date()
        window = DateWindow(d2, d2)

    return PatientProfile(
        primary_csn=csn,
        patient_class=patient_class,
        arrival_time=arrival,
        admission_time=admission,
        available_window=window,
        unit_list=unit_list,
        los_list=los_list,
        in_or_times=list(in_or_times),
        primary_surgeon_id=surgeon,
        or_indices=or_indices,
        raw_class=raw_class,
    )


def build_profiles(
    census: Iterable[CensusRow],
    procedures: Iterable[ProcedureRow],
    warmup_start: Day,
    sim_start: Day,
    scope_units: frozenset[str] | set[str] = DEFAULT_SCOPE_UNITS,
    alpha: Decimal | float = DEFAULT_ALPHA,
) -> tuple[list[PatientProfile], CleaningReport]:
    """Join census and procedure rows per patient and reconstruct profiles.

    Excluded patients are tallied by reason, never silently dropped; census
    rows outside the unit scope are ignored (operating-room locations arrive
    via the procedure table and are always in scope).
    """
    if warmup_start > sim_start:
        raise ValueError("warmup_start must not be after sim_start")
    alpha = Decimal(str(alpha))

    raw_census_by_csn: dict[str, list[CensusRow]] = {}
    all_csns: set[str] = set()
    for row in census:
        all_csns.add(row.primary_csn)
        raw_census_by_csn.setdefault(row.primary_csn, []).append(row)
    procs_by_csn: dict[str, list[ProcedureRow]] = {}
    for row in procedures:
        all_csns.add(row.primary_csn)
        procs_by_csn.setdefault(row.primary_csn, []).append(row)

    report = CleaningReport(input_patients=len(all_csns))
    profiles: list[PatientProfile] = []

    for csn in sorted(all_csns):
        # Cleanliness checks look at the full census so a stay that merely
        # passes through an out-of-scope unit is not mistaken for dirty data;
        # the trajectory itself is built from the in-scope rows only.
        raw_rows = raw_census_by_csn.get(csn, [])
        c_rows = [r for r in raw_rows if r.dept in scope_units]
        p_rows = procs_by_csn.get(csn, [])
        if not c_rows and not p_rows:
            report.out_of_scope += 1
            continue
        dates = sorted(r.effective_datetime.date() for r in raw_rows)
        if len(dates) != len(set(dates)):
            report.duplicate_census += 1
            continue
        if dates and (dates[-1] - dates[0]).days + 1 != len(dates):
            report.inconsecutive_census += 1
            continue
        if any(p.patient_in_room is None or p.patient_out_of_room is None for p in p_rows):
            report.missing_or_times += 1
            continue
        if any(p.patient_in_room.date() != p.patient_out_of_room.date() for p in p_rows):
            report.overnight_surgery += 1
            continue
        profile = _build_one(csn, c_rows, p_rows, alpha)
        if profile.arrival_time.date() < warmup_start:
            report.pre_warmup += 1
            continue
        report.included += 1
        profiles.append(profile)

    profiles.sort(key=lambda p: (p.arrival_time, p.primary_csn))
    return profiles, report


def initial_schedule_state(
    profiles: Iterable[PatientProfile],
    availability: Iterable[SurgeonAvailabilityRow] = (),
) -> ScheduleState:
    """Seed a live ledger: availability hours plus one scheduled admission per
    elective surgical profile on its recorded admission day."""
    state = ScheduleState()
    for row in availability:
        state.add_surgeon_hours(row.date, row.primary_surgeon_id, row.available_hours)
    for profile in profiles:
        day = profile.scheduled_admission_day()
        unit = profile.first_postop_unit()
        if day is not None and unit is not None and classify_elective(profile):
            state.count_admission(day, unit)
    return state


# --------------------------------------------------------------------------
# Persistence
# --------------------------------------------------------------------------


def profile_to_json_dict(profile: PatientProfile) -> dict:
    return {
        "primary_csn": profile.primary_csn,
        "patient_class": profile.patient_class.value,
        "arrival_time": profile.arrival_time.isoformat(),
        "admission_time": profile.admission_time.isoformat(),
        "available_window": {
            "start": profile.available_window.start.isoformat(),
            "end": profile.available_window.end.isoformat(),
        },
        "unit_list": list(profile.unit_list),
        "los_list": [delta.total_seconds() for delta in profile.los_list],
        "in_or_times": [t.isoformat() for t in profile.in_or_times],
        "primary_surgeon_id": profile.primary_surgeon_id,
        "or_indices": list(profile.or_indices),
        "raw_class": profile.raw_class,
    }


def profile_from_json_dict(payload: Mapping) -> PatientProfile:
    window = payload["available_window"]
    return PatientProfile(
        primary_csn=str(payload["primary_csn"]),
        patient_class=PatientClass(payload["patient_class"]),
        arrival_time=datetime.fromisoformat(payload["arrival_time"]),
        admission_time=datetime.fromisoformat(payload["admission_time"]),
        available_window=DateWindow(
            date.fromisoformat(window["start"]), date.fromisoformat(window["end"])
        ),
        unit_list=[str(u) for u in payload["unit_list"]],
        los_list=[timedelta(seconds=s) for s in payload["los_list"]],
        in_or_times=[datetime.fromisoformat(t) for t in payload["in_or_times"]],
        primary_surgeon_id=payload.get("primary_surgeon_id"),
        or_indices=[int(i) for i in payload.get("or_indices", [])],
        raw_class=payload.get("raw_class"),
    )


def write_profiles(path: Path | str, profiles: Iterable[PatientProfile]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for profile in profiles:
            fh.write(json.dumps(profile_to_json_dict(profile)) + "\n")


def read_profiles(path: Path | str) -> list[PatientProfile]:
    profiles = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                profiles.append(profile_from_json_dict(json.loads(line)))
    return profiles


def write_availability_csv(path: Path | str, rows: Iterable[SurgeonAvailabilityRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(AVAILABILITY_REQUIRED)
        for row in rows:
            writer.writerow(
                [row.date.isoformat(), row.primary_surgeon_id, row.service, f"{row.available_hours}"]
            )
