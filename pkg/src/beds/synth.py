"""Synthetic census/procedure/availability generation.

Produces populations with the texture the scheduler cares about: elective
inpatients whose surgery dates cluster on busy weekdays (so there is
variance to level), outpatient cases, and medical admissions that flow
through the units without ever touching the scheduler. Output is
deterministic for a fixed seed and round-trips through ingestion with zero
cleaning exclusions.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta
from decimal import Decimal
from pathlib import Path
from typing import Mapping, Sequence

from .core import Day, ONE_DAY
from .ingest import (
    AVAILABILITY_REQUIRED,
    CENSUS_OPTIONAL,
    CENSUS_REQUIRED,
    PROCEDURE_OPTIONAL,
    PROCEDURE_REQUIRED,
    CensusRow,
    ProcedureRow,
    SurgeonAvailabilityRow,
)

WEEKDAYS = 5


@dataclass(frozen=True)
class SynthConfig:
    start: Day = date(2019, 1, 1)
    horizon_days: int = 365
    #: Expected elective inpatients per calendar day, per post-op unit.
    unit_rates: Mapping[str, float] = field(
        default_factory=lambda: {"PICUs": 2.0, "PCUs": 4.0}
    )
    #: Expected outpatient cases per calendar day (no post-op bed).
    outpatient_rate: float = 1.0
    #: Expected medical (non-surgical) admissions per calendar day.
    medical_rate: float = 0.5
    #: Relative demand Monday..Friday; weekends get none. Normalized so the
    #: weekly total matches 7x the daily rate.
    weekday_shape: Sequence[float] = (1.8, 1.3, 1.0, 0.6, 0.3)
    #: Days between scheduling request and surgery: geometric, clipped.
    lead_mean_days: float = 10.0
    lead_max_days: int = 45
    #: Lognormal post-op stay in days per unit: (mu, sigma) of log(days).
    los_params: Mapping[str, tuple[float, float]] = field(
        default_factory=lambda: {"PICUs": (0.8, 0.5), "PCUs": (0.6, 0.5)}
    )
    max_los_days: int = 10
    #: Lognormal surgery duration in hours: (mu, sigma) of log(hours).
    duration_params: tuple[float, float] = (0.5, 0.35)
    surgeon_count: int = 14
    block_days_per_surgeon: int = 2
    #: Weekday attractiveness for block assignment Monday..Friday.
    block_weights: Sequence[float] = (0.3, 0.25, 0.2, 0.15, 0.1)
    block_hours: float = 7.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.horizon_days < 1:
            raise ValueError("horizon must be at least one day")
        if any(r < 0 for r in self.unit_rates.values()) or self.outpatient_rate < 0:
            raise ValueError("rates must be nonnegative")
        if self.medical_rate < 0:
            raise ValueError("rates must be nonnegative")


@dataclass
class SynthData:
    census: list[CensusRow]
    procedures: list[ProcedureRow]
    availability: list[SurgeonAvailabilityRow]


def _poisson(rng: random.Random, lam: float) -> int:
    if lam <= 0:
        return 0
    threshold = math.exp(-lam)
    k = 0
    p = rng.random()
    while p > threshold:
        k += 1
        p *= rng.random()
    return k


def _geometric(rng: random.Random, mean: float, lo: int, hi: int) -> int:
    p = min(1.0, 1.0 / max(mean, 1.0))
    u = rng.random()
    k = 1 + int(math.log(1 - u) / math.log(1 - p)) if p < 1 else 1
    return max(lo, min(hi, k))


def _weekday_factors(shape: Sequence[float]) -> list[float]:
    # Weekly demand totals 7x the daily rate, spent on weekdays only.
    total = sum(shape)
    return [s * 7.0 / total for s in shape]


class _Generator:
    def __init__(self, config: SynthConfig):
        self.config = config
        self.rng = random.Random(config.seed)
        self.csn = 0
        self.census: list[CensusRow] = []
        self.procedures: list[ProcedureRow] = []
        self.blocks = self._assign_blocks()

    def _assign_blocks(self) -> dict[str, set[int]]:
        cfg = self.config
        surgeons = [f"S{i:02d}" for i in range(1, cfg.surgeon_count + 1)]
        blocks: dict[str, set[int]] = {}
        weekdays = list(range(WEEKDAYS))
        for surgeon in surgeons:
            chosen: set[int] = set()
            while len(chosen) < min(cfg.block_days_per_surgeon, WEEKDAYS):
                chosen.add(self.rng.choices(weekdays, weights=cfg.block_weights)[0])
            blocks[surgeon] = chosen
        # Every weekday needs at least one surgeon, or that day's demand
        # could not have happened historically.
        for wd in weekdays:
            if not any(wd in b for b in blocks.values()):
                blocks[self.rng.choice(surgeons)].add(wd)
        return blocks

    def _next_csn(self) -> str:
        self.csn += 1
        return f"P{self.csn:06d}"

    def _surgeons_on(self, weekday: int) -> list[str]:
        return sorted(s for s, b in self.blocks.items() if weekday in b)

    def _surgery(self, csn: str, day: Day, patient_class: str) -> ProcedureRow:
        cfg, rng = self.config, self.rng
        surgeon = rng.choice(self._surgeons_on(day.weekday()))
        start_minute = rng.randrange(7 * 60 + 30, 15 * 60)
        in_room = datetime.combine(day, time(start_minute // 60, start_minute % 60))
        duration_h = min(4.0, max(0.5, rng.lognormvariate(*cfg.duration_params)))
        out_of_room = in_room + timedelta(minutes=round(duration_h * 60))
        lead = _geometric(rng, cfg.lead_mean_days, 1, cfg.lead_max_days)
        scheduled_on = datetime.combine(
            day - timedelta(days=lead), time(8 + rng.randrange(0, 9), rng.randrange(0, 60))
        )
        return ProcedureRow(
            primary_csn=csn,
            primary_surgeon_id=surgeon,
            location="MAIN OR",
            scheduled_on=scheduled_on,
            scheduled_for=in_room,
            patient_in_room=in_room,
            patient_out_of_room=out_of_room,
            patient_class=patient_class,
            service="Surgery",
        )

    def _census_stay(self, csn: str, unit: str, first_night: Day, nights: int, admitted: datetime) -> None:
        discharge = datetime.combine(first_night + timedelta(days=nights), time(11, 0))
        for i in range(nights):
            night = first_night + timedelta(days=i)
            self.census.append(
                CensusRow(
                    primary_csn=csn,
                    dept=unit,
                    effective_datetime=datetime.combine(night, time(23, 59)),
                    admission_datetime=admitted,
                    discharge_datetime=discharge,
                    service="Surgery" if unit != "MEDS" else "General Pediatrics",
                    admit_type="Elective",
                )
            )

    def _inpatient(self, unit: str, day: Day) -> None:
        cfg, rng = self.config, self.rng
        csn = self._next_csn()
        surgery = self._surgery(csn, day, "Surgery Admit")
        self.procedures.append(surgery)
        mu, sigma = cfg.los_params.get(unit, (0.7, 0.5))
        nights = max(1, min(cfg.max_los_days, round(rng.lognormvariate(mu, sigma))))
        admitted = surgery.patient_in_room - timedelta(minutes=90)
        self._census_stay(csn, unit, day, nights, admitted)

    def _outpatient(self, day: Day) -> None:
        self.procedures.append(self._surgery(self._next_csn(), day, "Outpatient Surgery"))

    def _medical(self, day: Day) -> None:
        cfg, rng = self.config, self.rng
        csn = self._next_csn()
        unit = sorted(cfg.unit_rates)[rng.randrange(len(cfg.unit_rates))]
        nights = max(1, min(cfg.max_los_days, round(rng.lognormvariate(1.0, 0.6))))
        admitted = datetime.combine(day, time(10, rng.randrange(0, 60)))
        self._census_stay(csn, unit, day, nights, admitted)

    def _availability(self) -> list[SurgeonAvailabilityRow]:
        cfg = self.config
        first = cfg.start - timedelta(days=cfg.lead_max_days + 7)
        last = cfg.start + timedelta(days=cfg.horizon_days + cfg.lead_max_days + 7)
        rows = []
        day = first
        while day <= last:
            if day.weekday() < WEEKDAYS:
                for surgeon in self._surgeons_on(day.weekday()):
                    rows.append(
                        SurgeonAvailabilityRow(
                            date=day,
                            primary_surgeon_id=surgeon,
                            service="Surgery",
                            available_hours=Decimal(str(cfg.block_hours)),
                        )
                    )
            day += ONE_DAY
        return rows

    def generate(self) -> SynthData:
        cfg = self.config
        factors = _weekday_factors(cfg.weekday_shape)
        for offset in range(cfg.horizon_days):
            day = cfg.start + timedelta(days=offset)
            wd = day.weekday()
            if wd < WEEKDAYS:
                factor = factors[wd]
                for unit in sorted(cfg.unit_rates):
                    for _ in range(_poisson(self.rng, cfg.unit_rates[unit] * factor)):
                        self._inpatient(unit, day)
                for _ in range(_poisson(self.rng, cfg.outpatient_rate * factor)):
                    self._outpatient(day)
            for _ in range(_poisson(self.rng, cfg.medical_rate)):
                self._medical(day)
        return SynthData(
            census=self.census,
            procedures=self.procedures,
            availability=self._availability(),
        )


def generate(config: SynthConfig) -> SynthData:
    return _Generator(config).generate()


# --------------------------------------------------------------------------
# CSV output in the ingestion schema
# --------------------------------------------------------------------------


def _fmt(ts: datetime | None) -> str:
    return ts.isoformat(sep=" ") if ts else ""


def write_csvs(data: SynthData, out_dir: Path | str) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "census": out_dir / "census.csv",
        "procedures": out_dir / "procedures.csv",
        "availability": out_dir / "availability.csv",
    }
    with open(paths["census"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CENSUS_REQUIRED + CENSUS_OPTIONAL)
        for r in data.census:
            writer.writerow(
                [
                    r.primary_csn,
                    r.dept,
                    _fmt(r.effective_datetime),
                    _fmt(r.admission_datetime),
                    _fmt(r.discharge_datetime),
                    r.service or "",
                    r.admit_type or "",
                    r.admit_source or "",
                ]
            )
    with open(paths["procedures"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PROCEDURE_REQUIRED + PROCEDURE_OPTIONAL)
        for r in data.procedures:
            writer.writerow(
                [
                    r.primary_csn,
                    r.primary_surgeon_id,
                    r.location,
                    _fmt(r.scheduled_on),
                    _fmt(r.scheduled_for),
                    _fmt(r.patient_in_room),
                    _fmt(r.patient_out_of_room),
                    r.patient_class or "",
                    r.service or "",
                    r.procedure_id or "",
                ]
            )
    with open(paths["availability"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(AVAILABILITY_REQUIRED)
        for r in data.availability:
            writer.writerow(
                [r.date.isoformat(), r.primary_surgeon_id, r.service, f"{r.available_hours}"]
            )
    return paths
