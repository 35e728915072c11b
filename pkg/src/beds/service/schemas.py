"""Pydantic wire models for the scheduling service.

Field names are the snake_case domain field names; dates travel as ISO day
strings and hour quantities as JSON numbers.
"""

from __future__ import annotations

from datetime import date, datetime
from decimal import Decimal

from pydantic import BaseModel, Field, field_validator, model_validator

from ..core import CaseRequest, DateWindow
from ..engine import DayAnnotation, HeatmapCell, Recommendation


class WindowModel(BaseModel):
    start: date
    end: date

    @model_validator(mode="after")
    def _ordered(self) -> "WindowModel":
        if self.start > self.end:
            raise ValueError("window start must not be after end")
        return self

    def to_domain(self) -> DateWindow:
        return DateWindow(self.start, self.end)


class CaseRequestModel(BaseModel):
    patient_id: str = Field(min_length=1)
    surgeon_id: str = Field(min_length=1)
    duration_hours: Decimal = Field(gt=0)
    clinical_window: WindowModel
    patient_window: WindowModel
    post_op_unit: str = Field(min_length=1)
    extras: dict[str, str] = Field(default_factory=dict)

    def to_domain(self) -> CaseRequest:
        return CaseRequest(
            patient_id=self.patient_id,
            surgeon_id=self.surgeon_id,
            duration_hours=self.duration_hours,
            clinical_window=self.clinical_window.to_domain(),
            patient_window=self.patient_window.to_domain(),
            post_op_unit=self.post_op_unit,
            extras=dict(self.extras),
        )


class RecommendBody(CaseRequestModel):
    n: int | None = Field(default=None, ge=1)


class BookBody(CaseRequestModel):
    day: date


class DayCellModel(BaseModel):
    day: date
    admissions: int
    remaining_hours: float
    bucket: int

    @classmethod
    def from_cell(cls, cell: HeatmapCell | DayAnnotation) -> "DayCellModel":
        return cls(
            day=cell.day,
            admissions=cell.admissions,
            remaining_hours=float(cell.remaining_hours),
            bucket=cell.bucket,
        )


class HeatmapResponse(BaseModel):
    unit: str
    surgeon: str
    start: date
    end: date
    thresholds: list[int]
    version: int
    cells: list[DayCellModel]


class RecommendationResponse(BaseModel):
    ranked_days: list[date]
    annotations: list[DayCellModel]
    policy: str
    version: int

    @classmethod
    def from_domain(cls, rec: Recommendation, version: int) -> "RecommendationResponse":
        return cls(
            ranked_days=list(rec.ranked_days),
            annotations=[DayCellModel.from_cell(a) for a in rec.annotations],
            policy=rec.policy,
            version=version,
        )


class BookingReceipt(BaseModel):
    patient_id: str
    surgeon_id: str
    unit_id: str
    day: date
    duration_hours: float
    sequence_number: int
    booked_at: datetime


class UnitDayCount(BaseModel):
    day: date
    unit: str
    count: int


class SurgeonDayHours(BaseModel):
    day: date
    surgeon: str
    hours: float


class StateSummaryResponse(BaseModel):
    version: int
    unit_admissions: list[UnitDayCount]
    surgeon_hours: list[SurgeonDayHours]


class ErrorBody(BaseModel):
    code: str
    message: str
