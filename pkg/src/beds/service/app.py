"""HTTP surface of the scheduling service.

Endpoints: GET /heatmap, POST /recommend, POST /book, GET /state. Engine
errors map to {code, message} bodies with 4xx statuses; booking conflicts
(the state moved between recommendation and booking) surface as 409 so the
client re-recommends.
"""

from __future__ import annotations

from datetime import date, timedelta

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..core import (
    DateWindow,
    DayNotFeasible,
    InsufficientHours,
    NoFeasibleDay,
    SchedulingError,
)
from .schemas import (
    BookBody,
    BookingReceipt,
    DayCellModel,
    HeatmapResponse,
    RecommendBody,
    RecommendationResponse,
    StateSummaryResponse,
    SurgeonDayHours,
    UnitDayCount,
)
from .store import ScheduleStore, ServiceConfig

#: Default heatmap span around the reference date: two weeks back, a month out.
DEFAULT_RANGE_BEFORE = timedelta(days=14)
DEFAULT_RANGE_AFTER = timedelta(days=30)

_ERROR_CODES = {
    NoFeasibleDay: ("NO_FEASIBLE_DAY", 409),
    DayNotFeasible: ("DAY_NOT_FEASIBLE", 409),
    InsufficientHours: ("INSUFFICIENT_HOURS", 409),
}


class ValidationFailure(ValueError):
    pass


def create_app(config: ServiceConfig, store: ScheduleStore | None = None) -> FastAPI:
    store = store or ScheduleStore(config)
    app = FastAPI(title="Surgical admission level-loading service")
    app.state.store = store

    @app.exception_handler(SchedulingError)
    async def scheduling_error(_: Request, exc: SchedulingError) -> JSONResponse:
        code, status = _ERROR_CODES.get(type(exc), ("CONFLICT", 409))
        return JSONResponse(status_code=status, content={"code": code, "message": str(exc)})

    @app.exception_handler(ValidationFailure)
    async def validation_failure(_: Request, exc: ValidationFailure) -> JSONResponse:
        return JSONResponse(status_code=400, content={"code": "VALIDATION", "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def body_validation(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=422, content={"code": "VALIDATION", "message": str(exc.errors())}
        )

    @app.get("/heatmap", response_model=HeatmapResponse)
    def get_heatmap(
        unit: str,
        surgeon: str,
        start: date | None = Query(default=None),
        end: date | None = Query(default=None),
        reference: date | None = Query(default=None),
    ) -> HeatmapResponse:
        if start is None or end is None:
            anchor = reference or date.today()
            start = start or anchor - DEFAULT_RANGE_BEFORE
            end = end or anchor + DEFAULT_RANGE_AFTER
        if start > end:
            raise ValidationFailure(f"start {start} is after end {end}")
        if (end - start).days + 1 > store.config.horizon_cap:
            raise ValidationFailure(
                f"range exceeds the {store.config.horizon_cap}-day horizon cap"
            )
        cells = store.heatmap_cells(unit, surgeon, DateWindow(start, end))
        return HeatmapResponse(
            unit=unit,
            surgeon=surgeon,
            start=start,
            end=end,
            thresholds=list(store.config.thresholds),
            version=store.version,
            cells=[DayCellModel.from_cell(c) for c in cells],
        )

    @app.post("/recommend", response_model=RecommendationResponse)
    def post_recommend(body: RecommendBody) -> RecommendationResponse:
        recommendation = store.recommend(body.to_domain(), body.n)
        return RecommendationResponse.from_domain(recommendation, store.version)

    @app.post("/book", response_model=BookingReceipt)
    def post_book(body: BookBody) -> BookingReceipt:
        booking = store.book(body.to_domain(), body.day)
        return BookingReceipt(
            patient_id=booking.patient_id,
            surgeon_id=booking.surgeon_id,
            unit_id=booking.unit_id,
            day=booking.day,
            duration_hours=float(booking.duration_hours),
            sequence_number=booking.sequence_number,
            booked_at=booking.booked_at,
        )

    @app.get("/state", response_model=StateSummaryResponse)
    def get_state() -> StateSummaryResponse:
        summary = store.summary()
        return StateSummaryResponse(
            version=summary["version"],
            unit_admissions=[
                UnitDayCount(day=d, unit=u, count=n) for d, u, n in summary["unit_admissions"]
            ],
            surgeon_hours=[
                SurgeonDayHours(day=d, surgeon=s, hours=float(h))
                for d, s, h in summary["surgeon_hours"]
            ],
        )

    if config.static_dir and config.static_dir.exists():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
