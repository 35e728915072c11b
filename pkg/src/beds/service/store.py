"""Durable, serialized booking store behind the HTTP service.

One logical writer: bookings are validated, appended to the on-disk journal
(fsync'd) and only then applied to the in-memory ledger, so an acknowledged
booking always survives a crash. A snapshot is written every N bookings and
the journal is truncated only after the snapshot is safely on disk; recovery
is snapshot + journal replay.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence

from ..core import (
    Booking,
    CaseRequest,
    DateWindow,
    Day,
    DayNotFeasible,
    ScheduleState,
    read_journal,
    replay_journal,
)
from ..engine import (
    DEFAULT_THRESHOLDS,
    HeatmapCell,
    Recommendation,
    book_request,
    get_policy,
    heatmap,
    recommend_topn,
)


@dataclass
class ServiceConfig:
    journal_path: Path
    snapshot_path: Path
    host: str = "127.0.0.1"
    port: int = 8000
    thresholds: tuple[int, ...] = DEFAULT_THRESHOLDS
    default_top_n: int = 3
    horizon_cap: int = 365
    snapshot_every: int = 1000
    policy: str = "fewest-admissions"
    static_dir: Path | None = None

    def __post_init__(self) -> None:
        self.journal_path = Path(self.journal_path)
        self.snapshot_path = Path(self.snapshot_path)
        if self.static_dir is not None:
            self.static_dir = Path(self.static_dir)
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")
        if self.default_top_n < 1:
            raise ValueError("default_top_n must be at least 1")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be at least 1")


class ScheduleStore:
    """Holds the live ledger plus its journal/snapshot files."""

    def __init__(self, config: ServiceConfig, initial_state: ScheduleState | None = None):
        self.config = config
        self._lock = threading.Lock()
        self._journal_fh: IO[str] | None = None
        self._since_snapshot = 0
        self.state = self._recover(initial_state)
        self._open_journal()

    def _recover(self, initial_state: ScheduleState | None) -> ScheduleState:
        if self.config.snapshot_path.exists():
            with open(self.config.snapshot_path, "r", encoding="utf-8") as fh:
                base = ScheduleState.from_snapshot_dict(json.load(fh))
        elif initial_state is not None:
            base = initial_state.copy()
        else:
            base = ScheduleState()
        if self.config.journal_path.exists():
            return replay_journal(read_journal(self.config.journal_path), base)
        return base

    def _open_journal(self) -> None:
        self.config.journal_path.parent.mkdir(parents=True, exist_ok=True)
        self._journal_fh = open(self.config.journal_path, "a", encoding="utf-8")

    def close(self) -> None:
        if self._journal_fh is not None:
            self._journal_fh.close()
            self._journal_fh = None

    @property
    def version(self) -> int:
        """Journal sequence number identifying the current state."""
        return self.state.sequence

    # -- reads (shared lock keeps iteration safe against the writer) -------

    def heatmap_cells(self, unit: str, surgeon: str, window: DateWindow) -> list[HeatmapCell]:
        with self._lock:
            return heatmap(self.state, unit, surgeon, window, self.config.thresholds)

    def recommend(self, request: CaseRequest, n: int | None = None) -> Recommendation:
        with self._lock:
            return recommend_topn(
                self.state,
                request,
                policy=get_policy(self.config.policy),
                n=n or self.config.default_top_n,
                thresholds=self.config.thresholds,
            )

    def summary(self) -> dict:
        with self._lock:
            return {
                "version": self.version,
                "unit_admissions": self.state.unit_admissions_items(),
                "surgeon_hours": self.state.surgeon_hours_items(),
            }

    # -- the single writer --------------------------------------------------

    def book(self, request: CaseRequest, day: Day) -> Booking:
        """Validate, persist, then apply one booking atomically."""
        with self._lock:
            probe = self.state.copy()
            booking = book_request(probe, request, day)
            self._append(booking)
            self.state.apply_booking(booking)
            self._since_snapshot += 1
            if self._since_snapshot >= self.config.snapshot_every:
                self._write_snapshot()
            return booking

    def _append(self, booking: Booking) -> None:
        assert self._journal_fh is not None
        self._journal_fh.write(json.dumps(booking.to_json_dict()) + "\n")
        self._journal_fh.flush()
        os.fsync(self._journal_fh.fileno())

    def _write_snapshot(self) -> None:
        tmp = self.config.snapshot_path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(self.state.snapshot_dict(), fh)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.config.snapshot_path)
        # Journal entries are now baked into the snapshot; start a new file.
        self.close()
        self._journal_fh = open(self.config.journal_path, "w", encoding="utf-8")
        self._journal_fh.flush()
        os.fsync(self._journal_fh.fileno())
        self._since_snapshot = 0
