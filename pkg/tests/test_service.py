"""HTTP endpoints, serialization of bookings, durability, conflict handling."""

import threading
from datetime import date, timedelta
from decimal import Decimal

import pytest
from fastapi.testclient import TestClient

from beds.core import (
    CaseRequest,
    DateWindow,
    DayNotFeasible,
    ScheduleState,
    hours,
    read_journal,
)
from beds.service import ScheduleStore, ServiceConfig, create_app

D = date
MON = D(2019, 4, 1)


def seeded_state(days=5, surgeon="S1", per_day="7.0"):
    state = ScheduleState()
    for i in range(days):
        state.set_surgeon_hours(MON + timedelta(days=i), surgeon, per_day)
    return state


def make_config(tmp_path, **kw):
    return ServiceConfig(
        journal_path=tmp_path / "journal.ndjson",
        snapshot_path=tmp_path / "snapshot.json",
        **kw,
    )


def request_body(duration=2.5, n=None, day=None, patient="P1", surgeon="S1", unit="PICUs"):
    body = {
        "patient_id": patient,
        "surgeon_id": surgeon,
        "duration_hours": duration,
        "clinical_window": {"start": MON.isoformat(), "end": (MON + timedelta(days=4)).isoformat()},
        "patient_window": {"start": MON.isoformat(), "end": (MON + timedelta(days=4)).isoformat()},
        "post_op_unit": unit,
    }
    if n is not None:
        body["n"] = n
    if day is not None:
        body["day"] = day
    return body


@pytest.fixture
def client(tmp_path):
    config = make_config(tmp_path)
    app = create_app(config, ScheduleStore(config, initial_state=seeded_state()))
    with TestClient(app) as c:
        yield c


class TestHeatmapEndpoint:
    def test_fresh_state_seven_cells(self, client):
        resp = client.get(
            "/heatmap",
            params={"unit": "PICUs", "surgeon": "S1", "start": MON.isoformat(),
                    "end": (MON + timedelta(days=6)).isoformat()},
        )
        assert resp.status_code == 200
        payload = resp.json()
        assert len(payload["cells"]) == 7
        assert all(c["admissions"] == 0 and c["bucket"] == 0 for c in payload["cells"])
        assert payload["thresholds"] == [2, 4, 6]
        assert payload["cells"][0]["remaining_hours"] == 7.0

    def test_default_range_spans_six_plus_weeks(self, client):
        resp = client.get(
            "/heatmap",
            params={"unit": "PICUs", "surgeon": "S1", "reference": MON.isoformat()},
        )
        payload = resp.json()
        assert payload["start"] == (MON - timedelta(days=14)).isoformat()
        assert payload["end"] == (MON + timedelta(days=30)).isoformat()
        assert len(payload["cells"]) == 45

    def test_bad_range_is_validation_error(self, client):
        resp = client.get(
            "/heatmap",
            params={"unit": "PICUs", "surgeon": "S1",
                    "start": "2019-04-09", "end": "2019-04-01"},
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "VALIDATION"

    def test_booked_day_lands_in_top_bucket(self, client):
        for i in range(6):
            resp = client.post("/book", json=request_body(duration=1.0, day=MON.isoformat(),
                                                          patient=f"P{i}"))
            assert resp.status_code == 200
        resp = client.get(
            "/heatmap",
            params={"unit": "PICUs", "surgeon": "S1", "start": MON.isoformat(),
                    "end": MON.isoformat()},
        )
        cell = resp.json()["cells"][0]
        assert cell["admissions"] == 6 and cell["bucket"] == 3


class TestRecommendEndpoint:
    def test_n1_is_greedy_day(self, client):
        resp = client.post("/recommend", json=request_body(n=1))
        assert resp.status_code == 200
        assert resp.json()["ranked_days"] == [MON.isoformat()]

    def test_read_only_and_repeatable(self, client):
        first = client.post("/recommend", json=request_body(n=3)).json()
        second = client.post("/recommend", json=request_body(n=3)).json()
        assert first == second
        assert client.get("/state").json()["version"] == 0

    def test_recommend_book_recommend_sees_update(self, client):
        first = client.post("/recommend", json=request_body(n=1)).json()
        day = first["ranked_days"][0]
        client.post("/book", json=request_body(day=day))
        after = client.post("/recommend", json=request_body(n=5, patient="P2")).json()
        counts = {a["day"]: a["admissions"] for a in after["annotations"]}
        assert counts[day] == 1
        assert after["version"] == 1

    def test_no_feasible_day(self, client):
        resp = client.post("/recommend", json=request_body(duration=20.0))
        assert resp.status_code == 409
        assert resp.json()["code"] == "NO_FEASIBLE_DAY"

    def test_validation_error_shape(self, client):
        body = request_body()
        body["duration_hours"] = -2
        resp = client.post("/recommend", json=body)
        assert resp.status_code == 422
        assert resp.json()["code"] == "VALIDATION"


class TestBookEndpoint:
    def test_receipt_and_journal_growth(self, client, tmp_path):
        resp = client.post("/book", json=request_body(day=MON.isoformat()))
        assert resp.status_code == 200
        receipt = resp.json()
        assert receipt["sequence_number"] == 1
        assert receipt["unit_id"] == "PICUs"
        journal = read_journal(tmp_path / "journal.ndjson")
        assert len(journal) == 1
        assert journal[0].day == MON

    def test_stale_booking_conflicts(self, client):
        day = (MON + timedelta(days=1)).isoformat()
        assert client.post("/book", json=request_body(duration=7.0, day=day)).status_code == 200
        resp = client.post("/book", json=request_body(duration=7.0, day=day, patient="P2"))
        assert resp.status_code == 409
        assert resp.json()["code"] == "DAY_NOT_FEASIBLE"

    def test_booking_day_outside_window_rejected(self, client):
        resp = client.post("/book", json=request_body(day="2019-12-25"))
        assert resp.status_code == 409


class TestStateEndpoint:
    def test_fresh_summary_contains_availability_only(self, client):
        payload = client.get("/state").json()
        assert payload["version"] == 0
        assert payload["unit_admissions"] == []
        assert len(payload["surgeon_hours"]) == 5

    def test_counts_conserved_after_k_bookings(self, client):
        for i in range(4):
            client.post("/book", json=request_body(duration=1.0, day=MON.isoformat(),
                                                    patient=f"P{i}"))
        payload = client.get("/state").json()
        assert sum(row["count"] for row in payload["unit_admissions"]) == 4
        assert payload["version"] == 4


class TestDurability:
    def test_restart_restores_ledger(self, tmp_path):
        config = make_config(tmp_path)
        store = ScheduleStore(config, initial_state=seeded_state())
        req = CaseRequest("P1", "S1", hours("2.5"),
                          DateWindow(MON, MON + timedelta(days=4)),
                          DateWindow(MON, MON + timedelta(days=4)), "PICUs")
        store.book(req, MON)
        store.book(CaseRequest("P2", "S1", hours("1.0"),
                               DateWindow(MON, MON), DateWindow(MON, MON), "PCUs"), MON)
        expected = store.state.copy()
        # No clean shutdown: a second store recovers from disk alone.
        revived = ScheduleStore(config, initial_state=seeded_state())
        assert revived.state.ledger_equal(expected)
        assert revived.version == 2

    def test_snapshot_truncates_journal_and_still_recovers(self, tmp_path):
        config = make_config(tmp_path, snapshot_every=2)
        store = ScheduleStore(config, initial_state=seeded_state())
        window = DateWindow(MON, MON + timedelta(days=4))
        for i in range(5):
            store.book(CaseRequest(f"P{i}", "S1", hours("1.0"), window, window, "PICUs"),
                       MON + timedelta(days=i % 5))
        assert config.snapshot_path.exists()
        # Journal holds only the entries after the last snapshot.
        assert len(read_journal(config.journal_path)) == 1
        revived = ScheduleStore(config)
        assert revived.state.ledger_equal(store.state)
        assert revived.version == 5

    def test_replay_equals_journal_fold(self, tmp_path):
        config = make_config(tmp_path)
        initial = seeded_state()
        store = ScheduleStore(config, initial_state=initial)
        window = DateWindow(MON, MON + timedelta(days=4))
        for i in range(3):
            store.book(CaseRequest(f"P{i}", "S1", hours("2.0"), window, window, "PCUs"),
                       MON + timedelta(days=i))
        from beds.core import replay_journal

        replayed = replay_journal(read_journal(config.journal_path), initial)
        assert replayed.ledger_equal(store.state)


class TestConcurrency:
    def test_race_for_last_slot_has_one_winner(self, tmp_path):
        config = make_config(tmp_path)
        state = ScheduleState()
        state.set_surgeon_hours(MON, "S1", "2.5")
        store = ScheduleStore(config, initial_state=state)
        window = DateWindow(MON, MON)
        outcomes = []

        def attempt(pid):
            req = CaseRequest(pid, "S1", hours("2.5"), window, window, "PICUs")
            try:
                store.book(req, MON)
                outcomes.append("ok")
            except DayNotFeasible:
                outcomes.append("conflict")

        threads = [threading.Thread(target=attempt, args=(f"P{i}",)) for i in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(outcomes) == ["conflict", "ok"]
        assert store.state.unit_admissions(MON, "PICUs") == 1


class TestConfigValidation:
    def test_thresholds_must_increase(self, tmp_path):
        with pytest.raises(ValueError):
            make_config(tmp_path, thresholds=(4, 2))

    def test_top_n_positive(self, tmp_path):
        with pytest.raises(ValueError):
            make_config(tmp_path, default_top_n=0)
