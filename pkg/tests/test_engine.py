"""Recommendation engine: feasibility, greedy choice, ranking, heatmap."""

import itertools
import random
from datetime import date, timedelta
from decimal import Decimal

import pytest

from beds.core import (
    CaseRequest,
    DateWindow,
    DayNotFeasible,
    NoFeasibleDay,
    ScheduleState,
    hours,
)
from beds.engine import (
    DEFAULT_THRESHOLDS,
    FewestAdmissionsFirst,
    book_request,
    candidate_days,
    color_bucket,
    get_policy,
    heatmap,
    recommend_greedy,
    recommend_topn,
)

D = date
MON = D(2019, 4, 1)  # a Monday


def request(duration="2.5", start=MON, end=None, surgeon="S1", unit="PICUs", patient="P1"):
    end = end or start + timedelta(days=4)
    w = DateWindow(start, end)
    return CaseRequest(
        patient_id=patient,
        surgeon_id=surgeon,
        duration_hours=hours(duration),
        clinical_window=w,
        patient_window=w,
        post_op_unit=unit,
    )


def random_instance(rng: random.Random):
    """A random ledger plus a request whose window covers part of it."""
    base = D(2019, 1, 1) + timedelta(days=rng.randrange(300))
    window = DateWindow(base, base + timedelta(days=rng.randrange(1, 21)))
    state = ScheduleState()
    for day in window.days():
        if rng.random() < 0.8:
            state.set_surgeon_hours(day, "S1", str(rng.randrange(0, 17) / 2))
        if rng.random() < 0.8:
            state.count_admission(day, "PICUs", rng.randrange(0, 8))
    req = CaseRequest(
        patient_id="P",
        surgeon_id="S1",
        duration_hours=hours(rng.randrange(1, 13) / 2),
        clinical_window=window,
        patient_window=window,
        post_op_unit="PICUs",
    )
    return state, req


def oracle_best_day(state, req):
    """Brute-force scan: min admissions, then earliest day."""
    feasible = [
        d
        for d in req.search_window().days()
        if state.surgeon_hours(d, req.surgeon_id) >= req.duration_hours
    ]
    if not feasible:
        return None
    return min(feasible, key=lambda d: (state.unit_admissions(d, req.post_op_unit), d))


class TestCandidateDays:
    def test_filters_by_hours(self):
        state = ScheduleState()
        state.set_surgeon_hours(MON, "S1", "5")
        state.set_surgeon_hours(MON + timedelta(days=2), "S1", "5")
        assert candidate_days(state, request("2.5")) == [MON, MON + timedelta(days=2)]

    def test_infeasible_duration_gives_empty_list(self):
        state = ScheduleState()
        for d in DateWindow(MON, MON + timedelta(days=4)).days():
            state.set_surgeon_hours(d, "S1", "3")
        assert candidate_days(state, request("8")) == []

    def test_disjoint_windows_give_empty_list(self):
        w1 = DateWindow(MON, MON + timedelta(days=2))
        w2 = DateWindow(MON + timedelta(days=5), MON + timedelta(days=7))
        req = CaseRequest("P", "S1", hours("1"), w1, w2, "PICUs")
        assert candidate_days(ScheduleState(), req) == []

    def test_matches_exhaustive_scan(self):
        rng = random.Random(7)
        for _ in range(200):
            state, req = random_instance(rng)
            expected = [
                d
                for d in req.search_window().days()
                if state.surgeon_hours(d, req.surgeon_id) >= req.duration_hours
            ]
            assert candidate_days(state, req) == expected

    def test_window_cap_limits_scan(self):
        state = ScheduleState()
        far = MON + timedelta(days=500)
        state.set_surgeon_hours(far, "S1", "9")
        req = request("1", start=MON, end=far)
        assert candidate_days(state, req, max_days=365) == []


class TestRecommendGreedy:
    def test_tie_broken_by_earliest(self):
        state = ScheduleState()
        days = [MON, MON + timedelta(days=1), MON + timedelta(days=2)]
        for day, n in zip(days, (3, 1, 1)):
            state.set_surgeon_hours(day, "S1", "5")
            state.count_admission(day, "PICUs", n)
        assert recommend_greedy(state, request("2.5", end=days[-1])) == days[1]

    def test_single_candidate(self):
        state = ScheduleState()
        state.set_surgeon_hours(MON + timedelta(days=3), "S1", "5")
        assert recommend_greedy(state, request("2.5")) == MON + timedelta(days=3)

    def test_no_feasible_day_raises(self):
        with pytest.raises(NoFeasibleDay):
            recommend_greedy(ScheduleState(), request())

    def test_matches_brute_force_oracle(self):
        rng = random.Random(42)
        for _ in range(200):
            state, req = random_instance(rng)
            expected = oracle_best_day(state, req)
            if expected is None:
                with pytest.raises(NoFeasibleDay):
                    recommend_greedy(state, req)
            else:
                assert recommend_greedy(state, req) == expected


class TestRecommendTopN:
    def test_n1_equals_greedy(self):
        rng = random.Random(3)
        policy = FewestAdmissionsFirst()
        for _ in range(100):
            state, req = random_instance(rng)
            if not candidate_days(state, req):
                continue
            rec = recommend_topn(state, req, policy, n=1)
            assert rec.ranked_days == [recommend_greedy(state, req)]

    def test_truncation_boundary(self):
        state = ScheduleState()
        for d in DateWindow(MON, MON + timedelta(days=4)).days():
            state.set_surgeon_hours(d, "S1", "5")
        rec = recommend_topn(state, request("2.5"), n=50)
        assert len(rec.ranked_days) == 5

    def test_policy_matches_sort_oracle(self):
        rng = random.Random(11)
        policy = FewestAdmissionsFirst()
        for _ in range(100):
            state, req = random_instance(rng)
            cands = candidate_days(state, req)
            if not cands:
                continue
            rec = recommend_topn(state, req, policy, n=len(cands))
            expected = sorted(cands, key=lambda d: (state.unit_admissions(d, "PICUs"), d))
            assert rec.ranked_days == expected

    def test_annotations_reflect_state(self):
        state = ScheduleState()
        state.set_surgeon_hours(MON, "S1", "5")
        state.count_admission(MON, "PICUs", 4)
        rec = recommend_topn(state, request("2.5"), n=1)
        ann = rec.annotations[0]
        assert (ann.day, ann.admissions, ann.remaining_hours, ann.bucket) == (
            MON,
            4,
            Decimal("5.00"),
            2,
        )

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValueError):
            get_policy("definitely-not-a-policy")


class TestBookRequest:
    def test_read_your_writes(self):
        state = ScheduleState()
        for d in DateWindow(MON, MON + timedelta(days=2)).days():
            state.set_surgeon_hours(d, "S1", "10")
        req = request("2.5", end=MON + timedelta(days=2))
        day = recommend_greedy(state, req)
        book_request(state, req, day)
        assert state.unit_admissions(day, "PICUs") == 1
        rec = recommend_topn(state, request("2.5", end=MON + timedelta(days=2), patient="P2"), n=3)
        booked = {a.day: a.admissions for a in rec.annotations}
        assert booked[day] == 1

    def test_hour_exhaustion_removes_day(self):
        state = ScheduleState()
        state.set_surgeon_hours(MON, "S1", "2.5")
        req = request("2.5", end=MON)
        book_request(state, req, MON)
        assert candidate_days(state, request("2.5", end=MON, patient="P2")) == []

    def test_infeasible_day_rejected_without_mutation(self):
        state = ScheduleState()
        state.set_surgeon_hours(MON, "S1", "2.0")
        before = state.copy()
        with pytest.raises(DayNotFeasible):
            book_request(state, request("2.5", end=MON), MON)
        assert state == before

    def test_sequential_fill_minimizes_peak(self):
        """Booking k identical cases into a symmetric 3-day window spreads
        them as evenly as any assignment could."""
        days = [MON, MON + timedelta(days=1), MON + timedelta(days=2)]
        k = 7
        state = ScheduleState()
        for d in days:
            state.set_surgeon_hours(d, "S1", "100")
        for i in range(k):
            req = request("2.5", end=days[-1], patient=f"P{i}")
            book_request(state, req, recommend_greedy(state, req))
        greedy_peak = max(state.unit_admissions(d, "PICUs") for d in days)

        best_peak = min(
            max(assignment.count(d) for d in days)
            for assignment in itertools.product(days, repeat=k)
        )
        assert greedy_peak == best_peak == 3


class TestHeatmap:
    def test_bucket_boundaries(self):
        assert color_bucket(0) == 0
        assert color_bucket(1) == 0
        assert color_bucket(2) == 1
        assert color_bucket(5) == 2
        assert color_bucket(6) == 3
        assert color_bucket(40) == 3

    def test_empty_ledger_seven_day_range(self):
        cells = heatmap(ScheduleState(), "PICUs", "S1", DateWindow(MON, MON + timedelta(days=6)))
        assert len(cells) == 7
        assert all(c.admissions == 0 and c.bucket == 0 for c in cells)

    def test_cell_contents(self):
        state = ScheduleState()
        state.count_admission(MON, "PICUs", 6)
        state.set_surgeon_hours(MON, "S1", "4.5")
        cell = heatmap(state, "PICUs", "S1", DateWindow(MON, MON))[0]
        assert (cell.admissions, cell.remaining_hours, cell.bucket) == (6, Decimal("4.50"), 3)

    def test_thresholds_must_increase(self):
        with pytest.raises(ValueError):
            heatmap(ScheduleState(), "PICUs", "S1", DateWindow(MON, MON), thresholds=(2, 2, 6))


class TestDeterminism:
    def test_identical_inputs_identical_recommendation(self):
        rng = random.Random(5)
        for _ in range(50):
            state, req = random_instance(rng)
            if not candidate_days(state, req):
                continue
            first = recommend_greedy(state, req)
            again = recommend_greedy(state.copy(), req)
            assert first == again

    def test_booking_never_decreases_counts_or_increases_hours(self):
        rng = random.Random(9)
        state, req = random_instance(rng)
        while not candidate_days(state, req):
            state, req = random_instance(rng)
        day = recommend_greedy(state, req)
        hours_before = {(d, s): h for d, s, h in state.surgeon_hours_items()}
        counts_before = {(d, u): n for d, u, n in state.unit_admissions_items()}
        book_request(state, req, day)
        for (d, s), h in hours_before.items():
            assert state.surgeon_hours(d, s) <= h
        for (d, u), n in counts_before.items():
            assert state.unit_admissions(d, u) >= n
