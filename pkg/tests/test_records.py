import io
import math

import pytest

from illnessdeath import (
    Cause,
    EventKind,
    IllnessDeathRecord,
    MalformedRecord,
    TransitionQuery,
    derive_competing_risks,
    landmark_subset,
    read_cohort,
    validate_record,
    write_cohort,
)


class TestRecordValidation:
    def test_direct_absorption(self):
        r = IllnessDeathRecord("a", 0, 2, Cause.ABSORBED)
        assert r.final_time == 2
        assert r.observed
        assert not r.entered_ill

    def test_complete_illness_path(self):
        r = IllnessDeathRecord("a", 0, 1, Cause.ILL, 4, Cause.ABSORBED)
        assert r.final_time == 4
        assert r.final_cause is Cause.ABSORBED

    def test_entry_after_exit0_rejected_without_illness(self):
        with pytest.raises(MalformedRecord):
            IllnessDeathRecord("a", 3, 2, Cause.ABSORBED)

    def test_entry_equal_exit0_rejected(self):
        with pytest.raises(MalformedRecord):
            IllnessDeathRecord("a", 2, 2, Cause.CENSORED)

    def test_recruited_during_illness(self):
        # onset precedes study entry; window is (entry, exit1]
        r = IllnessDeathRecord("a", 3, 2, Cause.ILL, 5, Cause.CENSORED)
        assert r.entered_ill
        assert r.final_time == 5

    def test_recruited_during_illness_needs_window(self):
        with pytest.raises(MalformedRecord):
            IllnessDeathRecord("a", 5, 2, Cause.ILL, 5, Cause.ABSORBED)

    def test_exit1_without_illness_rejected(self):
        with pytest.raises(MalformedRecord):
            IllnessDeathRecord("a", 0, 2, Cause.ABSORBED, 4, Cause.ABSORBED)

    def test_missing_exit1_rejected(self):
        with pytest.raises(MalformedRecord):
            IllnessDeathRecord("a", 0, 2, Cause.ILL)

    def test_exit1_before_exit0_rejected(self):
        with pytest.raises(MalformedRecord):
            IllnessDeathRecord("a", 0, 3, Cause.ILL, 2, Cause.ABSORBED)

    def test_nan_rejected(self):
        with pytest.raises(MalformedRecord):
            IllnessDeathRecord("a", 0, math.nan, Cause.ABSORBED)

    def test_negative_entry_rejected_by_constructor(self):
        with pytest.raises(MalformedRecord):
            IllnessDeathRecord("a", -1, 2, Cause.ABSORBED)

    def test_ingest_clamps_negative_entry(self):
        r = validate_record({"id": "a", "entry": "-3", "exit0": "2", "cause0": "2"})
        assert r.entry == 0.0

    def test_ingest_defaults_blank_entry(self):
        r = validate_record({"id": "a", "entry": "", "exit0": "2", "cause0": "0"})
        assert r.entry == 0.0
        assert r.cause0 is Cause.CENSORED


class TestDeriveCompetingRisks:
    def test_window_hit(self, query):
        r = IllnessDeathRecord("a", 0, 3, Cause.ILL, 6, Cause.ABSORBED)
        obs = derive_competing_risks(r, query)
        assert obs.kind is EventKind.EVENT1
        assert obs.time == 6

    def test_onset_before_window(self, query):
        r = IllnessDeathRecord("a", 0, 1, Cause.ILL, 4, Cause.ABSORBED)
        assert derive_competing_risks(r, query).kind is EventKind.EVENT2

    def test_dead_by_t(self):
        # onset inside the window but absorbed before t
        r = IllnessDeathRecord("a", 0, 2, Cause.ILL, 3, Cause.ABSORBED)
        q = TransitionQuery(1.5, 3.5)
        assert derive_competing_risks(r, q).kind is EventKind.EVENT2

    def test_censored_in_illness(self, query):
        r = IllnessDeathRecord("a", 0, 2, Cause.ILL, 3, Cause.CENSORED)
        obs = derive_competing_risks(r, query)
        assert obs.kind is EventKind.CENSORED
        assert obs.time == 3

    def test_time_is_exit0_without_illness(self, query):
        r = IllnessDeathRecord("a", 0, 2, Cause.ABSORBED)
        assert derive_competing_risks(r, query).time == 2

    def test_boundary_onset_at_t_counts(self):
        r = IllnessDeathRecord("a", 0, 3.5, Cause.ILL, 6, Cause.ABSORBED)
        q = TransitionQuery(1.5, 3.5)
        assert derive_competing_risks(r, q).kind is EventKind.EVENT1

    def test_boundary_onset_at_s_excluded(self):
        r = IllnessDeathRecord("a", 0, 1.5, Cause.ILL, 6, Cause.ABSORBED)
        q = TransitionQuery(1.5, 3.5)
        assert derive_competing_risks(r, q).kind is EventKind.EVENT2


class TestLandmarkSubset:
    def test_hand_example(self, cohort4):
        ids = {r.id for r in landmark_subset(cohort4, 1.5)}
        assert ids == {"B", "C", "D"}

    def test_strict_boundaries(self):
        at_s = IllnessDeathRecord("x", 0, 2.0, Cause.ABSORBED)
        assert landmark_subset([at_s], 2.0) == []
        entered_at_s = IllnessDeathRecord("y", 2.0, 4.0, Cause.ABSORBED)
        assert landmark_subset([entered_at_s], 2.0) == []

    def test_origin_landmark_keeps_origin_entries(self):
        a = IllnessDeathRecord("a", 0, 2, Cause.ABSORBED)
        b = IllnessDeathRecord("b", 1, 3, Cause.ABSORBED)
        assert landmark_subset([a, b], 0) == [a]

    def test_entered_ill_never_in_landmark(self):
        r = IllnessDeathRecord("a", 3, 2, Cause.ILL, 9, Cause.ABSORBED)
        assert landmark_subset([r], 2.5) == []
        assert landmark_subset([r], 0) == []


class TestCohortCsv:
    def test_round_trip(self, cohort4, tmp_path):
        path = tmp_path / "cohort.csv"
        write_cohort(cohort4, path)
        back = read_cohort(path)
        assert back == cohort4

    def test_round_trip_with_delayed_entry(self, tmp_path):
        cohort = [
            IllnessDeathRecord("a", 1.25, 4, Cause.ILL, 7.5, Cause.CENSORED),
            IllnessDeathRecord("b", 5, 3, Cause.ILL, 8, Cause.ABSORBED),
        ]
        path = tmp_path / "cohort.csv"
        write_cohort(cohort, path)
        assert read_cohort(path) == cohort

    def test_malformed_row_reports_line(self):
        text = "id,entry,exit0,cause0,exit1,cause1\nA,0,2,2,,\nB,3,2,2,,\n"
        with pytest.raises(MalformedRecord, match="line 3"):
            read_cohort(io.StringIO(text))

    def test_missing_column_rejected(self):
        with pytest.raises(MalformedRecord, match="cause0"):
            read_cohort(io.StringIO("id,entry,exit0\nA,0,2\n"))

    def test_duplicate_id_rejected(self):
        text = "id,entry,exit0,cause0,exit1,cause1\nA,0,2,2,,\nA,0,3,2,,\n"
        with pytest.raises(MalformedRecord, match="duplicate"):
            read_cohort(io.StringIO(text))

    def test_bad_cause_code_reports_line(self):
        text = "id,entry,exit0,cause0,exit1,cause1\nA,0,2,7,,\n"
        with pytest.raises(MalformedRecord, match="line 2"):
            read_cohort(io.StringIO(text))
