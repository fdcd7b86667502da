import pytest

from edumine.cohort import (
    AVERAGE,
    GOOD,
    POOR,
    DiscretizationPolicy,
    derive_pass_table,
    discretize_performance,
    load_classification,
    load_clustering,
    load_marks,
    load_passes,
    write_marks,
)
from edumine.exceptions import (
    DuplicateEntryError,
    MalformedRowError,
    OutOfRangeMarksError,
    UnknownSubjectError,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadMarks:
    def test_two_rows_one_student(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student_id,subject_id,marks\ns1,IT35,62\ns1,IT36,55\n")
        ds = load_marks(path)
        assert ds.students == ("s1",)
        assert ds.subjects == ("IT35", "IT36")
        assert ds.marks == {("s1", "IT35"): 62, ("s1", "IT36"): 55}

    def test_header_only_is_empty_dataset(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student_id,subject_id,marks\n")
        ds = load_marks(path)
        assert ds.n_students == 0
        assert ds.subjects == ()

    def test_marks_above_scale_rejected(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student_id,subject_id,marks\ns1,IT35,120\n")
        with pytest.raises(OutOfRangeMarksError):
            load_marks(path, max_marks=100)

    def test_negative_marks_rejected(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student_id,subject_id,marks\ns1,IT35,-3\n")
        with pytest.raises(OutOfRangeMarksError):
            load_marks(path)

    def test_duplicate_pair_is_hard_error(self, tmp_path):
        path = write(
            tmp_path, "marks.csv",
            "student_id,subject_id,marks\ns1,IT35,62\ns1,IT35,63\n",
        )
        with pytest.raises(DuplicateEntryError) as err:
            load_marks(path)
        assert ":3:" in str(err.value)

    def test_unknown_subject_against_catalog(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student_id,subject_id,marks\ns1,XX99,10\n")
        with pytest.raises(UnknownSubjectError):
            load_marks(path, catalog={"IT35"})

    def test_bad_header_names_line_one(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student,subject,marks\ns1,IT35,62\n")
        with pytest.raises(MalformedRowError) as err:
            load_marks(path)
        assert err.value.line == 1

    def test_non_integer_marks(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student_id,subject_id,marks\ns1,IT35,sixty\n")
        with pytest.raises(MalformedRowError) as err:
            load_marks(path)
        assert err.value.line == 2

    def test_wrong_field_count(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student_id,subject_id,marks\ns1,IT35\n")
        with pytest.raises(MalformedRowError):
            load_marks(path)

    def test_per_subject_scales(self, tmp_path):
        path = write(tmp_path, "marks.csv", "student_id,subject_id,marks\ns1,A,45\ns1,B,90\n")
        ds = load_marks(path, max_marks={"A": 50, "B": 100})
        assert ds.max_marks == {"A": 50, "B": 100}
        bad = write(tmp_path, "bad.csv", "student_id,subject_id,marks\ns1,A,60\n")
        with pytest.raises(OutOfRangeMarksError):
            load_marks(bad, max_marks={"A": 50})

    def test_round_trip(self, tmp_path):
        path = write(
            tmp_path, "marks.csv",
            "student_id,subject_id,marks\ns2,IT36,55\ns1,IT35,62\ns1,IT36,70\n",
        )
        ds = load_marks(path)
        out = tmp_path / "out.csv"
        write_marks(ds, out)
        assert load_marks(out) == ds


class TestPassTable:
    def make_ds(self, tmp_path, rows):
        body = "".join(f"{s},{j},{m}\n" for s, j, m in rows)
        return load_marks(write(tmp_path, "m.csv", "student_id,subject_id,marks\n" + body))

    def test_boundary_is_inclusive(self, tmp_path):
        ds = self.make_ds(tmp_path, [("s1", "A", 40), ("s2", "A", 39)])
        pt = derive_pass_table(ds, pass_mark=40)
        assert pt.has_passed("s1", "A")
        assert not pt.has_passed("s2", "A")

    def test_saturation(self, tmp_path):
        ds = self.make_ds(tmp_path, [("s1", "A", 80), ("s1", "B", 90), ("s2", "A", 41)])
        pt = derive_pass_table(ds, pass_mark=40)
        assert pt.passed == frozenset({("s1", "A"), ("s1", "B"), ("s2", "A")})

    def test_all_fail_student_still_listed(self, tmp_path):
        ds = self.make_ds(tmp_path, [("s1", "A", 10), ("s2", "A", 80)])
        pt = derive_pass_table(ds, pass_mark=40)
        assert pt.students == ("s1", "s2")
        assert pt.passed_subjects("s1") == ()

    def test_monotone_in_pass_mark(self, tmp_path):
        import random

        rng = random.Random(5)
        rows = [(f"s{i}", f"J{k}", rng.randint(0, 100)) for i in range(12) for k in range(4)]
        ds = self.make_ds(tmp_path, rows)
        low = derive_pass_table(ds, pass_mark=35)
        high = derive_pass_table(ds, pass_mark=55)
        assert high.passed <= low.passed

    def test_pass_mark_validation(self, tmp_path):
        ds = self.make_ds(tmp_path, [("s1", "A", 10)])
        with pytest.raises(ValueError):
            derive_pass_table(ds, pass_mark=0)
        with pytest.raises(ValueError):
            derive_pass_table(ds, pass_mark=101)

    def test_load_passes(self, tmp_path):
        path = write(
            tmp_path, "passes.csv",
            "student_id,subject_id,passed\ns1,A,1\ns1,B,0\ns2,A,1\n",
        )
        pt = load_passes(path)
        assert pt.students == ("s1", "s2")
        assert pt.subjects == ("A", "B")
        assert pt.passed == frozenset({("s1", "A"), ("s2", "A")})

    def test_load_passes_rejects_other_flags(self, tmp_path):
        path = write(tmp_path, "passes.csv", "student_id,subject_id,passed\ns1,A,yes\n")
        with pytest.raises(MalformedRowError):
            load_passes(path)

    def test_load_passes_duplicate(self, tmp_path):
        path = write(tmp_path, "passes.csv", "student_id,subject_id,passed\ns1,A,1\ns1,A,0\n")
        with pytest.raises(DuplicateEntryError):
            load_passes(path)


class TestDiscretization:
    def test_micro_table_labels(self):
        assert discretize_performance(450) == GOOD
        assert discretize_performance(310) == AVERAGE
        assert discretize_performance(230) == POOR

    def test_policy_boundaries(self):
        policy = DiscretizationPolicy(good_min=400, average_min=300)
        assert policy.label(400) == GOOD
        assert policy.label(399) == AVERAGE
        assert policy.label(300) == AVERAGE
        assert policy.label(299) == POOR
        assert policy.label(0) == POOR

    def test_total_monotone_partition(self):
        policy = DiscretizationPolicy(good_min=40, average_min=20)
        rank = {POOR: 0, AVERAGE: 1, GOOD: 2}
        labels = [policy.label(m) for m in range(0, 200)]
        assert all(rank[a] <= rank[b] for a, b in zip(labels, labels[1:]))
        assert set(labels) == {POOR, AVERAGE, GOOD}

    def test_invalid_policy(self):
        with pytest.raises(ValueError):
            DiscretizationPolicy(good_min=300, average_min=300)
        with pytest.raises(ValueError):
            DiscretizationPolicy(good_min=300, average_min=0)

    def test_negative_total_rejected(self):
        with pytest.raises(ValueError):
            discretize_performance(-1)


class TestClassificationLoader:
    def test_performance_is_derived(self, micro_classification_csv):
        rows = load_classification(micro_classification_csv)
        assert [r.performance for r in rows] == [AVERAGE, GOOD, GOOD, POOR]

    def test_attendance_flag_validated(self, tmp_path):
        path = write(tmp_path, "c.csv", "stud_id,dept,attendance,marks\n1,IT,maybe,300\n")
        with pytest.raises(MalformedRowError):
            load_classification(path)

    def test_duplicate_stud_id(self, tmp_path):
        path = write(
            tmp_path, "c.csv",
            "stud_id,dept,attendance,marks\n1,IT,Y,300\n1,ETC,N,200\n",
        )
        with pytest.raises(DuplicateEntryError):
            load_classification(path)


class TestClusteringLoader:
    def test_basic(self, tmp_path):
        path = write(tmp_path, "k.csv", "stud_id,attendance,marks\n1,93,20\n2,87.5,46\n")
        rows = load_clustering(path)
        assert rows[1].attendance_pct == 87.5
        assert rows[0].marks == 20.0

    def test_attendance_range(self, tmp_path):
        path = write(tmp_path, "k.csv", "stud_id,attendance,marks\n1,101,20\n")
        with pytest.raises(MalformedRowError):
            load_clustering(path)

    def test_negative_marks(self, tmp_path):
        path = write(tmp_path, "k.csv", "stud_id,attendance,marks\n1,90,-2\n")
        with pytest.raises(MalformedRowError):
            load_clustering(path)
