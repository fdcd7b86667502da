"""Student cohort data model: CSV ingestion, pass tables, performance labels.

All record types are frozen dataclasses; loaders validate every row and
report the offending file and line on failure. Datasets are immutable
after load, so they are safe to share across threads.

CSV schemas (comma separated, UTF-8, first line is the header):

    marks.csv           student_id,subject_id,marks
    passes.csv          student_id,subject_id,passed      (passed in {0,1})
    classification.csv  stud_id,dept,attendance,marks     (attendance in {Y,N})
    clustering.csv      stud_id,attendance,marks
"""

import csv
from dataclasses import dataclass

from .exceptions import (
    DuplicateEntryError,
    MalformedRowError,
    OutOfRangeMarksError,
    UnknownSubjectError,
)

MARKS_HEADER = ("student_id", "subject_id", "marks")
PASSES_HEADER = ("student_id", "subject_id", "passed")
CLASSIFICATION_HEADER = ("stud_id", "dept", "attendance", "marks")
CLUSTERING_HEADER = ("stud_id", "attendance", "marks")

GOOD = "GOOD"
AVERAGE = "AVERAGE"
POOR = "POOR"
PERFORMANCE_LABELS = (GOOD, AVERAGE, POOR)

DEFAULT_PASS_MARK = 40
DEFAULT_MAX_MARKS = 100


def validate_subject_code(code: str) -> str:
    """A subject code must be a non-empty token without whitespace."""
    if not code or any(ch.isspace() for ch in code):
        raise ValueError(f"invalid subject code {code!r}")
    return code


@dataclass(frozen=True)
class MarksRecord:
    student_id: str
    subject_id: str
    marks: int
    max_marks: int = DEFAULT_MAX_MARKS

    def __post_init__(self):
        if not 0 <= self.marks <= self.max_marks:
            raise OutOfRangeMarksError(
                f"marks {self.marks} outside [0, {self.max_marks}] "
                f"for {self.student_id}/{self.subject_id}"
            )


@dataclass(frozen=True, eq=True)
class CohortDataset:
    """Per-student subject marks, keyed by (student_id, subject_id)."""

    students: tuple[str, ...]
    subjects: tuple[str, ...]
    marks: dict[tuple[str, str], int]
    max_marks: dict[str, int]

    def marks_of(self, student_id: str, subject_id: str):
        return self.marks.get((student_id, subject_id))

    @property
    def n_students(self) -> int:
        return len(self.students)


@dataclass(frozen=True, eq=True)
class PassTable:
    """Which (student, subject) pairs count as passed.

    ``students`` lists every enrolled student, including those who passed
    nothing; ``passed`` holds only the passing pairs.
    """

    students: tuple[str, ...]
    subjects: tuple[str, ...]
    passed: frozenset[tuple[str, str]]

    def has_passed(self, student_id: str, subject_id: str) -> bool:
        return (student_id, subject_id) in self.passed

    def passed_subjects(self, student_id: str) -> tuple[str, ...]:
        return tuple(sorted(j for s, j in self.passed if s == student_id))

    def pass_count(self, subject_id: str) -> int:
        return sum(1 for _, j in self.passed if j == subject_id)


@dataclass(frozen=True)
class DiscretizationPolicy:
    """Maps total marks to GOOD / AVERAGE / POOR.

    GOOD needs at least ``good_min`` marks, AVERAGE at least
    ``average_min``, everything below is POOR.
    """

    good_min: int = 400
    average_min: int = 300

    def __post_init__(self):
        if not self.good_min > self.average_min > 0:
            raise ValueError(
                f"need good_min > average_min > 0, got {self.good_min}/{self.average_min}"
            )

    def label(self, total_marks: int) -> str:
        if total_marks < 0:
            raise ValueError(f"total marks must be >= 0, got {total_marks}")
        if total_marks >= self.good_min:
            return GOOD
        if total_marks >= self.average_min:
            return AVERAGE
        return POOR


DEFAULT_POLICY = DiscretizationPolicy()


def discretize_performance(total_marks: int, policy: DiscretizationPolicy = DEFAULT_POLICY) -> str:
    return policy.label(total_marks)


@dataclass(frozen=True)
class ClassificationRow:
    stud_id: str
    dept: str
    attendance_flag: str
    total_marks: int
    performance: str


@dataclass(frozen=True)
class ClusterRow:
    stud_id: str
    attendance_pct: float
    marks: float


# --- CSV plumbing ----------------------------------------------------------

def _read_rows(path, header):
    """Yield (line_no, fields) for every data row, after checking the header."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or tuple(f.strip() for f in first) != header:
            raise MalformedRowError(path, 1, f"expected header {','.join(header)}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue  # tolerate blank lines
            if len(row) != len(header):
                raise MalformedRowError(
                    path, line_no, f"expected {len(header)} fields, got {len(row)}"
                )
            yield line_no, [f.strip() for f in row]


def _parse_int(value, path, line_no, what):
    try:
        return int(value)
    except ValueError:
        raise MalformedRowError(path, line_no, f"{what} must be an integer, got {value!r}") from None


def _parse_float(value, path, line_no, what):
    try:
        return float(value)
    except ValueError:
        raise MalformedRowError(path, line_no, f"{what} must be a number, got {value!r}") from None


def _require_id(value, path, line_no, what):
    if not value:
        raise MalformedRowError(path, line_no, f"{what} must be non-empty")
    return value


def load_marks(path, catalog=None, max_marks=DEFAULT_MAX_MARKS) -> CohortDataset:
    """Load and validate a marks.csv file.

    ``catalog`` restricts the allowed subject codes; when None, the
    catalog is taken to be whatever subjects the file mentions.
    ``max_marks`` is either one scale for every subject or a mapping
    from subject code to its scale.
    """
    catalog_set = None if catalog is None else set(catalog)

    def scale_for(subject):
        if isinstance(max_marks, dict):
            if subject not in max_marks:
                raise UnknownSubjectError(subject)
            return max_marks[subject]
        return max_marks

    marks: dict[tuple[str, str], int] = {}
    for line_no, (student, subject, raw_marks) in _read_rows(path, MARKS_HEADER):
        student = _require_id(student, path, line_no, "student_id")
        try:
            validate_subject_code(subject)
        except ValueError as exc:
            raise MalformedRowError(path, line_no, str(exc)) from None
        if catalog_set is not None and subject not in catalog_set:
            raise UnknownSubjectError(subject, path, line_no)
        value = _parse_int(raw_marks, path, line_no, "marks")
        scale = scale_for(subject)
        if not 0 <= value <= scale:
            raise OutOfRangeMarksError(
                f"{path}:{line_no}: marks {value} outside [0, {scale}] for subject {subject}"
            )
        key = (student, subject)
        if key in marks:
            raise DuplicateEntryError(
                f"{path}:{line_no}: duplicate marks row for student {student}, subject {subject}"
            )
        marks[key] = value

    students = tuple(sorted({s for s, _ in marks}))
    subjects = tuple(sorted({j for _, j in marks}))
    scales = {j: scale_for(j) for j in subjects}
    return CohortDataset(students=students, subjects=subjects, marks=marks, max_marks=scales)


def marks_to_csv(dataset: CohortDataset) -> str:
    """Serialize a dataset back to the marks.csv schema (sorted rows)."""
    lines = [",".join(MARKS_HEADER)]
    for student, subject in sorted(dataset.marks):
        lines.append(f"{student},{subject},{dataset.marks[(student, subject)]}")
    return "\n".join(lines) + "\n"


def write_marks(dataset: CohortDataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(marks_to_csv(dataset))


def derive_pass_table(dataset: CohortDataset, pass_mark: int = DEFAULT_PASS_MARK) -> PassTable:
    """Derive pass flags from marks: passed iff marks >= pass_mark."""
    if pass_mark <= 0:
        raise ValueError(f"pass_mark must be > 0, got {pass_mark}")
    if dataset.subjects:
        lowest_scale = min(dataset.max_marks[j] for j in dataset.subjects)
        if pass_mark > lowest_scale:
            raise ValueError(
                f"pass_mark {pass_mark} exceeds the smallest subject scale {lowest_scale}"
            )
    passed = frozenset(
        (student, subject)
        for (student, subject), value in dataset.marks.items()
        if value >= pass_mark
    )
    return PassTable(students=dataset.students, subjects=dataset.subjects, passed=passed)


def load_passes(path, catalog=None) -> PassTable:
    """Load an explicit passes.csv file (passed is 0 or 1)."""
    catalog_set = None if catalog is None else set(catalog)
    seen: dict[tuple[str, str], bool] = {}
    for line_no, (student, subject, raw_flag) in _read_rows(path, PASSES_HEADER):
        student = _require_id(student, path, line_no, "student_id")
        try:
            validate_subject_code(subject)
        except ValueError as exc:
            raise MalformedRowError(path, line_no, str(exc)) from None
        if catalog_set is not None and subject not in catalog_set:
            raise UnknownSubjectError(subject, path, line_no)
        if raw_flag not in ("0", "1"):
            raise MalformedRowError(path, line_no, f"passed must be 0 or 1, got {raw_flag!r}")
        key = (student, subject)
        if key in seen:
            raise DuplicateEntryError(
                f"{path}:{line_no}: duplicate pass row for student {student}, subject {subject}"
            )
        seen[key] = raw_flag == "1"

    students = tuple(sorted({s for s, _ in seen}))
    subjects = tuple(sorted({j for _, j in seen}))
    passed = frozenset(key for key, flag in seen.items() if flag)
    return PassTable(students=students, subjects=subjects, passed=passed)


def load_classification(path, policy: DiscretizationPolicy = DEFAULT_POLICY) -> list[ClassificationRow]:
    """Load classification.csv; the performance label is always derived."""
    rows: list[ClassificationRow] = []
    seen_ids: set[str] = set()
    for line_no, (stud_id, dept, attendance, raw_marks) in _read_rows(path, CLASSIFICATION_HEADER):
        stud_id = _require_id(stud_id, path, line_no, "stud_id")
        if stud_id in seen_ids:
            raise DuplicateEntryError(f"{path}:{line_no}: duplicate stud_id {stud_id}")
        seen_ids.add(stud_id)
        if not dept:
            raise MalformedRowError(path, line_no, "dept must be non-empty")
        if attendance not in ("Y", "N"):
            raise MalformedRowError(path, line_no, f"attendance must be Y or N, got {attendance!r}")
        total = _parse_int(raw_marks, path, line_no, "marks")
        if total < 0:
            raise MalformedRowError(path, line_no, f"marks must be >= 0, got {total}")
        rows.append(
            ClassificationRow(
                stud_id=stud_id,
                dept=dept,
                attendance_flag=attendance,
                total_marks=total,
                performance=policy.label(total),
            )
        )
    return rows


def load_clustering(path) -> list[ClusterRow]:
    """Load clustering.csv rows (attendance percentage and marks)."""
    rows: list[ClusterRow] = []
    seen_ids: set[str] = set()
    for line_no, (stud_id, raw_attendance, raw_marks) in _read_rows(path, CLUSTERING_HEADER):
        stud_id = _require_id(stud_id, path, line_no, "stud_id")
        if stud_id in seen_ids:
            raise DuplicateEntryError(f"{path}:{line_no}: duplicate stud_id {stud_id}")
        seen_ids.add(stud_id)
        attendance = _parse_float(raw_attendance, path, line_no, "attendance")
        if not 0.0 <= attendance <= 100.0:
            raise MalformedRowError(
                path, line_no, f"attendance must lie in [0, 100], got {attendance}"
            )
        marks = _parse_float(raw_marks, path, line_no, "marks")
        if marks < 0.0:
            raise MalformedRowError(path, line_no, f"marks must be >= 0, got {marks}")
        rows.append(ClusterRow(stud_id=stud_id, attendance_pct=attendance, marks=marks))
    return rows


DEFAULT_TREE_ATTRIBUTES = ("attendance", "dept")


def classification_attribute_value(row: ClassificationRow, attribute: str,
                                   policy: DiscretizationPolicy = DEFAULT_POLICY) -> str:
    """Categorical value of one tree attribute for a classification row.

    ``marks`` is discretized through the policy so it can be used as a
    categorical attribute; doing so makes the tree degenerate on purpose
    (the target is a function of marks) and is only for demonstration.
    """
    if attribute == "dept":
        return row.dept
    if attribute == "attendance":
        return row.attendance_flag
    if attribute == "marks":
        return policy.label(row.total_marks)
    raise ValueError(f"unknown classification attribute {attribute!r}")
