"""Enrollment records: CSV parsing, pseudonymization, cleaning and synthetic cohorts."""

from __future__ import annotations

import csv
import hashlib
import hmac
import io
import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Optional, TextIO

COLUMNS = (
    "student_id",
    "course_id",
    "course_name",
    "year",
    "term",
    "status",
    "major",
    "department",
    "study_type",
)

YEAR_MIN, YEAR_MAX = 1990, 2100


class IngestError(ValueError):
    """Raised for malformed input or an unusable cohort."""


class Term(str, Enum):
    SPRING = "spring"
    SUMMER = "summer"
    FALL = "fall"

    @property
    def order(self) -> int:
        # spring < summer < fall within a calendar year
        return _TERM_ORDER[self]


_TERM_ORDER = {Term.SPRING: 0, Term.SUMMER: 1, Term.FALL: 2}


class Status(str, Enum):
    COMPLETED_PASS = "completed_pass"
    COMPLETED_FAIL = "completed_fail"
    DEREGISTERED = "deregistered"


class StudyType(str, Enum):
    UNDERGRADUATE = "undergraduate"
    GRADUATE = "graduate"
    OTHER = "other"


@dataclass(frozen=True)
class EnrollmentRecord:
    student_id: str
    course_id: str
    course_name: str
    year: int
    term: Term
    status: Status
    major: str
    department: str
    study_type: StudyType

    @property
    def key(self) -> tuple[str, str, int, Term]:
        return (self.student_id, self.course_id, self.year, self.term)

    @property
    def semester(self) -> tuple[int, int]:
        """Sortable (year, term order) pair."""
        return (self.year, self.term.order)


@dataclass(frozen=True)
class Cohort:
    records: tuple[EnrollmentRecord, ...] = ()
    major_filter: Optional[str] = None
    enrollment_window: Optional[tuple[int, int]] = None
    # students kept as cohort members even if all their records were filtered out
    roster: Optional[frozenset[str]] = None

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if self.roster is not None:
            object.__setattr__(self, "roster", frozenset(self.roster) | self.students)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def students(self) -> frozenset[str]:
        return frozenset(r.student_id for r in self.records)

    @property
    def members(self) -> frozenset[str]:
        """Roster when one is recorded, else the students that have records."""
        return self.students if self.roster is None else self.roster

    @property
    def courses(self) -> frozenset[str]:
        return frozenset(r.course_id for r in self.records)

    def courses_by_student(self) -> dict[str, set[str]]:
        taken: dict[str, set[str]] = {}
        for r in self.records:
            taken.setdefault(r.student_id, set()).add(r.course_id)
        return taken

    def with_records(self, records: Iterable[EnrollmentRecord]) -> "Cohort":
        return replace(self, records=tuple(records))


def _parse_enum(enum_cls, token: str, row: int, name: str):
    try:
        return enum_cls(token)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise IngestError(f"row {row}: field {name!r} has unknown token {token!r} (expected one of {allowed})") from None


def parse_enrollments(source: TextIO | str) -> Cohort:
    """Parse the enrollment CSV schema into a :class:`Cohort`.

    ``source`` is a text stream or a string holding the whole file. Row
    numbers in error messages are physical line numbers, the header being
    line 1.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("row 1: missing header") from None
    if tuple(h.strip() for h in header) != COLUMNS:
        raise IngestError(f"row 1: header must be exactly {','.join(COLUMNS)}; got {','.join(header)}")

    records = []
    seen: dict[tuple, int] = {}
    for fields in reader:
        row = reader.line_num
        if not fields:
            continue
        if len(fields) != len(COLUMNS):
            raise IngestError(f"row {row}: expected {len(COLUMNS)} fields, got {len(fields)}")
        values = dict(zip(COLUMNS, fields))
        for name in ("student_id", "course_id"):
            if not values[name]:
                raise IngestError(f"row {row}: field {name!r} is empty")
        try:
            year = int(values["year"])
        except ValueError:
            raise IngestError(f"row {row}: field 'year' is not an integer: {values['year']!r}") from None
        if not YEAR_MIN <= year <= YEAR_MAX:
            raise IngestError(f"row {row}: field 'year' out of range [{YEAR_MIN}, {YEAR_MAX}]: {year}")
        rec = EnrollmentRecord(
            student_id=values["student_id"],
            course_id=values["course_id"],
            course_name=values["course_name"],
            year=year,
            term=_parse_enum(Term, values["term"], row, "term"),
            status=_parse_enum(Status, values["status"], row, "status"),
            major=values["major"],
            department=values["department"],
            study_type=_parse_enum(StudyType, values["study_type"], row, "study_type"),
        )
        if rec.key in seen:
            s, c, y, t = rec.key
            raise IngestError(
                f"row {row}: duplicate record ({s}, {c}, {y}, {t.value}), first seen at row {seen[rec.key]}"
            )
        seen[rec.key] = row
        records.append(rec)
    return Cohort(tuple(records))


def write_enrollments(cohort: Cohort, sink: TextIO) -> None:
    """Inverse of :func:`parse_enrollments`."""
    writer = csv.writer(sink, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in cohort.records:
        writer.writerow([
            r.student_id, r.course_id, r.course_name, r.year, r.term.value,
            r.status.value, r.major, r.department, r.study_type.value,
        ])


def pseudonymize(cohort: Cohort, salt: bytes) -> Cohort:
    """Replace student ids with a keyed hash of the original id."""
    if not salt:
        raise ValueError("salt must be nonempty")
    originals = cohort.students
    mapping = {}
    for sid in sorted(originals):
        digest = hmac.new(salt, sid.encode("utf-8"), hashlib.sha256).hexdigest()
        mapping[sid] = "p" + digest
    outputs = set(mapping.values())
    if len(outputs) != len(mapping) or outputs & originals:
        raise ValueError("pseudonym collision; choose a different salt")
    return cohort.with_records(replace(r, student_id=mapping[r.student_id]) for r in cohort.records)


def filter_cohort(
    cohort: Cohort,
    major: Optional[str] = None,
    enroll_from: Optional[int] = None,
    enroll_to: Optional[int] = None,
) -> Cohort:
    """Restrict to one major and to students whose first recorded year lies in the window.

    A student's enrollment year is the earliest year among their records in
    the chosen major.
    """
    records = cohort.records
    if major is not None:
        records = tuple(r for r in records if r.major == major)
    window = None
    if enroll_from is not None or enroll_to is not None:
        lo = YEAR_MIN if enroll_from is None else enroll_from
        hi = YEAR_MAX if enroll_to is None else enroll_to
        if lo > hi:
            raise IngestError(f"enrollment window is empty: {lo} > {hi}")
        first_year: dict[str, int] = {}
        for r in records:
            first_year[r.student_id] = min(r.year, first_year.get(r.student_id, r.year))
        records = tuple(r for r in records if lo <= first_year[r.student_id] <= hi)
        window = (lo, hi)
    return Cohort(records, major_filter=major, enrollment_window=window)


def clean_cohort(cohort: Cohort) -> Cohort:
    return cohort.with_records(r for r in cohort.records if r.status is not Status.DEREGISTERED)


def passed_only(cohort: Cohort) -> Cohort:
    return cohort.with_records(r for r in cohort.records if r.status is Status.COMPLETED_PASS)


def remove_outlier_courses(cohort: Cohort, threshold: float = 0.05) -> Cohort:
    """Drop courses taken by fewer than ``threshold`` of the cohort's students.

    The share is distinct students who took the course over distinct students
    in the cohort; a course exactly at the threshold is kept. Students whose
    every course is dropped stay on the returned cohort's roster.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold}")
    majors = {r.major for r in cohort.records}
    if len(majors) > 1:
        raise IngestError(f"outlier removal needs a single-major cohort, found {len(majors)} majors: {sorted(majors)}")
    roster = cohort.members
    n_students = len(roster)
    if n_students == 0:
        raise IngestError("no students in cohort")
    takers: dict[str, set[str]] = {}
    for r in cohort.records:
        takers.setdefault(r.course_id, set()).add(r.student_id)
    # count / n rounds to the same double as the threshold literal when they are equal
    kept = {c for c, s in takers.items() if len(s) / n_students >= threshold}
    return replace(cohort, records=tuple(r for r in cohort.records if r.course_id in kept), roster=roster)


@dataclass(frozen=True)
class PlantedCohortSpec:
    """Planted-partition cohort: students of block b take block-b courses with ``p_in``."""

    blocks: int = 3
    courses_per_block: int = 10
    students_per_block: int = 100
    p_in: float = 0.9
    p_out: float = 0.05
    semesters: int = 6
    seed: int = 42
    major: str = "synthetic"
    start_year: int = 2014


def _ordinal_to_semester(start_year: int, ordinal: int) -> tuple[int, Term]:
    # spring/fall alternation starting in spring of start_year; ordinal is 0-based
    return start_year + ordinal // 2, (Term.SPRING, Term.FALL)[ordinal % 2]


def generate_synthetic_cohort(spec: PlantedCohortSpec) -> tuple[Cohort, dict[str, int]]:
    """Sample a planted-partition cohort; returns it with course → block labels."""
    if not spec.p_in > spec.p_out >= 0:
        raise ValueError(f"need p_in > p_out >= 0, got p_in={spec.p_in}, p_out={spec.p_out}")
    if spec.p_in > 1:
        raise ValueError(f"p_in must be <= 1, got {spec.p_in}")
    if min(spec.blocks, spec.courses_per_block, spec.students_per_block, spec.semesters) < 1:
        raise ValueError("blocks, courses_per_block, students_per_block and semesters must be >= 1")
    rng = random.Random(spec.seed)
    width = len(str(spec.blocks * max(spec.courses_per_block, spec.students_per_block)))
    labels = {}
    courses_of_block: list[list[str]] = []
    for b in range(spec.blocks):
        ids = [f"C{b * spec.courses_per_block + i:0{width}d}" for i in range(spec.courses_per_block)]
        courses_of_block.append(ids)
        labels.update((c, b) for c in ids)
    all_courses = [c for ids in courses_of_block for c in ids]

    records = []
    for b in range(spec.blocks):
        for i in range(spec.students_per_block):
            sid = f"S{b * spec.students_per_block + i:0{width}d}"
            taken = [c for c in all_courses if rng.random() < (spec.p_in if labels[c] == b else spec.p_out)]
            if not taken:
                taken = [rng.choice(courses_of_block[b])]
            for c in taken:
                year, term = _ordinal_to_semester(spec.start_year, rng.randrange(spec.semesters))
                records.append(EnrollmentRecord(
                    student_id=sid, course_id=c, course_name=f"Course {c}", year=year, term=term,
                    status=Status.COMPLETED_PASS, major=spec.major, department="synthetic",
                    study_type=StudyType.UNDERGRADUATE,
                ))
    return Cohort(tuple(records)), labels


@dataclass(frozen=True)
class SemesterCohortSpec:
    """Cohort whose most common course set per semester is shared by a fixed number of students.

    For semester ordinal t (1-based), ``shared[t-1]`` students take the same
    course set; every other student takes a set unique to them. Which students
    share is reshuffled per semester.
    """

    n_students: int = 328
    shared: tuple[int, ...] = (174, 155, 26, 11)
    courses_per_semester: int = 5
    seed: int = 42
    major: str = "synthetic"
    start_year: int = 2014


def generate_semester_cohort(spec: SemesterCohortSpec) -> Cohort:
    if any(not 2 <= s <= spec.n_students for s in spec.shared):
        raise ValueError("each shared count must lie in [2, n_students] so the shared set is the unique maximum")
    rng = random.Random(spec.seed)
    width = len(str(spec.n_students))
    students = [f"S{i:0{width}d}" for i in range(spec.n_students)]
    records = []
    for t, n_shared in enumerate(spec.shared):
        year, term = _ordinal_to_semester(spec.start_year, t)
        sharing = set(rng.sample(students, n_shared))
        core = [f"T{t + 1}-core{j}" for j in range(spec.courses_per_semester)]
        for sid in students:
            if sid in sharing:
                courses = core
            else:
                # one private elective makes the set unique to this student
                courses = core[:-1] + [f"T{t + 1}-elective-{sid}"]
            for c in courses:
                records.append(EnrollmentRecord(
                    student_id=sid, course_id=c, course_name=c, year=year, term=term,
                    status=Status.COMPLETED_PASS, major=spec.major, department="synthetic",
                    study_type=StudyType.UNDERGRADUATE,
                ))
    return Cohort(tuple(records))
