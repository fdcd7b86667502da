"""Sample linear correlation over per-subject marks and the
related-subjects pipeline: confidence-filtered candidate pairs scored
with Pearson's r and flagged strong when r >= gamma.
"""

import math
from dataclasses import dataclass

import numpy as np

from .association import build_transactions, candidate_pairs
from .cohort import CohortDataset, PassTable
from .exceptions import SampleTooSmallError, ZeroVarianceError
from .validation import check_unit_interval

DEFAULT_GAMMA = 0.5
DEFAULT_MIN_N = 3


@dataclass(frozen=True)
class PairedSample:
    """Marks of the students enrolled in both subjects, aligned by student."""

    subject_i: str
    subject_j: str
    student_ids: tuple[str, ...]
    xs: tuple[float, ...]
    ys: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.student_ids)


@dataclass(frozen=True)
class CorrelationReport:
    subject_i: str
    subject_j: str
    n: int
    r: float | None
    strong: bool | None
    gamma: float
    skip_reason: str | None = None


def pearson_r(xs, ys) -> float:
    """Sample linear correlation coefficient of two aligned vectors.

    Two-pass evaluation: means first, then centered sums, which avoids
    the catastrophic cancellation of one-pass formulas on marks-scale
    data. Equivalent to sum((x-mx)(y-my)) / ((n-1) * Sx * Sy) with
    sample standard deviations (n-1 denominator). The result is clamped
    to [-1, 1] against last-ulp rounding.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"need two equal-length vectors, got shapes {x.shape} and {y.shape}")
    n = x.size
    if n < 3:
        raise SampleTooSmallError(n)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0:
        raise ZeroVarianceError("x")
    if syy == 0.0:
        raise ZeroVarianceError("y")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def build_paired_sample(dataset: CohortDataset, subject_i: str, subject_j: str) -> PairedSample:
    """Marks vectors for students having marks in both subjects, in sorted
    student-id order. May be empty when enrollment is disjoint."""
    if subject_i == subject_j:
        raise ValueError(f"need two distinct subjects, got {subject_i!r} twice")
    shared = [
        s
        for s in dataset.students
        if (s, subject_i) in dataset.marks and (s, subject_j) in dataset.marks
    ]
    return PairedSample(
        subject_i=subject_i,
        subject_j=subject_j,
        student_ids=tuple(shared),
        xs=tuple(float(dataset.marks[(s, subject_i)]) for s in shared),
        ys=tuple(float(dataset.marks[(s, subject_j)]) for s in shared),
    )


def strongly_related(
    dataset: CohortDataset,
    pass_table: PassTable,
    catalog=None,
    gamma: float = DEFAULT_GAMMA,
    min_n: int = DEFAULT_MIN_N,
    minconf=None,
) -> list[CorrelationReport]:
    """Two-step pipeline: candidate pairs by confidence, verdicts by r.

    r is computed once per unordered pair (it is symmetric). Pairs that
    cannot be scored (too few shared students, constant marks) stay in
    the report with a skip reason instead of being dropped, so the
    output accounts for every candidate.
    """
    check_unit_interval("gamma", gamma, open_ends=True)
    if min_n < 3:
        raise ValueError(f"min_n must be >= 3, got {min_n}")

    transactions = build_transactions(pass_table)
    pairs = candidate_pairs(transactions, pass_table, catalog, minconf)

    reports = []
    for subject_i, subject_j in pairs:
        sample = build_paired_sample(dataset, subject_i, subject_j)
        skip_reason = None
        r = None
        if sample.n < min_n:
            skip_reason = f"sample_too_small(n={sample.n})"
        else:
            try:
                r = pearson_r(sample.xs, sample.ys)
            except ZeroVarianceError as exc:
                constant = subject_i if exc.side == "x" else subject_j
                skip_reason = f"zero_variance({constant})"
        reports.append(
            CorrelationReport(
                subject_i=subject_i,
                subject_j=subject_j,
                n=sample.n,
                r=r,
                strong=None if skip_reason else r >= gamma,
                gamma=gamma,
                skip_reason=skip_reason,
            )
        )
    return reports


def reports_to_csv(reports) -> str:
    """Render verdicts as CSV: subject_i,subject_j,n,r,strong,skip_reason.

    Skipped pairs leave r and strong empty; computed pairs leave
    skip_reason empty. r uses 6 decimal places.
    """
    lines = ["subject_i,subject_j,n,r,strong,skip_reason"]
    for rep in reports:
        if rep.skip_reason is None:
            r_text = f"{rep.r:.6f}"
            strong_text = "true" if rep.strong else "false"
            reason = ""
        else:
            r_text = ""
            strong_text = ""
            reason = rep.skip_reason
        lines.append(f"{rep.subject_i},{rep.subject_j},{rep.n},{r_text},{strong_text},{reason}")
    return "\n".join(lines) + "\n"
