"""Synthetic cohorts with planted, machine-checkable ground truth.

The generator plants three kinds of structure and records exactly what
it planted:

* correlated subject pairs with a target r (a linear latent model
  ``y = r*z + sqrt(1-r^2)*noise`` on standardized marks, then scaled,
  rounded, and clamped to the marks range, which can shrink the sample
  correlation slightly);
* a classification rule mapping (dept, attendance) to a performance
  label, realized by sampling total marks inside that label's band;
* well-separated point blobs plus isolated noise points for clustering,
  sized so the recorded eps/min_pts recover them exactly.

Everything is driven by one seeded RNG in a fixed draw order, so a
given (spec, seed) always produces identical data.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .cohort import (
    ClassificationRow,
    ClusterRow,
    CohortDataset,
    DiscretizationPolicy,
    PERFORMANCE_LABELS,
    validate_subject_code,
)
from .exceptions import InfeasibleSpecError

DEFAULT_SUBJECTS = tuple(f"SUB{i:02d}" for i in range(1, 13))
DEFAULT_PLANTED = (("SUB01", "SUB02", 0.9), ("SUB03", "SUB04", 0.8), ("SUB05", "SUB06", 0.7))
DEFAULT_INDEPENDENT = (("SUB07", "SUB08"), ("SUB09", "SUB10"), ("SUB11", "SUB12"))
DEFAULT_DEPTS = ("COMP", "ETC", "IT")
DEFAULT_RULE = {
    ("COMP", "N"): "AVERAGE",
    ("COMP", "Y"): "GOOD",
    ("ETC", "N"): "POOR",
    ("ETC", "Y"): "AVERAGE",
    ("IT", "N"): "POOR",
    ("IT", "Y"): "GOOD",
}
DEFAULT_BLOBS = (((90.0, 40.0), 20), ((40.0, 10.0), 20))


@dataclass(frozen=True)
class PlantedPair:
    subject_a: str
    subject_b: str
    target_r: float


@dataclass(frozen=True)
class PlantedBlob:
    center: tuple[float, float]
    size: int


@dataclass(frozen=True)
class SynthSpec:
    """Planted-truth description for one synthetic cohort."""

    n_students: int = 60
    subjects: tuple[str, ...] = DEFAULT_SUBJECTS
    planted_pairs: tuple[PlantedPair, ...] = tuple(PlantedPair(*p) for p in DEFAULT_PLANTED)
    independent_pairs: tuple[tuple[str, str], ...] = DEFAULT_INDEPENDENT
    max_marks: int = 100
    marks_sd: float = 12.0
    mean_range: tuple[float, float] = (48.0, 72.0)
    classification_rows: int = 60
    depts: tuple[str, ...] = DEFAULT_DEPTS
    classification_rule: dict[tuple[str, str], str] = field(
        default_factory=lambda: dict(DEFAULT_RULE)
    )
    good_min: int = 400
    average_min: int = 300
    blobs: tuple[PlantedBlob, ...] = tuple(PlantedBlob(c, s) for c, s in DEFAULT_BLOBS)
    noise_points: int = 5
    cluster_eps: float = 8.0
    cluster_min_pts: int = 4


@dataclass(frozen=True)
class SynthResult:
    dataset: CohortDataset
    classification: tuple[ClassificationRow, ...]
    clustering: tuple[ClusterRow, ...]
    ground_truth: dict


def _validate(spec: SynthSpec) -> None:
    if spec.n_students < 1:
        raise InfeasibleSpecError(f"n_students must be >= 1, got {spec.n_students}")
    if not spec.subjects:
        raise InfeasibleSpecError("subject list is empty")
    for code in spec.subjects:
        try:
            validate_subject_code(code)
        except ValueError as exc:
            raise InfeasibleSpecError(str(exc)) from None
    if len(set(spec.subjects)) != len(spec.subjects):
        raise InfeasibleSpecError("subject codes must be unique")
    catalog = set(spec.subjects)

    used = set()
    planted_keys = set()
    for pair in spec.planted_pairs:
        if pair.subject_a == pair.subject_b:
            raise InfeasibleSpecError(f"planted pair repeats subject {pair.subject_a!r}")
        for code in (pair.subject_a, pair.subject_b):
            if code not in catalog:
                raise InfeasibleSpecError(f"planted pair subject {code!r} not in the catalog")
            if code in used:
                raise InfeasibleSpecError(f"subject {code!r} appears in two planted pairs")
            used.add(code)
        if not 0.0 < abs(pair.target_r) < 1.0:
            raise InfeasibleSpecError(
                f"target r must lie in (-1, 0) or (0, 1), got {pair.target_r}"
            )
        if spec.n_students < 3:
            raise InfeasibleSpecError("planting a correlated pair needs n_students >= 3")
        planted_keys.add(frozenset((pair.subject_a, pair.subject_b)))
    for a, b in spec.independent_pairs:
        if a == b:
            raise InfeasibleSpecError(f"independent pair repeats subject {a!r}")
        for code in (a, b):
            if code not in catalog:
                raise InfeasibleSpecError(f"independent pair subject {code!r} not in the catalog")
        if frozenset((a, b)) in planted_keys:
            raise InfeasibleSpecError(f"pair ({a}, {b}) is both planted and independent")

    if spec.marks_sd <= 0:
        raise InfeasibleSpecError(f"marks_sd must be > 0, got {spec.marks_sd}")
    lo, hi = spec.mean_range
    if not 0 < lo <= hi < spec.max_marks:
        raise InfeasibleSpecError(f"mean_range must satisfy 0 < lo <= hi < max_marks, got {spec.mean_range}")

    if spec.classification_rows < 0:
        raise InfeasibleSpecError("classification_rows must be >= 0")
    DiscretizationPolicy(good_min=spec.good_min, average_min=spec.average_min)
    if spec.classification_rows:
        if not spec.depts:
            raise InfeasibleSpecError("classification needs at least one dept")
        for dept in spec.depts:
            for flag in ("N", "Y"):
                label = spec.classification_rule.get((dept, flag))
                if label is None:
                    raise InfeasibleSpecError(f"classification rule misses ({dept}, {flag})")
                if label not in PERFORMANCE_LABELS:
                    raise InfeasibleSpecError(f"unknown performance label {label!r}")

    if spec.cluster_eps <= 0:
        raise InfeasibleSpecError(f"cluster_eps must be > 0, got {spec.cluster_eps}")
    if spec.cluster_min_pts < 2:
        raise InfeasibleSpecError(f"cluster_min_pts must be >= 2, got {spec.cluster_min_pts}")
    if spec.noise_points < 0:
        raise InfeasibleSpecError("noise_points must be >= 0")
    radius = spec.cluster_eps / 2.0
    centers = [blob.center for blob in spec.blobs]
    for blob in spec.blobs:
        if blob.size < spec.cluster_min_pts:
            raise InfeasibleSpecError(
                f"blob of size {blob.size} cannot form a cluster with min_pts="
                f"{spec.cluster_min_pts}"
            )
        x, y = blob.center
        if not (radius <= x <= 100 - radius and radius <= y <= 100 - radius):
            raise InfeasibleSpecError(f"blob center {blob.center} too close to the [0,100] border")
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            gap = math.dist(centers[i], centers[j])
            if gap < 2 * radius + 2 * spec.cluster_eps:
                raise InfeasibleSpecError(
                    f"blob centers {centers[i]} and {centers[j]} are only {gap:.2f} apart"
                )


def _standardized(v: np.ndarray) -> np.ndarray:
    centered = v - v.mean()
    scale = centered.std(ddof=1)
    if scale == 0.0:  # probability-zero draw; surface it instead of dividing by 0
        raise InfeasibleSpecError("degenerate random draw, try another seed")
    return centered / scale


def _plant_marks(spec: SynthSpec, rng) -> CohortDataset:
    subjects = tuple(sorted(spec.subjects))
    n = spec.n_students
    # deterministic difficulty grid: first subject easiest, last hardest
    hi, lo = spec.mean_range[1], spec.mean_range[0]
    means = dict(zip(subjects, np.linspace(hi, lo, num=len(subjects))))

    def to_marks(raw):
        return np.clip(np.rint(raw), 0, spec.max_marks).astype(int)

    vectors: dict[str, np.ndarray] = {}
    for pair in spec.planted_pairs:
        # empirical construction: orthogonalize the noise against the shared
        # factor so the latent vectors correlate at exactly target_r; only
        # rounding and clamping move the sample r afterwards
        z = _standardized(rng.standard_normal(n))
        noise = rng.standard_normal(n)
        residual = _standardized(noise - (noise @ z) / (z @ z) * z)
        r = pair.target_r
        latent_b = r * z + math.sqrt(1 - r * r) * residual
        vectors[pair.subject_a] = to_marks(means[pair.subject_a] + spec.marks_sd * z)
        vectors[pair.subject_b] = to_marks(means[pair.subject_b] + spec.marks_sd * latent_b)
    for subject in subjects:
        if subject not in vectors:
            vectors[subject] = to_marks(means[subject] + spec.marks_sd * rng.standard_normal(n))

    width = max(3, len(str(n)))
    students = tuple(f"s{i:0{width}d}" for i in range(1, n + 1))
    marks = {
        (student, subject): int(vectors[subject][i])
        for i, student in enumerate(students)
        for subject in subjects
    }
    return CohortDataset(
        students=students,
        subjects=subjects,
        marks=marks,
        max_marks={subject: spec.max_marks for subject in subjects},
    )


def _plant_classification(spec: SynthSpec, rng) -> tuple[ClassificationRow, ...]:
    policy = DiscretizationPolicy(good_min=spec.good_min, average_min=spec.average_min)
    bands = {
        "GOOD": (spec.good_min, spec.good_min + 200),
        "AVERAGE": (spec.average_min, spec.good_min - 1),
        "POOR": (0, spec.average_min - 1),
    }
    depts = sorted(spec.depts)
    rows = []
    width = max(3, len(str(spec.classification_rows)))
    for i in range(1, spec.classification_rows + 1):
        dept = depts[int(rng.integers(len(depts)))]
        flag = ("N", "Y")[int(rng.integers(2))]
        label = spec.classification_rule[(dept, flag)]
        lo, hi = bands[label]
        total = int(rng.integers(lo, hi + 1))
        rows.append(
            ClassificationRow(
                stud_id=f"c{i:0{width}d}",
                dept=dept,
                attendance_flag=flag,
                total_marks=total,
                performance=policy.label(total),
            )
        )
    return tuple(rows)


def _plant_clusters(spec: SynthSpec, rng):
    radius = spec.cluster_eps / 2.0
    coords: list[tuple[float, float]] = []
    blob_slices = []
    for blob in spec.blobs:
        start = len(coords)
        for _ in range(blob.size):
            angle = rng.uniform(0.0, 2.0 * math.pi)
            dist = radius * math.sqrt(rng.uniform(0.0, 1.0))
            coords.append(
                (blob.center[0] + dist * math.cos(angle), blob.center[1] + dist * math.sin(angle))
            )
        blob_slices.append((start, len(coords)))

    noise_start = len(coords)
    keep_out = radius + 2.0 * spec.cluster_eps
    attempts = 0
    while len(coords) - noise_start < spec.noise_points:
        attempts += 1
        if attempts > 10_000:
            raise InfeasibleSpecError("could not place isolated noise points; spec too crowded")
        candidate = (rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0))
        if any(math.dist(candidate, blob.center) < keep_out for blob in spec.blobs):
            continue
        if any(
            math.dist(candidate, coords[k]) < 2.0 * spec.cluster_eps
            for k in range(noise_start, len(coords))
        ):
            continue
        coords.append(candidate)

    width = max(3, len(str(len(coords))))
    ids = [f"p{i:0{width}d}" for i in range(1, len(coords) + 1)]
    rows = tuple(
        ClusterRow(stud_id=pid, attendance_pct=round(x, 3), marks=round(y, 3))
        for pid, (x, y) in zip(ids, coords)
    )
    clusters_truth = [
        {"center": list(spec.blobs[b].center), "point_ids": ids[start:stop]}
        for b, (start, stop) in enumerate(blob_slices)
    ]
    noise_ids = ids[noise_start:]
    return rows, clusters_truth, noise_ids


def generate_synthetic_cohort(spec: SynthSpec, seed: int) -> SynthResult:
    """Generate one cohort; deterministic for a fixed (spec, seed)."""
    _validate(spec)
    rng = np.random.default_rng(seed)
    dataset = _plant_marks(spec, rng)
    classification = _plant_classification(spec, rng)
    clustering, clusters_truth, noise_ids = _plant_clusters(spec, rng)
    ground_truth = {
        "seed": seed,
        "marks": {
            "students": spec.n_students,
            "subjects": sorted(spec.subjects),
            "planted_pairs": [
                {"subjects": sorted((p.subject_a, p.subject_b)), "target_r": p.target_r}
                for p in spec.planted_pairs
            ],
            "independent_pairs": [sorted(pair) for pair in spec.independent_pairs],
        },
        "classification": {
            "rule": {f"{dept}|{flag}": label for (dept, flag), label in sorted(spec.classification_rule.items())},
            "policy": {"good_min": spec.good_min, "average_min": spec.average_min},
        },
        "clustering": {
            "clusters": clusters_truth,
            "noise_ids": noise_ids,
            "eps": spec.cluster_eps,
            "min_pts": spec.cluster_min_pts,
        },
    }
    return SynthResult(
        dataset=dataset,
        classification=classification,
        clustering=clustering,
        ground_truth=ground_truth,
    )


def spec_from_dict(raw: dict) -> SynthSpec:
    """Build a SynthSpec from a parsed JSON object; unknown keys are errors."""
    known = {
        "n_students", "subjects", "planted_pairs", "independent_pairs", "max_marks",
        "marks_sd", "mean_range", "classification_rows", "depts", "classification_rule",
        "good_min", "average_min", "blobs", "noise_points", "cluster_eps", "cluster_min_pts",
    }
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown synth spec keys: {sorted(unknown)}")

    kwargs = {}
    if "subjects" in raw:
        subjects = raw["subjects"]
        if isinstance(subjects, int):
            subjects = [f"SUB{i:02d}" for i in range(1, subjects + 1)]
        kwargs["subjects"] = tuple(str(s) for s in subjects)
    if "planted_pairs" in raw:
        kwargs["planted_pairs"] = tuple(
            PlantedPair(str(a), str(b), float(r)) for a, b, r in raw["planted_pairs"]
        )
    if "independent_pairs" in raw:
        kwargs["independent_pairs"] = tuple(
            (str(a), str(b)) for a, b in raw["independent_pairs"]
        )
    if "classification_rule" in raw:
        rule = {}
        for key, label in raw["classification_rule"].items():
            dept, _, flag = str(key).partition("|")
            if not flag:
                raise ValueError(f"classification rule key must look like 'DEPT|Y', got {key!r}")
            rule[(dept, flag)] = str(label)
        kwargs["classification_rule"] = rule
    if "blobs" in raw:
        kwargs["blobs"] = tuple(
            PlantedBlob((float(b["center"][0]), float(b["center"][1])), int(b["size"]))
            for b in raw["blobs"]
        )
    if "mean_range" in raw:
        kwargs["mean_range"] = (float(raw["mean_range"][0]), float(raw["mean_range"][1]))
    if "depts" in raw:
        kwargs["depts"] = tuple(str(d) for d in raw["depts"])
    for key in ("n_students", "max_marks", "classification_rows", "good_min",
                "average_min", "noise_points", "cluster_min_pts"):
        if key in raw:
            kwargs[key] = int(raw[key])
    for key in ("marks_sd", "cluster_eps"):
        if key in raw:
            kwargs[key] = float(raw[key])
    return SynthSpec(**kwargs)
