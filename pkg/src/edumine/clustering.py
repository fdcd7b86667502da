"""Density-based clustering (DBSCAN) with core/border/noise labeling.

A point is CORE when its eps-neighborhood (inclusive of the point
itself, distances compared as dist <= eps) holds at least ``min_pts``
points. Clusters are the density-connected components: cores reachable
through chains of eps-close cores share a cluster, and every non-core
point within eps of a core joins the cluster of the first such core
found. Points near no core are NOISE.

Points are scanned in sorted-id order, so output (including the
cluster-id numbering 1..k and border assignment) is reproducible
byte-for-byte. Neighborhoods use exact pairwise distances; cohort-scale
inputs do not justify a spatial index.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.exceptions import NotFittedError

from .exceptions import (
    DimensionMismatchError,
    EmptyInputError,
    TooFewPointsError,
)
from .validation import as_point_matrix, check_positive

CORE = "CORE"
BORDER = "BORDER"
NOISE = "NOISE"

DEFAULT_EPS = 0.1
DEFAULT_MIN_PTS = 4


@dataclass(frozen=True)
class Point:
    id: object
    coords: tuple[float, ...]


@dataclass(frozen=True)
class ClusterAssignment:
    point_id: object
    role: str
    cluster_id: int | None


def _coord_matrix(points):
    if not points:
        raise EmptyInputError("no points given")
    dim = len(points[0].coords)
    if dim < 1:
        raise DimensionMismatchError("points need at least one coordinate")
    for p in points:
        if len(p.coords) != dim:
            raise DimensionMismatchError(
                f"point {p.id!r} has dimension {len(p.coords)}, expected {dim}"
            )
    return np.asarray([p.coords for p in points], dtype=float)


def eps_neighborhood(point: Point, points, eps: float) -> list[Point]:
    """All points within euclidean distance <= eps of ``point``.

    The boundary is inclusive; the point itself qualifies whenever it is
    part of ``points`` (its self-distance is 0). Squared distances are
    compared to avoid square-root rounding at the boundary.
    """
    check_positive("eps", eps)
    points = list(points)
    if not points:
        return []
    coords = _coord_matrix(points)
    center = np.asarray(point.coords, dtype=float)
    if center.shape != (coords.shape[1],):
        raise DimensionMismatchError(
            f"query point has dimension {center.size}, expected {coords.shape[1]}"
        )
    sq = ((coords - center) ** 2).sum(axis=1)
    return [p for p, d2 in zip(points, sq) if d2 <= eps * eps]


def normalize_minmax(points) -> list[Point]:
    """Affinely map every coordinate to [0, 1]; constant coordinates go to 0."""
    points = list(points)
    if len(points) < 2:
        raise TooFewPointsError(f"min-max normalization needs >= 2 points, got {len(points)}")
    coords = _coord_matrix(points)
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = hi - lo
    scaled = np.where(span > 0, (coords - lo) / np.where(span > 0, span, 1.0), 0.0)
    return [
        Point(id=p.id, coords=tuple(float(v) for v in row))
        for p, row in zip(points, scaled)
    ]


def dbscan(points, eps: float, min_pts: int) -> list[ClusterAssignment]:
    """Cluster points and label each CORE, BORDER, or NOISE.

    Returns one assignment per point, in sorted-id order; cluster ids
    are numbered 1..k in order of discovery. Point ids must be unique.
    """
    check_positive("eps", eps)
    if min_pts < 1:
        raise ValueError(f"min_pts must be >= 1, got {min_pts}")
    points = sorted(points, key=lambda p: p.id)
    if not points:
        raise EmptyInputError("no points to cluster")
    ids = [p.id for p in points]
    if len(set(ids)) != len(ids):
        raise ValueError("point ids must be unique")

    coords = _coord_matrix(points)
    n = len(points)
    sq = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=-1)
    eps_sq = eps * eps
    neighborhoods = [np.flatnonzero(sq[i] <= eps_sq) for i in range(n)]
    is_core = np.array([len(nb) >= min_pts for nb in neighborhoods])

    labels = [0] * n  # 0 = unassigned
    next_id = 0
    for seed in range(n):
        if labels[seed] or not is_core[seed]:
            continue
        next_id += 1
        labels[seed] = next_id
        queue = deque([seed])
        while queue:
            current = queue.popleft()
            if not is_core[current]:
                continue  # border points join the cluster but never expand it
            for neighbor in neighborhoods[current]:
                if labels[neighbor] == 0:
                    labels[neighbor] = next_id
                    queue.append(int(neighbor))

    assignments = []
    for i, point in enumerate(points):
        if is_core[i]:
            role = CORE
        elif labels[i]:
            role = BORDER
        else:
            role = NOISE
        assignments.append(
            ClusterAssignment(
                point_id=point.id,
                role=role,
                cluster_id=labels[i] if labels[i] else None,
            )
        )
    return assignments


def assignments_to_csv(assignments) -> str:
    """Render assignments as CSV: stud_id,role,cluster_id (empty for NOISE)."""
    lines = ["stud_id,role,cluster_id"]
    for a in assignments:
        cluster = "" if a.cluster_id is None else str(a.cluster_id)
        lines.append(f"{a.point_id},{a.role},{cluster}")
    return "\n".join(lines) + "\n"


def cluster_summary(assignments, points) -> dict:
    """Cluster count, sizes, noise count, and per-cluster centroids.

    Centroids are means of the original (unnormalized) coordinates, so
    a 2-D attendance/marks run reports mean attendance and mean marks
    per cluster.
    """
    by_id = {p.id: p.coords for p in points}
    members: dict[int, list] = {}
    noise = 0
    for a in assignments:
        if a.cluster_id is None:
            noise += 1
        else:
            members.setdefault(a.cluster_id, []).append(by_id[a.point_id])
    clusters = []
    for cluster_id in sorted(members):
        coords = np.asarray(members[cluster_id], dtype=float)
        centroid = coords.mean(axis=0)
        clusters.append(
            {
                "id": cluster_id,
                "size": len(members[cluster_id]),
                "centroid": {
                    "attendance": float(centroid[0]),
                    "marks": float(centroid[1]) if coords.shape[1] > 1 else None,
                },
            }
        )
    return {
        "cluster_count": len(members),
        "noise_count": noise,
        "clusters": clusters,
    }


class DbscanClusterer(BaseEstimator, ClusterMixin):
    """Estimator wrapper around :func:`dbscan`.

    Parameters
    ----------
    eps : float, default=0.1
        Neighborhood radius (inclusive). The default assumes min-max
        normalized coordinates.
    min_pts : int, default=4
        Minimum neighborhood size (the point itself counts) for a core
        point.
    normalize : bool, default=True
        Min-max normalize every coordinate to [0, 1] before clustering.
        Attendance percentages and marks live on different scales, so
        this is on by default; turn it off to cluster raw coordinates.

    Attributes
    ----------
    labels_ : ndarray of int
        Cluster id (1..k) per input row, -1 for noise.
    roles_ : ndarray of str
        CORE / BORDER / NOISE per input row.
    assignments_ : tuple of ClusterAssignment
        Assignment records aligned with the input rows.
    n_clusters_ : int
    core_sample_indices_ : ndarray of int
    """

    def __init__(self, eps=DEFAULT_EPS, min_pts=DEFAULT_MIN_PTS, normalize=True):
        self.eps = eps
        self.min_pts = min_pts
        self.normalize = normalize

    def fit(self, X, y=None):
        if isinstance(X, (list, tuple)) and X and isinstance(X[0], Point):
            points = list(X)
        else:
            matrix = as_point_matrix(X)
            points = [Point(id=i, coords=tuple(map(float, row))) for i, row in enumerate(matrix)]
        if self.normalize:
            points = normalize_minmax(points)
        assignments = dbscan(points, self.eps, self.min_pts)
        by_id = {a.point_id: a for a in assignments}
        ordered = tuple(by_id[p.id] for p in points)
        self.assignments_ = ordered
        self.labels_ = np.array(
            [a.cluster_id if a.cluster_id is not None else -1 for a in ordered], dtype=int
        )
        self.roles_ = np.array([a.role for a in ordered], dtype=object)
        self.n_clusters_ = int(self.labels_.max()) if (self.labels_ > 0).any() else 0
        self.core_sample_indices_ = np.flatnonzero(self.roles_ == CORE)
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def _check_fitted(self):
        if not hasattr(self, "labels_"):
            raise NotFittedError("this DbscanClusterer instance is not fitted yet")
