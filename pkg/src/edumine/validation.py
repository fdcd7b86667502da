"""Input validation helpers for the estimator-style interfaces."""

import numpy as np

from .exceptions import DimensionMismatchError, EmptyInputError


def as_point_matrix(X):
    """Coerce 2-D numeric input to a float ndarray of shape (n, d).

    Accepts anything ``np.asarray`` understands (lists, tuples, ndarrays,
    DataFrames). Raises on empty input, ragged rows, or non-finite values.
    """
    try:
        arr = np.asarray(X, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatchError(f"could not coerce input to floats: {exc}") from exc
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D array of points, got ndim={arr.ndim}")
    if arr.shape[0] == 0:
        raise EmptyInputError("no points given")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def as_records(X):
    """Coerce row-wise categorical input to a list of plain dicts.

    Accepts a pandas DataFrame, a sequence of mappings, or a 2-D
    array-like (columns are then named x0, x1, ...). Values are kept as
    given; callers decide whether to stringify.
    """
    if hasattr(X, "to_dict"):  # pandas DataFrame without importing pandas
        return X.to_dict("records")
    rows = list(X)
    if not rows:
        return []
    if all(hasattr(r, "keys") for r in rows):
        return [dict(r) for r in rows]
    out = []
    for row in rows:
        values = list(row)
        out.append({f"x{i}": v for i, v in enumerate(values)})
    return out


def check_positive(name, value):
    if not value > 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return value


def check_unit_interval(name, value, open_ends=False):
    ok = 0.0 < value < 1.0 if open_ends else 0.0 <= value <= 1.0
    if not ok:
        bounds = "(0, 1)" if open_ends else "[0, 1]"
        raise ValueError(f"{name} must lie in {bounds}, got {value!r}")
    return value
