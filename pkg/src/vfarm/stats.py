"""Distance correlation between scenario inputs and outcome indicators.

Distance correlation captures nonlinear and mixed-type association: each
column becomes a pairwise-distance matrix (absolute difference for numbers,
the discrete 0/1 metric for categories), matrices are double-centered, and
the correlation is the normalized inner product of the centered matrices.
The biased 1/n^2 estimator is used throughout.
"""

from __future__ import annotations

import numbers

import numpy as np

from .errors import ConfigError, DomainError


def _as_column(values):
    """Classify a column as numeric or categorical.

    Returns ``(array, is_numeric)``.  A column mixing numbers and
    non-numbers is rejected.
    """
    items = list(values)
    if len(items) < 2:
        raise DomainError("columns need at least two observations")
    numeric_flags = [isinstance(v, numbers.Real) and not isinstance(v, bool)
                     for v in items]
    if all(numeric_flags):
        return np.asarray(items, dtype=float), True
    if any(numeric_flags):
        raise TypeError("column mixes numeric and categorical values")
    return np.asarray(items, dtype=object), False


def distance_matrix(values) -> np.ndarray:
    """Pairwise distances of one column.

    Numeric columns use absolute differences; categorical columns (strings,
    booleans, any non-numeric labels) the discrete metric: 0 if equal,
    1 otherwise.
    """
    arr, is_numeric = _as_column(values)
    if is_numeric:
        return np.abs(arr[:, None] - arr[None, :])
    return (arr[:, None] != arr[None, :]).astype(float)


def double_center(d: np.ndarray) -> np.ndarray:
    """Subtract row means, column means and add back the grand mean.

    Row and column sums of the result vanish identically.
    """
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {d.shape}")
    if not np.allclose(d, d.T, atol=1e-9):
        raise DomainError("distance matrix must be symmetric")
    row = d.mean(axis=1, keepdims=True)
    col = d.mean(axis=0, keepdims=True)
    return d - row - col + d.mean()


def dcorr_flagged(x, y):
    """Distance correlation in [0, 1] plus a degeneracy flag.

    The flag is True when either column is constant (zero distance
    variance); the correlation is reported as 0 in that case.
    """
    a = double_center(distance_matrix(x))
    b = double_center(distance_matrix(y))
    if a.shape != b.shape:
        raise DomainError(
            f"column lengths differ: {a.shape[0]} vs {b.shape[0]}"
        )
    dcov2 = float(np.mean(a * b))
    dvar_x = float(np.mean(a * a))
    dvar_y = float(np.mean(b * b))
    if dvar_x <= 0.0 or dvar_y <= 0.0:
        return 0.0, True
    ratio = max(dcov2, 0.0) / np.sqrt(dvar_x * dvar_y)
    return float(np.sqrt(min(max(ratio, 0.0), 1.0))), False


def dcorr(x, y) -> float:
    """Distance correlation in [0, 1]; 0 for a constant column."""
    rho, _ = dcorr_flagged(x, y)
    return rho


def sensitivity_table(columns: dict, inputs, outcomes):
    """Cross table of dcorr(input, outcome) over named columns.

    Returns rows ``(input, outcome, rho)`` in the given order; unknown names
    raise a configuration error listing what is available.
    """
    names = list(inputs) + list(outcomes)
    missing = [n for n in names if n not in columns]
    if missing:
        known = ", ".join(sorted(columns))
        raise ConfigError(f"unknown columns {missing}; available: {known}")
    lengths = {n: len(columns[n]) for n in names}
    if len(set(lengths.values())) > 1:
        raise DomainError(f"column lengths differ: {lengths}")
    rows = []
    for inp in inputs:
        for out in outcomes:
            rows.append((inp, out, dcorr(columns[inp], columns[out])))
    return rows
