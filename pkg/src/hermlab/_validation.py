"""Input checks for the estimator wrappers.

sklearn's ``check_array`` rejects complex input, and Hermite coefficients and
sampled fields are complex, so the estimators use this small replacement.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError


def check_samples(X, n_features: int | None = None, name: str = "X") -> np.ndarray:
    """2-D complex array of shape (n_samples, n_features) with finite entries."""
    X = np.asarray(X)
    if X.dtype == object or not np.issubdtype(X.dtype, np.number):
        raise TypeError(f"{name} must be numeric, got dtype {X.dtype}")
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError(f"{name} has no samples")
    if n_features is not None and X.shape[1] != n_features:
        raise DimensionMismatchError(
            f"{name} has {X.shape[1]} features, expected {n_features}"
        )
    X = X.astype(complex, copy=False)
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X
