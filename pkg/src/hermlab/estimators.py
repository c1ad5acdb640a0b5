"""scikit-learn style wrappers: Hermite analysis and spectral multipliers.

Rows of X are samples.  For :class:`HermiteAnalyzer` a row is a field sampled
on the grid (flattened, C order); for :class:`HermiteMultiplier` a row is a
coefficient vector in :func:`multi_indices` order.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_samples
from .hermite_basis import (
    DEFAULTS,
    Grid,
    GridField,
    HermiteCoeffs,
    analyze,
    multi_indices,
    synthesize,
)
from .symbols import SpectralSymbol

__all__ = ["HermiteAnalyzer", "HermiteMultiplier"]


class HermiteAnalyzer(TransformerMixin, BaseEstimator):
    """Sampled fields -> Hermite coefficient vectors with |alpha| <= N.

    ``L`` and ``n`` default to the per-dimension defaults.  ``fit`` only
    builds the grid and checks the sample width.
    """

    def __init__(self, d: int = 1, N: int = 20, L: float | None = None, n: int | None = None):
        self.d = d
        self.N = N
        self.L = L
        self.n = n

    def fit(self, X, y=None):
        base = DEFAULTS.get(self.d, {})
        L = self.L if self.L is not None else base.get("L")
        n = self.n if self.n is not None else base.get("n")
        if L is None or n is None:
            raise ValueError(f"no default grid for d = {self.d}; pass L and n")
        self.grid_ = Grid(self.d, L, n)
        self.indices_ = multi_indices(self.d, self.N)
        self.n_features_in_ = self.grid_.size
        check_samples(X, self.n_features_in_)
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = check_samples(X, self.n_features_in_)
        out = np.empty((X.shape[0], len(self.indices_)), dtype=complex)
        for i, row in enumerate(X):
            f = GridField(self.grid_, row.reshape(self.grid_.shape))
            out[i] = analyze(f, self.N).vector()
        return out

    def inverse_transform(self, C):
        check_is_fitted(self, "grid_")
        C = check_samples(C, len(self.indices_), "C")
        out = np.empty((C.shape[0], self.grid_.size), dtype=complex)
        for i, row in enumerate(C):
            c = HermiteCoeffs.from_vector(self.d, self.N, row)
            out[i] = synthesize(c, self.grid_).values.ravel()
        return out


class HermiteMultiplier(TransformerMixin, BaseEstimator):
    """Coefficient vectors -> coefficients of m(H) f, i.e. c_alpha m(2|alpha| + d)."""

    def __init__(self, symbol: SpectralSymbol | None = None, d: int = 1, N: int = 20):
        self.symbol = symbol
        self.d = d
        self.N = N

    def fit(self, X=None, y=None):
        m = self.symbol if self.symbol is not None else SpectralSymbol.constant(1.0)
        idx = multi_indices(self.d, self.N)
        self.weights_ = np.asarray(m(2.0 * idx.sum(axis=1) + self.d), dtype=complex)
        if not np.all(np.isfinite(self.weights_)):
            raise ValueError("symbol is not finite on the eigenvalues")
        self.n_features_in_ = len(idx)
        if X is not None:
            check_samples(X, self.n_features_in_)
        return self

    def transform(self, X):
        check_is_fitted(self, "weights_")
        X = check_samples(X, self.n_features_in_)
        return X * self.weights_[None, :]
