"""scikit-learn transformers wrapping the filter operations.

Each row of ``X`` is one signal: uniform samples for :class:`LowPassFilter`
and :class:`FourierCoefficients`, a packed coefficient vector
``[alpha_0, alpha_1..alpha_K, beta_1..beta_K]`` for
:class:`SeriesLowPassFilter`.  All three are stateless; ``fit`` only
validates parameters and records the input width.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .filter_ops import FilterSpec, filter_samples, filter_series
from .fourier_core import (DEFAULT_KMAX, Extension, FourierSeries, SampledFunction,
                           coefficients_from_samples)

__all__ = ["LowPassFilter", "FourierCoefficients", "SeriesLowPassFilter",
           "pack_series", "unpack_series"]


def pack_series(s: FourierSeries) -> np.ndarray:
    return np.concatenate([[s.half_mean], s.cos_coeffs, s.sin_coeffs])


def unpack_series(row) -> FourierSeries:
    row = np.asarray(row, dtype=float)
    if row.size % 2 == 0:
        raise ValueError(f"packed series must have odd length 1 + 2K, got {row.size}")
    k = (row.size - 1) // 2
    return FourierSeries(row[0], row[1:k + 1], row[k + 1:])


class LowPassFilter(TransformerMixin, BaseEstimator):
    """Order-``order`` moving-average filter applied to each row of samples.

    Parameters
    ----------
    order : int, default=1
        Number of first-order passes, each of range ``epsilon / order``.
    epsilon : float, default=0.1
        Overall filter range in the units of ``interval``.
    interval : tuple of float, default=(-pi, pi)
    extension : {"periodic", "zero"}, default="periodic"
        Node convention and the extension used outside the interval.

    Examples
    --------
    >>> import numpy as np
    >>> x = np.linspace(-1, 1, 201)
    >>> LowPassFilter(epsilon=0.1, interval=(-1, 1), extension="zero").fit_transform(
    ...     (2 + 3 * x)[None, :])[0, 100]
    2.0
    """

    def __init__(self, order=1, epsilon=0.1, interval=(-math.pi, math.pi), extension="periodic"):
        self.order = order
        self.epsilon = epsilon
        self.interval = interval
        self.extension = extension

    def _spec(self):
        Extension(self.extension)
        return FilterSpec(self.order, self.epsilon)

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=2)
        self._spec()
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, ensure_min_features=2)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} samples per row, expected {self.n_features_in_}")
        spec = self._spec()
        out = np.empty_like(X)
        for i, row in enumerate(X):
            f = SampledFunction(row, tuple(self.interval), self.extension)
            out[i] = filter_samples(f, spec).samples
        return out


class FourierCoefficients(TransformerMixin, BaseEstimator):
    """Trapezoid-rule Fourier coefficients of periodic samples on [-pi, pi].

    Output rows are packed as ``[alpha_0, alpha_1..alpha_K, beta_1..beta_K]``.
    """

    def __init__(self, k_max=DEFAULT_KMAX):
        self.k_max = k_max

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=2)
        if X.shape[1] < 4 * self.k_max:
            raise ValueError(f"{X.shape[1]} samples per row cannot resolve k_max={self.k_max}")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, ensure_min_features=2)
        return np.vstack([
            pack_series(coefficients_from_samples(
                SampledFunction(row, (-math.pi, math.pi)), self.k_max))
            for row in X
        ])


class SeriesLowPassFilter(TransformerMixin, BaseEstimator):
    """Sinc multiplier of an order-``order`` filter applied to packed coefficients."""

    def __init__(self, order=1, epsilon=0.1):
        self.order = order
        self.epsilon = epsilon

    def fit(self, X, y=None):
        X = check_array(X)
        FilterSpec(self.order, self.epsilon)
        if X.shape[1] % 2 == 0:
            raise ValueError("packed series rows must have odd length 1 + 2K")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X)
        spec = FilterSpec(self.order, self.epsilon)
        return np.vstack([pack_series(filter_series(unpack_series(row), spec)) for row in X])
