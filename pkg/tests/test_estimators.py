import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from fourier_lowpass.estimators import (FourierCoefficients, LowPassFilter, SeriesLowPassFilter,
                                        pack_series, unpack_series)
from fourier_lowpass.filter_ops import FilterSpec, filter_samples
from fourier_lowpass.fourier_core import FourierSeries, sample_function


def test_get_set_params_and_clone():
    est = LowPassFilter(order=2, epsilon=0.3)
    assert est.get_params() == {"order": 2, "epsilon": 0.3,
                                "interval": (-math.pi, math.pi), "extension": "periodic"}
    other = clone(est).set_params(epsilon=0.1)
    assert other.epsilon == 0.1 and est.epsilon == 0.3


def test_low_pass_matches_functional_api():
    f = sample_function(np.sign, 1024)
    out = LowPassFilter(order=2, epsilon=0.4).fit_transform(np.vstack([f.samples, -f.samples]))
    ref = filter_samples(f, FilterSpec(2, 0.4)).samples
    np.testing.assert_array_equal(out[0], ref)
    np.testing.assert_array_equal(out[1], -ref)


def test_low_pass_validation():
    with pytest.raises(NotFittedError):
        LowPassFilter().transform(np.zeros((1, 64)))
    with pytest.raises(ValueError):
        LowPassFilter(order=0).fit(np.zeros((1, 64)))
    with pytest.raises(ValueError):
        LowPassFilter(extension="mirror").fit(np.zeros((1, 64)))
    est = LowPassFilter(epsilon=0.2).fit(np.zeros((1, 256)))
    with pytest.raises(ValueError):
        est.transform(np.zeros((1, 128)))
    with pytest.raises(ValueError):
        est.fit(np.array([[np.nan] * 256]))


def test_zero_extension_doctest_case():
    x = np.linspace(-1, 1, 201)
    est = LowPassFilter(epsilon=0.1, interval=(-1, 1), extension="zero")
    assert est.fit_transform((2 + 3 * x)[None, :])[0, 100] == pytest.approx(2.0, abs=1e-12)


def test_pipeline_samples_to_filtered_coefficients():
    f = sample_function(lambda x: np.cos(3 * x), 4096)
    pipe = make_pipeline(FourierCoefficients(k_max=8), SeriesLowPassFilter(epsilon=0.5))
    row = pipe.fit_transform(f.samples[None, :])[0]
    s = unpack_series(row)
    assert s.cos_coeffs[2] == pytest.approx(0.664997, abs=1e-6)


def test_packing_roundtrip():
    s = FourierSeries(0.5, [1.0, 2.0], [3.0, 4.0])
    assert unpack_series(pack_series(s)) == s
    with pytest.raises(ValueError):
        unpack_series([1.0, 2.0])


def test_coefficients_guard_aliasing():
    with pytest.raises(ValueError):
        FourierCoefficients(k_max=64).fit(np.zeros((1, 128)))


def test_series_filter_requires_odd_width():
    with pytest.raises(ValueError):
        SeriesLowPassFilter().fit(np.zeros((1, 4)))
