"""The low-pass filter as an operator on samples and on Fourier series."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy import integrate

from .fourier_core import (Extension, FourierSeries, SampledFunction,
                      coefficients_from_samples, sample_function)
from .filter_kernels import _sinc

__all__ = [
    "FilterSpec",
    "window_average",
    "filter_samples",
    "filter_series",
    "second_derivative",
    "filtered_derivative_at",
    "filtered_value_at",
    "midpoint_limit_check",
    "commutation_residual",
    "eigenfunction_check",
    "NonConvergentTrendWarning",
    "DEFAULT_EPS_SEQUENCE",
]

DEFAULT_EPS_SEQUENCE = (0.2, 0.1, 0.05, 0.025, 0.0125)


class NonConvergentTrendWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class FilterSpec:
    """Order ``N >= 1`` and overall range ``eps > 0`` of a filter.

    Order ``N`` is ``N`` passes of the first-order filter at ``eps / N``.
    """

    order: int = 1
    range: float = 0.1

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"filter order must be an integer >= 1, got {self.order}")
        if not (math.isfinite(self.range) and self.range > 0):
            raise ValueError(f"filter range must be positive, got {self.range}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "range", float(self.range))

    @property
    def sub_range(self) -> float:
        return self.range / self.order

    def to_dict(self) -> dict:
        return {"order": self.order, "range": self.range}


def _antiderivative(f: SampledFunction, y):
    """Integral from ``lo`` to ``y`` of the piecewise-linear interpolant of ``f``."""
    v = f.samples
    h = f.spacing
    lo, hi = f.interval
    y = np.asarray(y, dtype=float)
    if f.extension is Extension.PERIODIC:
        nxt = np.roll(v, -1)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * h * (v + nxt))])
        period = hi - lo
        q = np.floor((y - lo) / period)
        r = (y - lo) - q * period
        base = q * cum[-1]
    else:
        nxt = np.append(v[1:], 0.0)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * h * (v[:-1] + v[1:]))])
        r = np.clip(y - lo, 0.0, hi - lo)
        base = 0.0
    s = r / h
    j = np.clip(np.floor(s).astype(int), 0, v.size - 1)
    if f.extension is Extension.ZERO:
        j = np.minimum(j, v.size - 2)
    t = s - j
    return base + cum[j] + h * (v[j] * t + 0.5 * (nxt[j] - v[j]) * t * t)


def window_average(f: SampledFunction, eps: float, points):
    """First-order filter of ``f`` evaluated at arbitrary ``points``.

    The window integral is exact for the linear interpolant of the
    samples, which is the trapezoid rule with fractional end cells.
    """
    x = np.asarray(points, dtype=float)
    return (_antiderivative(f, x + eps) - _antiderivative(f, x - eps)) / (2.0 * eps)


def _check_range(f: SampledFunction, spec: FilterSpec):
    h = f.spacing
    if spec.sub_range < 2 * h:
        raise ValueError(
            f"filter sub-range {spec.sub_range:.3g} is below the grid resolution (2h = {2 * h:.3g})")
    if f.extension is Extension.PERIODIC:
        half = 0.5 * (f.interval[1] - f.interval[0])
        if spec.range > half * (1 + 1e-12):
            raise ValueError(
                f"filter range {spec.range:.6g} exceeds the periodic half-width {half:.6g}")


def filter_samples(f: SampledFunction, spec: FilterSpec) -> SampledFunction:
    """Apply the order-``N`` filter to uniform samples.

    Under zero extension the output carries ``meta["edge_affected"]``, a
    boolean mask of nodes whose window reaches outside the interval.
    """
    _check_range(f, spec)
    x = f.nodes
    out = f
    for _ in range(spec.order):
        out = out.replace(window_average(out, spec.sub_range, x), meta={})
    meta = {"filter": spec.to_dict()}
    if f.extension is Extension.ZERO:
        lo, hi = f.interval
        meta["edge_affected"] = (x - lo < spec.range) | (hi - x < spec.range)
    return out.replace(out.samples, meta=meta)


def filter_series(s: FourierSeries, spec: FilterSpec) -> FourierSeries:
    """Multiply every ``k >= 1`` coefficient by ``sinc(k eps / N)``, ``N`` times.

    The mean term is untouched.  Applying the factor once per pass keeps
    repeated first-order filtering and a single higher-order call
    bit-identical.
    """
    if spec.range > s.period_half_width * (1 + 1e-12):
        raise ValueError(
            f"filter range {spec.range:.6g} exceeds the periodic half-width {s.period_half_width:.6g}")
    k = np.arange(1, s.k_max + 1)
    m = _sinc(k * spec.sub_range)
    a, b = s.cos_coeffs, s.sin_coeffs
    for _ in range(spec.order):
        a = a * m
        b = b * m
    return s.with_coeffs(a, b)


def second_derivative(s: FourierSeries) -> FourierSeries:
    """Term-wise second derivative: ``alpha_k, beta_k -> -k^2 alpha_k, -k^2 beta_k``."""
    k2 = np.arange(1, s.k_max + 1, dtype=float) ** 2
    return s.with_coeffs(-k2 * s.cos_coeffs, -k2 * s.sin_coeffs, half_mean=0.0)


def commutation_residual(s: FourierSeries, spec: FilterSpec) -> float:
    """Largest coefficient difference between filter-then-d2 and d2-then-filter."""
    if s.k_max < 1:
        raise ValueError("series needs at least one mode")
    one = second_derivative(filter_series(s, spec))
    two = filter_series(second_derivative(s), spec)
    return float(max(abs(one.half_mean - two.half_mean),
                     np.max(np.abs(one.cos_coeffs - two.cos_coeffs)),
                     np.max(np.abs(one.sin_coeffs - two.sin_coeffs))))


def filtered_derivative_at(f: Callable[[float], float], eps: float, x: float) -> float:
    """Derivative of the first-order filtered function: ``(f(x+eps) - f(x-eps)) / (2 eps)``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return (f(x + eps) - f(x - eps)) / (2 * eps)


def filtered_value_at(f: Callable[[float], float], eps: float, x: float) -> float:
    """First-order filtered value of a callable at ``x`` by adaptive quadrature.

    The window is split at ``x`` so a jump located there is integrated
    exactly.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    left, _ = integrate.quad(f, x - eps, x, limit=200)
    right, _ = integrate.quad(f, x, x + eps, limit=200)
    return (left + right) / (2 * eps)


def midpoint_limit_check(f: Callable[[float], float], x0: float,
                         eps_sequence: Sequence[float] = DEFAULT_EPS_SEQUENCE,
                         derivative: bool = False) -> float:
    """Estimate ``lim_{eps->0} f_eps(x0)`` (or of its derivative).

    Returns the value at the smallest ``eps``.  A
    :class:`NonConvergentTrendWarning` is issued when successive values
    stop settling down.
    """
    eps = np.asarray(eps_sequence, dtype=float)
    if eps.size < 4 or np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("eps_sequence must be >= 4 strictly decreasing positive values")
    if derivative:
        values = np.array([filtered_derivative_at(f, e, x0) for e in eps])
    else:
        values = np.array([filtered_value_at(f, e, x0) for e in eps])
    steps = np.abs(np.diff(values))
    scale = max(1.0, float(np.max(np.abs(values))))
    if steps[-1] > 1e-9 * scale and steps[-1] > steps[0]:
        warnings.warn(f"filtered values at x0={x0} do not settle: {values.tolist()}",
                      NonConvergentTrendWarning, stacklevel=2)
    return float(values[-1])


def eigenfunction_check(k: int, eps: float, n_samples: int = 8192) -> Tuple[float, float]:
    """Amplitude ratios of filtered ``cos(kx)`` and ``sin(kx)`` on [-pi, pi].

    Both should equal ``sin(k eps)/(k eps)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 < eps <= math.pi:
        raise ValueError("eps must satisfy 0 < eps <= pi")
    spec = FilterSpec(1, eps)
    ratios = []
    for fn in (np.cos, np.sin):
        f = sample_function(lambda x: fn(k * x), n_samples)
        g = filter_samples(f, spec)
        ratios.append(float(g.samples @ f.samples / (f.samples @ f.samples)))
    return ratios[0], ratios[1]


def sampled_series_filter(f: SampledFunction, spec: FilterSpec, k_max: int) -> Tuple[FourierSeries, FourierSeries]:
    """Both routes to the filtered coefficients: quadrature then multiplier, and vice versa."""
    via_samples = coefficients_from_samples(filter_samples(f, spec), k_max)
    via_multiplier = filter_series(coefficients_from_samples(f, k_max), spec)
    return via_samples, via_multiplier
