"""Truncated trigonometric series on [-pi, pi] and coefficient diagnostics.

A series is stored as ``alpha_0`` (the constant term of the series is
``alpha_0 / 2``) plus two equally long coefficient arrays for
``cos(kx)`` and ``sin(kx)``, ``k = 1..k_max``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

__all__ = [
    "FourierSeries",
    "Extension",
    "SampledFunction",
    "Convergence",
    "ConvergenceReport",
    "evaluate",
    "coefficients_from_samples",
    "classify_convergence",
    "sample_function",
    "AliasingError",
    "DEFAULT_KMAX",
    "DEFAULT_SAMPLES",
    "TAIL_FRACTION",
]

DEFAULT_KMAX = 512
DEFAULT_SAMPLES = 4096

# classification thresholds on the fitted decay exponent
TAIL_FRACTION = 0.5
ABSOLUTE_EXPONENT = 1.5
POINTWISE_EXPONENT = 0.5
GROWTH_RATIO = 1.1


class AliasingError(ValueError):
    """Raised when a grid is too coarse for the requested number of modes."""


@dataclass(frozen=True, eq=False)
class FourierSeries:
    half_mean: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray
    period_half_width: float = math.pi

    def __post_init__(self):
        a = np.array(self.cos_coeffs, dtype=float).ravel()
        b = np.array(self.sin_coeffs, dtype=float).ravel()
        if a.shape != b.shape:
            raise ValueError(
                f"cos_coeffs and sin_coeffs differ in length ({a.size} != {b.size})"
            )
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))
                and math.isfinite(self.half_mean)):
            raise ValueError("series coefficients must be finite")
        if not self.period_half_width > 0:
            raise ValueError("period_half_width must be positive")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "half_mean", float(self.half_mean))
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)

    @property
    def k_max(self) -> int:
        return self.cos_coeffs.size

    @classmethod
    def zeros(cls, k_max: int) -> "FourierSeries":
        return cls(0.0, np.zeros(k_max), np.zeros(k_max))

    @classmethod
    def from_modes(cls, k_max: int, half_mean: float = 0.0,
                   cos: Optional[Mapping[int, float]] = None,
                   sin: Optional[Mapping[int, float]] = None) -> "FourierSeries":
        """Build a series from sparse ``{k: coefficient}`` maps."""
        a = np.zeros(k_max)
        b = np.zeros(k_max)
        for k, v in (cos or {}).items():
            a[k - 1] = v
        for k, v in (sin or {}).items():
            b[k - 1] = v
        return cls(half_mean, a, b)

    def with_coeffs(self, cos_coeffs, sin_coeffs, half_mean=None) -> "FourierSeries":
        return FourierSeries(self.half_mean if half_mean is None else half_mean,
                             cos_coeffs, sin_coeffs, self.period_half_width)

    def magnitudes(self) -> np.ndarray:
        """Combined coefficient magnitude ``max(|alpha_k|, |beta_k|)``."""
        return np.maximum(np.abs(self.cos_coeffs), np.abs(self.sin_coeffs))

    def __eq__(self, other):
        if not isinstance(other, FourierSeries):
            return NotImplemented
        return (self.half_mean == other.half_mean
                and self.period_half_width == other.period_half_width
                and np.array_equal(self.cos_coeffs, other.cos_coeffs)
                and np.array_equal(self.sin_coeffs, other.sin_coeffs))

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            "half_mean": self.half_mean,
            "cos": self.cos_coeffs.tolist(),
            "sin": self.sin_coeffs.tolist(),
            "period_half_width": self.period_half_width,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "FourierSeries":
        return cls(d["half_mean"], d["cos"], d["sin"],
                   d.get("period_half_width", math.pi))


def evaluate(series: FourierSeries, x, k_upto: Optional[int] = None):
    """Partial sum of ``series`` at ``x`` using modes ``1..k_upto``.

    ``x`` may be a scalar or an array; terms are accumulated with k
    ascending.
    """
    if k_upto is None:
        k_upto = series.k_max
    if not 0 <= k_upto <= series.k_max:
        raise ValueError(f"k_upto={k_upto} outside [0, {series.k_max}]")
    xa = np.asarray(x, dtype=float)
    total = np.full(xa.shape, 0.5 * series.half_mean)
    for k in range(1, k_upto + 1):
        a = series.cos_coeffs[k - 1]
        b = series.sin_coeffs[k - 1]
        if a:
            total = total + a * np.cos(k * xa)
        if b:
            total = total + b * np.sin(k * xa)
    return float(total) if total.ndim == 0 else total


class Extension(enum.Enum):
    PERIODIC = "periodic"
    ZERO = "zero"


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Uniform samples of a real function on ``[lo, hi]``.

    Periodic samples sit at ``lo + i*h`` with ``h = (hi - lo)/M`` and ``hi``
    excluded; zero-extended samples include both endpoints,
    ``h = (hi - lo)/(M - 1)``.
    """

    samples: np.ndarray
    interval: tuple
    extension: Extension = Extension.PERIODIC
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float).ravel()
        lo, hi = (float(v) for v in self.interval)
        if s.size < 2:
            raise ValueError("need at least two samples")
        if not lo < hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "interval", (lo, hi))
        object.__setattr__(self, "extension", Extension(self.extension))

    @property
    def size(self) -> int:
        return self.samples.size

    @property
    def spacing(self) -> float:
        lo, hi = self.interval
        n = self.size if self.extension is Extension.PERIODIC else self.size - 1
        return (hi - lo) / n

    @property
    def nodes(self) -> np.ndarray:
        return self.interval[0] + self.spacing * np.arange(self.size)

    def replace(self, samples, meta=None) -> "SampledFunction":
        return SampledFunction(samples, self.interval, self.extension,
                               dict(self.meta) if meta is None else meta)


def sample_function(f, n: int = DEFAULT_SAMPLES, interval=(-math.pi, math.pi),
                    extension=Extension.PERIODIC) -> SampledFunction:
    """Sample a vectorised callable on the node convention of ``extension``."""
    ext = Extension(extension)
    lo, hi = interval
    if ext is Extension.PERIODIC:
        x = lo + (hi - lo) / n * np.arange(n)
    else:
        x = np.linspace(lo, hi, n)
    return SampledFunction(np.broadcast_to(f(x), x.shape), (lo, hi), ext)


def coefficients_from_samples(f: SampledFunction, k_max: int = DEFAULT_KMAX) -> FourierSeries:
    """Trapezoidal-rule Fourier coefficients of periodic samples on [-pi, pi]."""
    if f.extension is not Extension.PERIODIC:
        raise ValueError("coefficients need periodic samples")
    lo, hi = f.interval
    if not (math.isclose(lo, -math.pi) and math.isclose(hi, math.pi)):
        raise ValueError(f"coefficients need the interval [-pi, pi], got [{lo}, {hi}]")
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    m = f.size
    if m < 4 * k_max:
        raise AliasingError(f"{m} samples cannot resolve k_max={k_max}; need at least {4 * k_max}")
    # Trapezoid on a periodic grid == scaled DFT; the -pi offset adds (-1)^k.
    spec = np.fft.rfft(f.samples)
    k = np.arange(k_max + 1)
    coeff = spec[: k_max + 1] * (2.0 / m) * np.where(k % 2 == 0, 1.0, -1.0)
    return FourierSeries(coeff[0].real, coeff[1:].real, -coeff[1:].imag)


class Convergence(enum.Enum):
    ABSOLUTE_UNIFORM = "absolute-uniform"
    POINTWISE_ONLY = "pointwise-only"
    DIVERGENT_BOUNDED = "divergent-bounded-coeffs"
    DIVERGENT_GROWING = "divergent-growing-coeffs"

    @property
    def rank(self) -> int:
        """0 for the best-behaved class, 3 for the worst."""
        return list(Convergence).index(self)


@dataclass(frozen=True)
class ConvergenceReport:
    classification: Convergence
    decay_exponent: float
    tail_fraction: float = TAIL_FRACTION
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "decay_exponent": self.decay_exponent,
            "tail_fraction": self.tail_fraction,
            "notes": self.notes,
        }


def _loglog_slope(k, c):
    keep = c > 0
    if keep.sum() < 2:
        return 0.0
    return float(np.polyfit(np.log(k[keep]), np.log(c[keep]), 1)[0])


def classify_convergence(series, tail_fraction: float = TAIL_FRACTION) -> ConvergenceReport:
    """Classify a series by how its coefficient magnitudes decay.

    The decay exponent ``p`` is minus the log-log slope of the upper
    envelope (suffix maximum) of ``c_k = max(|alpha_k|, |beta_k|)`` over
    the last ``tail_fraction`` of the modes.  Classes:

    * ``p >= 1.5``: absolutely and uniformly convergent
    * ``0.5 <= p < 1.5``: pointwise convergence only
    * ``p < 0.5``: divergent, with bounded or growing coefficients

    ``series`` may also be a plain array of magnitudes ``c_1..c_kmax``.
    """
    if not 0 < tail_fraction < 1:
        raise ValueError("tail_fraction must lie in (0, 1)")
    c = series.magnitudes() if isinstance(series, FourierSeries) else np.abs(np.asarray(series, float))
    k_max = c.size
    if k_max < 32:
        raise ValueError(f"need k_max >= 32 for a tail fit, got {k_max}")
    if not np.any(c):
        return ConvergenceReport(Convergence.ABSOLUTE_UNIFORM, math.inf, tail_fraction, "zero series")

    start = int(math.floor((1.0 - tail_fraction) * k_max))
    tail = c[start:]
    k = np.arange(start + 1, k_max + 1, dtype=float)
    if not np.any(tail):
        return ConvergenceReport(Convergence.ABSOLUTE_UNIFORM, math.inf, tail_fraction,
                                 "tail vanishes identically")

    half = tail.size // 2
    first, second = tail[:half].max(), tail[half:].max()
    if second > GROWTH_RATIO * first:
        p = -_loglog_slope(k, tail)
        return ConvergenceReport(Convergence.DIVERGENT_GROWING, p, tail_fraction,
                                 f"tail maximum grows by {second / first:.3g}x")

    envelope = np.maximum.accumulate(tail[::-1])[::-1]
    p = -_loglog_slope(k, envelope)
    if p >= ABSOLUTE_EXPONENT:
        cls = Convergence.ABSOLUTE_UNIFORM
    elif p >= POINTWISE_EXPONENT:
        cls = Convergence.POINTWISE_ONLY
    else:
        cls = Convergence.DIVERGENT_BOUNDED
    return ConvergenceReport(cls, p, tail_fraction)
