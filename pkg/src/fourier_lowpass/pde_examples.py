"""Separated-variable series solutions of three boundary-value problems.

* plucked string, wave equation on ``[0, L]``: ``f(x, t)``
* potential in a rectangular box, Laplace on ``[0, L] x [0, h]``: ``phi(x, y)``
* stationary heat in a cylinder, Laplace in polar coordinates: ``u(r, theta)``

All three are sums over odd modes ``k = 2j + 1``.  A filter of range
``eps`` enters only as the per-mode factor ``sin(pi k eps/L)/(pi k eps/L)``
(string, box) or ``sin(k eps)/(k eps)`` (cylinder, angular range).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional, Tuple

import numpy as np

from .fourier_core import ConvergenceReport, FourierSeries, SampledFunction, classify_convergence
from .filter_kernels import DivergentSeriesError, _sinc

__all__ = [
    "Problem",
    "Field",
    "Curve",
    "ModalSolution",
    "FieldQuery",
    "make_solution",
    "evaluate_field",
    "field_values",
    "partial_sums",
    "mode_coefficients",
    "string_acceleration_traveling",
    "box_Ex_top_pair_form",
    "cylinder_flux_pair_form",
    "divergence_scan",
    "ScanReport",
    "initial_position_series",
    "plucked_triangle",
    "plucked_triangle_samples",
    "mode_residuals",
    "DivergentSeriesWarning",
    "DEFAULT_MODES",
    "DEFAULT_SCAN_MODES",
]

DEFAULT_MODES = 2048
DEFAULT_SCAN_MODES = 8192

# Cauchy diagnostic thresholds
OSCILLATION_THRESHOLD = 1e-3
DECAY_RATIO = 0.75
GROWTH_THRESHOLD = 0.05

_CHUNK = 128


class Problem(enum.Enum):
    STRING = "string"
    BOX = "box"
    CYLINDER = "cylinder"


class Field(enum.Enum):
    POSITION = "position"
    VELOCITY = "velocity"
    ACCELERATION = "acceleration"
    POTENTIAL = "potential"
    EX = "ex"
    EY = "ey"
    TEMPERATURE = "temperature"
    FLUX_R = "flux_r"
    FLUX_THETA = "flux_theta"


class Curve(enum.Enum):
    TOP_SURFACE = "top"            # box, y = h
    CYLINDER_SURFACE = "surface"   # cylinder, r = r0
    TIME_SLICE = "time"            # string, fixed t


FIELDS = {
    Problem.STRING: (Field.POSITION, Field.VELOCITY, Field.ACCELERATION),
    Problem.BOX: (Field.POTENTIAL, Field.EX, Field.EY),
    Problem.CYLINDER: (Field.TEMPERATURE, Field.FLUX_R, Field.FLUX_THETA),
}

DEFAULT_PARAMETERS = {
    Problem.STRING: {"h": 1.0, "L": 1.0, "nu": 1.0},
    Problem.BOX: {"V0": 1.0, "L": 1.0, "h": 1.0},
    Problem.CYLINDER: {"u0": 1.0, "r0": 1.0, "cmk": 1.0},
}


class DivergentSeriesWarning(RuntimeWarning):
    """Partial sums of a divergent series were returned on request."""


@dataclass(frozen=True)
class ModalSolution:
    problem: Problem
    parameters: Mapping[str, float]
    filter_range: float = 0.0
    modes: int = DEFAULT_MODES

    @property
    def k(self) -> np.ndarray:
        return 2 * np.arange(self.modes) + 1

    @property
    def filtered(self) -> bool:
        return self.filter_range > 0

    @property
    def canonical_range(self) -> float:
        """Filter range in the angle variable: ``pi eps / L``, or ``eps`` for the cylinder."""
        if self.problem is Problem.CYLINDER:
            return self.filter_range
        return math.pi * self.filter_range / self.parameters["L"]

    def filter_factor(self, k) -> np.ndarray:
        if not self.filtered:
            return np.ones(np.shape(k))
        return _sinc(k * self.canonical_range)

    def manifest(self) -> dict:
        return {"problem": self.problem.value, "parameters": dict(self.parameters),
                "filter_range": self.filter_range, "modes": self.modes}


@dataclass(frozen=True)
class FieldQuery:
    field: Field
    point: Tuple[float, float]


def make_solution(problem, parameters: Optional[Mapping[str, float]] = None,
                  eps: float = 0.0, modes: int = DEFAULT_MODES) -> ModalSolution:
    """Validated solution family; unspecified parameters default to 1."""
    problem = Problem(problem)
    params = dict(DEFAULT_PARAMETERS[problem])
    for name, value in (parameters or {}).items():
        if name not in params:
            raise ValueError(f"unknown parameter {name!r} for {problem.value}; "
                             f"expected one of {sorted(params)}")
        params[name] = float(value)
    for name, value in params.items():
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"parameter {name} must be positive, got {value}")
    eps = float(eps)
    if not (math.isfinite(eps) and eps >= 0):
        raise ValueError(f"filter range must be >= 0, got {eps}")
    if problem is Problem.CYLINDER:
        if eps >= math.pi / 2:
            raise ValueError(f"angular filter range must be < pi/2, got {eps}")
    elif eps >= params["L"] / 2:
        raise ValueError(f"filter range must be < L/2 = {params['L'] / 2}, got {eps}")
    if int(modes) != modes or modes < 1:
        raise ValueError(f"modes must be a positive integer, got {modes}")
    return ModalSolution(problem, MappingProxyType(params), eps, int(modes))


def mode_coefficients(s: ModalSolution, fld: Field, modes_upto: Optional[int] = None) -> np.ndarray:
    """Point-independent coefficient of every odd mode, filter factor included.

    The matching basis functions are bounded by one (up to ``coth`` for the
    box field ``E_y``), see :func:`_basis`.
    """
    _check_field(s, fld)
    k = s.k[: _modes(s, modes_upto)].astype(float)
    sign = np.where((k // 2) % 2 == 0, 1.0, -1.0)  # (-1)^j
    p = s.parameters
    if s.problem is Problem.STRING:
        h, L, nu = p["h"], p["L"], p["nu"]
        base = {
            Field.POSITION: 8 * h / math.pi**2 * sign / k**2,
            Field.VELOCITY: -8 * h * nu / (math.pi * L) * sign / k,
            Field.ACCELERATION: -8 * h * nu**2 / L**2 * sign,
        }[fld]
    elif s.problem is Problem.BOX:
        V0, L = p["V0"], p["L"]
        base = {
            Field.POTENTIAL: 4 * V0 / math.pi / k,
            Field.EX: np.full(k.shape, -4 * V0 / L),
            Field.EY: np.full(k.shape, -4 * V0 / L),
        }[fld]
    else:
        u0, r0, c = p["u0"], p["r0"], p["cmk"]
        base = {
            Field.TEMPERATURE: 4 * u0 / math.pi / k,
            Field.FLUX_R: np.full(k.shape, -4 * c * u0 / (math.pi * r0)),
            Field.FLUX_THETA: np.full(k.shape, -4 * c * u0 / (math.pi * r0)),
        }[fld]
    return base * s.filter_factor(k)


def _sinh_ratio(a, y, h):
    """``sinh(a y)/sinh(a h)`` without overflow."""
    return np.exp(a * (y - h)) * (-np.expm1(-2 * a * y)) / (-np.expm1(-2 * a * h))


def _cosh_sinh_ratio(a, y, h):
    """``cosh(a y)/sinh(a h)`` without overflow."""
    return np.exp(a * (y - h)) * (1 + np.exp(-2 * a * y)) / (-np.expm1(-2 * a * h))


def _per_value(values, fn):
    """``fn`` on the distinct entries of ``values`` only, scattered back by row."""
    uniq, inv = np.unique(values, return_inverse=True)
    return fn(uniq[:, None])[inv.ravel()]


def _basis(s: ModalSolution, fld: Field, p1, p2, k) -> np.ndarray:
    """Basis values, shape ``(points, modes)``."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    k = np.asarray(k, dtype=float)[None, :]
    prm = s.parameters
    if s.problem is Problem.STRING:
        a = math.pi * k / prm["L"]
        tfn = np.sin if fld is Field.VELOCITY else np.cos
        time = _per_value(p2, lambda t: tfn(a * prm["nu"] * t))
        return time * np.sin(a * p1[:, None])
    if s.problem is Problem.BOX:
        a = math.pi * k / prm["L"]
        h = prm["h"]
        ratio = _cosh_sinh_ratio if fld is Field.EY else _sinh_ratio
        vertical = _per_value(p2, lambda y: ratio(a, y, h))
        xfn = np.cos if fld is Field.EX else np.sin
        return xfn(a * p1[:, None]) * vertical
    shift = 0.0 if fld is Field.TEMPERATURE else 1.0
    radial = _per_value(p1 / prm["r0"], lambda rho: rho ** (k - shift))
    afn = np.cos if fld is Field.FLUX_THETA else np.sin
    return radial * afn(k * p2[:, None])


def _modes(s: ModalSolution, modes_upto: Optional[int]) -> int:
    if modes_upto is None:
        return s.modes
    if not 1 <= modes_upto <= s.modes:
        raise ValueError(f"modes_upto must lie in [1, {s.modes}], got {modes_upto}")
    return int(modes_upto)


def _check_field(s: ModalSolution, fld: Field):
    if fld not in FIELDS[s.problem]:
        raise ValueError(f"field {fld.value} does not belong to the {s.problem.value} problem")


def _check_domain(s: ModalSolution, p1, p2):
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    prm = s.parameters
    tol = 1e-12
    if s.problem is Problem.STRING:
        L = prm["L"]
        if np.any(p1 < -tol * L) or np.any(p1 > L * (1 + tol)) or np.any(p2 < 0):
            raise ValueError("string queries need 0 <= x <= L and t >= 0")
    elif s.problem is Problem.BOX:
        L, h = prm["L"], prm["h"]
        if (np.any(p1 < -tol * L) or np.any(p1 > L * (1 + tol))
                or np.any(p2 < -tol * h) or np.any(p2 > h * (1 + tol))):
            raise ValueError("box queries need 0 <= x <= L and 0 <= y <= h")
    else:
        r0 = prm["r0"]
        if (np.any(p1 < 0) or np.any(p1 > r0 * (1 + tol))
                or np.any(np.abs(p2) > math.pi * (1 + tol))):
            raise ValueError("cylinder queries need 0 <= r <= r0 and -pi <= theta <= pi")


def _divergent_at(s: ModalSolution, fld: Field, p1, p2) -> bool:
    if s.filtered:
        return False
    prm = s.parameters
    if fld is Field.ACCELERATION:
        return True
    if fld in (Field.EX, Field.EY):
        return bool(np.any(np.isclose(np.asarray(p2, float), prm["h"], rtol=1e-12, atol=0)))
    if fld in (Field.FLUX_R, Field.FLUX_THETA):
        return bool(np.any(np.isclose(np.asarray(p1, float), prm["r0"], rtol=1e-12, atol=0)))
    return False


def _guard(s, fld, p1, p2, acknowledge_divergent):
    _check_field(s, fld)
    _check_domain(s, p1, p2)
    if _divergent_at(s, fld, p1, p2):
        if not acknowledge_divergent:
            raise DivergentSeriesError(
                f"the unfiltered {fld.value} series diverges here; "
                "pass acknowledge_divergent=True to get partial sums")
        warnings.warn(f"partial sums of the divergent unfiltered {fld.value} series",
                      DivergentSeriesWarning, stacklevel=3)


def field_values(s: ModalSolution, fld, p1, p2, modes_upto: Optional[int] = None,
                 acknowledge_divergent: bool = False) -> np.ndarray:
    """Partial sums of a field at many points ``(p1[i], p2[i])``."""
    fld = Field(fld)
    p1, p2 = np.broadcast_arrays(np.atleast_1d(np.asarray(p1, float)),
                                 np.atleast_1d(np.asarray(p2, float)))
    _guard(s, fld, p1, p2, acknowledge_divergent)
    n = _modes(s, modes_upto)
    coef = mode_coefficients(s, fld, n)
    k = s.k[:n]
    out = np.empty(p1.size)
    for i in range(0, p1.size, _CHUNK):
        sl = slice(i, i + _CHUNK)
        out[sl] = _basis(s, fld, p1.ravel()[sl], p2.ravel()[sl], k) @ coef
    return out.reshape(p1.shape)


def evaluate_field(s: ModalSolution, q: FieldQuery, modes_upto: Optional[int] = None,
                   acknowledge_divergent: bool = False) -> float:
    """Partial sum of the requested field series at one point."""
    p1, p2 = q.point
    return float(field_values(s, q.field, [p1], [p2], modes_upto, acknowledge_divergent)[0])


def partial_sums(s: ModalSolution, fld, point, modes_upto: Optional[int] = None,
                 acknowledge_divergent: bool = False) -> np.ndarray:
    """Running partial sums ``S_1..S_n`` at one point."""
    fld = Field(fld)
    p1, p2 = point
    _guard(s, fld, [p1], [p2], acknowledge_divergent)
    n = _modes(s, modes_upto)
    terms = _basis(s, fld, [p1], [p2], s.k[:n])[0] * mode_coefficients(s, fld, n)
    return np.cumsum(terms)


def _require_filtered(s: ModalSolution, problem: Problem):
    if s.problem is not problem:
        raise ValueError(f"expected a {problem.value} solution, got {s.problem.value}")
    if not s.filtered:
        raise ValueError("the pair forms exist only for a positive filter range")


def string_acceleration_traveling(s: ModalSolution, x, t, modes_upto: Optional[int] = None):
    """Filtered string acceleration written as eight travelling sine series.

    Each term pairs ``sin(k pi (L/2 +- eps +- nu t +- x)/L) / k``; the sine
    series have monotone coefficients and converge by Dirichlet's test.
    """
    _require_filtered(s, Problem.STRING)
    prm = s.parameters
    h, L, nu, eps = prm["h"], prm["L"], prm["nu"], s.filter_range
    k = s.k[: _modes(s, modes_upto)].astype(float)
    x = np.asarray(x, dtype=float)
    vt = nu * np.asarray(t, dtype=float)
    shifts = [
        (+1, eps - vt - x), (+1, -eps + vt + x),
        (-1, eps + vt + x), (-1, -eps - vt - x),
        (-1, eps - vt + x), (-1, -eps + vt - x),
        (+1, eps + vt - x), (+1, -eps - vt + x),
    ]
    total = 0.0
    for sign, shift in shifts:
        arg = np.multiply.outer(np.atleast_1d(L / 2 + shift), k) * (math.pi / L)
        total = total + sign * (np.sin(arg) @ (1.0 / k))
    out = -h * nu**2 / (L * math.pi * eps) * total
    return float(out[0]) if np.ndim(x) == 0 and np.ndim(t) == 0 else out


def box_Ex_top_pair_form(s: ModalSolution, x, modes_upto: Optional[int] = None):
    """Filtered ``E_x(x, h)`` as the difference of two shifted sine series."""
    _require_filtered(s, Problem.BOX)
    V0, L, eps = s.parameters["V0"], s.parameters["L"], s.filter_range
    k = s.k[: _modes(s, modes_upto)].astype(float)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    w = math.pi / L
    diff = np.sin(np.multiply.outer(xa - eps, k) * w) - np.sin(np.multiply.outer(xa + eps, k) * w)
    out = 2 * V0 / (math.pi * eps) * (diff @ (1.0 / k))
    return float(out[0]) if np.ndim(x) == 0 else out


def cylinder_flux_pair_form(s: ModalSolution, theta, modes_upto: Optional[int] = None,
                            component: str = "theta"):
    """Filtered surface flux ``j_theta(r0, theta)`` (or ``j_r``) as shifted series.

    ``component="theta"`` sums ``sin[k(theta - eps)] - sin[k(theta + eps)]``;
    ``component="r"`` sums the cosine pair ``cos[k(theta + eps)] - cos[k(theta - eps)]``.
    """
    _require_filtered(s, Problem.CYLINDER)
    if component not in ("theta", "r"):
        raise ValueError("component must be 'theta' or 'r'")
    prm = s.parameters
    pref = 2 * prm["cmk"] * prm["u0"] / (math.pi * prm["r0"] * s.filter_range)
    k = s.k[: _modes(s, modes_upto)].astype(float)
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    lo = np.multiply.outer(th - s.filter_range, k)
    hi = np.multiply.outer(th + s.filter_range, k)
    if component == "theta":
        pair = np.sin(lo) - np.sin(hi)
    else:
        pair = np.cos(hi) - np.cos(lo)
    out = pref * (pair @ (1.0 / k))
    return float(out[0]) if np.ndim(theta) == 0 else out


@dataclass
class ScanReport:
    """Per-point Cauchy diagnostic along a curve.

    ``oscillation`` is the spread of the partial sums over the last half of
    the modes and ``decay_ratio`` its ratio to the spread over the
    preceding quarter.  ``flagged`` marks points judged divergent.
    """

    field: Field
    curve: Curve
    coords: np.ndarray
    oscillation: np.ndarray
    decay_ratio: np.ndarray
    flagged: np.ndarray
    refined: np.ndarray
    coefficient_report: ConvergenceReport
    manifest: dict = field(default_factory=dict)

    @property
    def flagged_coords(self) -> np.ndarray:
        return self.coords[self.flagged]

    @property
    def verdict(self) -> str:
        n = int(self.flagged.sum())
        if n == 0:
            return "convergent"
        if n >= 0.5 * self.coords.size:
            return "divergent"
        return f"convergent except at {n} points"

    def rows(self):
        for c, f, o in zip(self.coords, self.flagged, self.oscillation):
            yield float(c), "divergent" if f else "convergent", float(o)


def _curve_points(s: ModalSolution, curve: Curve, grid, at: float):
    prm = s.parameters
    if curve is Curve.TOP_SURFACE:
        if s.problem is not Problem.BOX:
            raise ValueError("the top surface belongs to the box problem")
        lo, hi, periodic = 0.0, prm["L"], False
    elif curve is Curve.CYLINDER_SURFACE:
        if s.problem is not Problem.CYLINDER:
            raise ValueError("the cylinder surface belongs to the cylinder problem")
        lo, hi, periodic = -math.pi, math.pi, True
    else:
        if s.problem is not Problem.STRING:
            raise ValueError("time slices belong to the string problem")
        lo, hi, periodic = 0.0, prm["L"], False
    if grid is None:
        grid = 2000 if periodic else 401
    if np.ndim(grid) == 0:
        n = int(grid)
        if n < 3:
            raise ValueError("scan grid needs at least 3 points")
        coords = lo + (hi - lo) / n * np.arange(n) if periodic else np.linspace(lo, hi, n)
    else:
        coords = np.asarray(grid, dtype=float)
    if curve is Curve.TOP_SURFACE:
        other = prm["h"]
    elif curve is Curve.CYLINDER_SURFACE:
        other = prm["r0"]
    else:
        other = at
    wrap = periodic and coords.size > 2 and math.isclose(
        coords[-1] - coords[0] + (coords[1] - coords[0]), hi - lo, rel_tol=1e-9)
    return coords, other, (lo, hi), wrap


def _place(curve: Curve, coords, other):
    """Map curve coordinates to ``(p1, p2)`` query arrays."""
    coords = np.asarray(coords, dtype=float)
    fixed = np.full(coords.shape, other)
    if curve is Curve.CYLINDER_SURFACE:
        return fixed, coords
    return coords, fixed


def _cells(coords, bounds, wrap):
    lo, hi = bounds
    mids = 0.5 * (coords[1:] + coords[:-1])
    left = np.concatenate([[coords[0] - 0.5 * (coords[1] - coords[0])], mids])
    right = np.concatenate([mids, [coords[-1] + 0.5 * (coords[-1] - coords[-2])]])
    if not wrap:
        left = np.maximum(left, lo)
        right = np.minimum(right, hi)
    return left, right


def divergence_scan(s: ModalSolution, fld, curve, grid=None, modes: Optional[int] = None,
                    at: float = 0.0) -> ScanReport:
    """Flag the points of a curve where the field series fails to converge.

    Every grid point gets the Cauchy diagnostic on its partial sums: it is
    suspect when the spread over the last half of the modes exceeds
    ``1e-3`` of the local scale and does not shrink relative to the
    preceding quarter.  When most points are suspect the series is
    divergent along the curve.  Otherwise the suspects, and every cell
    whose spread is a local maximum, are refined: if the maximum (or
    minimum) of the partial sums across the cell keeps moving as the mode
    count doubles, the cell's node is flagged.  Jumps do not trigger this
    because their overshoot is bounded; logarithmic singularities do.

    ``grid`` is a point count or an array of coordinates (``x`` or
    ``theta``); ``at`` is the time for string slices.  ``modes`` defaults
    to ``DEFAULT_SCAN_MODES`` whatever the solution was built with.
    """
    fld = Field(fld)
    curve = Curve(curve)
    _check_field(s, fld)
    modes = DEFAULT_SCAN_MODES if modes is None else int(modes)
    if modes != s.modes:
        s = ModalSolution(s.problem, s.parameters, s.filter_range, modes)
    n = s.modes
    if n < 8:
        raise ValueError("need at least 8 modes for the Cauchy diagnostic")
    coords, other, bounds, wrap = _curve_points(s, curve, grid, at)
    p1, p2 = _place(curve, coords, other)
    _check_domain(s, p1, p2)

    coef = mode_coefficients(s, fld)
    k = s.k
    scale_floor = float(np.max(np.abs(coef)))
    osc = np.empty(coords.size)
    early = np.empty(coords.size)
    scale = np.empty(coords.size)
    for i in range(0, coords.size, _CHUNK):
        sl = slice(i, i + _CHUNK)
        sums = np.cumsum(_basis(s, fld, p1[sl], p2[sl], k) * coef, axis=1)
        osc[sl] = np.ptp(sums[:, n // 2:], axis=1)
        early[sl] = np.ptp(sums[:, n // 4: n // 2], axis=1)
        scale[sl] = np.maximum(np.max(np.abs(sums), axis=1), scale_floor)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(early > 0, osc / early, np.where(osc > 0, np.inf, 0.0))
    active = osc > OSCILLATION_THRESHOLD * scale
    flagged = active & (ratio > DECAY_RATIO)

    # sub-cell refinement around local maxima of the spread; isolated
    # flags are re-examined too, since a node just beside a jump still
    # rings inside the late window
    left_n = np.roll(osc, 1) if wrap else np.concatenate([[-np.inf], osc[:-1]])
    right_n = np.roll(osc, -1) if wrap else np.concatenate([osc[1:], [-np.inf]])
    peaks = active & ~flagged & (osc >= left_n) & (osc >= right_n)
    if flagged.sum() < 0.5 * coords.size:
        peaks |= flagged
        flagged[:] = False
    candidates = np.flatnonzero(peaks)
    refined = np.zeros(coords.size, dtype=bool)
    if candidates.size:
        cell_lo, cell_hi = _cells(coords, bounds, wrap)
        if curve is Curve.CYLINDER_SURFACE:
            rate = float(k[-1])
        else:
            rate = math.pi * float(k[-1]) / s.parameters["L"]
        amplitude = float(np.max(k[n // 2:] * np.abs(coef[n // 2:])))
        half = n // 2
        for i in candidates:
            width = cell_hi[i] - cell_lo[i]
            m = max(3, int(math.ceil(4 * rate * width / math.pi)) + 1)
            sub = np.linspace(cell_lo[i], cell_hi[i], m)
            q1, q2 = _place(curve, sub, other)
            terms = _basis(s, fld, q1, q2, k) * coef
            s_half = terms[:, :half].sum(axis=1)
            s_full = s_half + terms[:, half:].sum(axis=1)
            growth = max(s_full.max() - s_half.max(), s_half.min() - s_full.min())
            if growth > GROWTH_THRESHOLD * amplitude:
                flagged[i] = True
                refined[i] = True

    report = classify_convergence(np.abs(coef)) if n >= 32 else ConvergenceReport(
        classify_convergence(np.abs(np.resize(coef, 32))).classification, float("nan"))
    manifest = dict(s.manifest(), field=fld.value, curve=curve.value,
                    fixed_coordinate=other, grid_points=int(coords.size))
    return ScanReport(fld, curve, coords, osc, ratio, flagged, refined, report, manifest)


def plucked_triangle(x, h: float = 1.0, L: float = 1.0):
    """Initial string shape: height ``h`` at ``L/2``, zero at both ends."""
    x = np.asarray(x, dtype=float)
    return h * (1.0 - np.abs(2.0 * x / L - 1.0))


def plucked_triangle_samples(h: float = 1.0, L: float = 1.0, n: int = 8192) -> SampledFunction:
    """Odd periodic extension of the triangle, sampled on ``[-L, L)``.

    This is the function the sine series represents; filtering it treats
    the fixed ends the same way the per-mode factor does.  ``n`` should be
    a multiple of 4 so the kinks fall on nodes.
    """
    x = -L + 2 * L / n * np.arange(n)
    return SampledFunction(np.sign(x) * plucked_triangle(np.abs(x), h, L), (-L, L))


def initial_position_series(s: ModalSolution) -> FourierSeries:
    """String position at ``t = 0`` in the canonical variable ``pi x / L``.

    Returns the odd-extension sine series on [-pi, pi], filter factor
    included.  It equals ``filter_series`` of the unfiltered series with
    range ``s.canonical_range``, coefficient for coefficient.
    """
    if s.problem is not Problem.STRING:
        raise ValueError("initial_position_series needs a string solution")
    coef = mode_coefficients(s, Field.POSITION)
    b = np.zeros(2 * s.modes)
    b[s.k - 1] = coef
    return FourierSeries(0.0, np.zeros(b.size), b)


def mode_residuals(s: ModalSolution) -> np.ndarray:
    """Per-mode residual of the governing equation in coefficient space."""
    k = s.k.astype(float)
    p = s.parameters
    if s.problem is Problem.STRING:
        a = math.pi * k / p["L"]
        d2x = -(a**2)
        d2t = -((a * p["nu"]) ** 2)
        return d2x - d2t / p["nu"] ** 2
    if s.problem is Problem.BOX:
        a = math.pi * k / p["L"]
        # d2/dx2 sin(ax) = -a^2 sin(ax); d2/dy2 sinh(ay) = a^2 sinh(ay)
        return -(a**2) + a**2
    # r d/dr (r d/dr r^k) = k^2 r^k ; d2/dtheta2 sin(k theta) = -k^2 sin(k theta)
    return k**2 - k**2
