"""Piecewise-polynomial filter kernels and their Fourier multipliers.

Kernels are built and convolved in exact rational arithmetic
(:class:`fractions.Fraction`), starting from the binary value of the
float range, so unit integrals, evenness and derivative matching at the
breakpoints hold exactly.  Each piece stores its polynomial in powers of
``u - c`` where ``c`` is the centre of the piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Sequence, Tuple

import numpy as np

from .fourier_core import FourierSeries

__all__ = [
    "Piece",
    "PiecewiseKernel",
    "first_order_kernel",
    "convolve",
    "order_n_kernel",
    "multiplier",
    "kernel_series",
    "kernel_table",
    "DivergentSeriesError",
]


class DivergentSeriesError(ValueError):
    """Raised when a divergent series is requested without acknowledgement."""


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _shift(coeffs: Sequence[Fraction], d: Fraction) -> list:
    """Coefficients of ``p(t + d)`` given those of ``p(t)`` (Taylor shift)."""
    out = list(coeffs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += d * out[j + 1]
    return out


def _poly_eval(coeffs: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _poly_deriv(coeffs: Sequence[Fraction]) -> list:
    return [i * c for i, c in enumerate(coeffs)][1:] or [Fraction(0)]


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Fraction
    coeffs: Tuple[Fraction, ...]  # in powers of (u - centre)

    @property
    def centre(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def global_coeffs(self) -> list:
        """Coefficients in powers of ``u`` itself."""
        return _shift(self.coeffs, -self.centre)

    def at(self, u: Fraction, nderiv: int = 0) -> Fraction:
        c = list(self.coeffs)
        for _ in range(nderiv):
            c = _poly_deriv(c)
        return _poly_eval(c, u - self.centre)

    def integral(self) -> Fraction:
        half = (self.hi - self.lo) / 2
        # odd powers integrate to zero over the symmetric local interval
        return sum((2 * c * half ** (i + 1) / (i + 1)
                    for i, c in enumerate(self.coeffs) if i % 2 == 0), Fraction(0))


class PiecewiseKernel:
    """Compactly supported piecewise polynomial ``K(u)``.

    At every breakpoint (including the ends of the support) the kernel
    takes the average of its two lateral limits.
    """

    def __init__(self, order: int, range_: Fraction, pieces: Sequence[Piece]):
        self.order = int(order)
        self.range = _frac(range_)
        self.pieces = tuple(pieces)
        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.hi != right.lo:
                raise ValueError("kernel pieces must tile the support contiguously")

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        return (self.pieces[0].lo,) + tuple(p.hi for p in self.pieces)

    @property
    def support(self) -> Tuple[float, float]:
        return float(self.pieces[0].lo), float(self.pieces[-1].hi)

    @property
    def degree(self) -> int:
        return max(len(p.coeffs) for p in self.pieces) - 1

    @cached_property
    def jump_values(self) -> Dict[Fraction, Fraction]:
        """Assigned value at each breakpoint: mean of the lateral limits."""
        out = {}
        bps = self.breakpoints
        for i, b in enumerate(bps):
            left = self.pieces[i - 1].at(b) if i > 0 else Fraction(0)
            right = self.pieces[i].at(b) if i < len(self.pieces) else Fraction(0)
            out[b] = (left + right) / 2
        return out

    def lateral_limits(self, b: Fraction, nderiv: int = 0) -> Tuple[Fraction, Fraction]:
        """Left and right limits of the ``nderiv``-th derivative at ``b``."""
        b = _frac(b)
        bps = self.breakpoints
        i = bps.index(b)
        left = self.pieces[i - 1].at(b, nderiv) if i > 0 else Fraction(0)
        right = self.pieces[i].at(b, nderiv) if i < len(self.pieces) else Fraction(0)
        return left, right

    def integral(self) -> Fraction:
        return sum((p.integral() for p in self.pieces), Fraction(0))

    def exact_value(self, u) -> Fraction:
        u = _frac(u)
        if u in self.jump_values:
            return self.jump_values[u]
        for p in self.pieces:
            if p.lo < u < p.hi:
                return p.at(u)
        return Fraction(0)

    @cached_property
    def _float_tables(self):
        bps = np.array([float(b) for b in self.breakpoints])
        width = max(len(p.coeffs) for p in self.pieces)
        coef = np.zeros((len(self.pieces), width))
        for i, p in enumerate(self.pieces):
            coef[i, : len(p.coeffs)] = [float(c) for c in p.coeffs]
        centres = np.array([float(p.centre) for p in self.pieces])
        jumps = np.array([float(self.jump_values[b]) for b in self.breakpoints])
        return bps, coef, centres, jumps

    def __call__(self, u):
        """Evaluate in floating point; breakpoints get their jump value."""
        bps, coef, centres, jumps = self._float_tables
        ua = np.asarray(u, dtype=float)
        flat = ua.ravel()
        out = np.zeros(flat.shape)
        idx = np.searchsorted(bps, flat, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.pieces))
        t = flat[inside] - centres[idx[inside]]
        c = coef[idx[inside]]
        acc = np.zeros(t.shape)
        for j in range(c.shape[1] - 1, -1, -1):
            acc = acc * t + c[:, j]
        out[inside] = acc
        hit = np.searchsorted(bps, flat)
        hit = np.clip(hit, 0, bps.size - 1)
        on_bp = bps[hit] == flat
        out[on_bp] = jumps[hit[on_bp]]
        out = out.reshape(ua.shape)
        return float(out) if out.ndim == 0 else out

    def is_even(self) -> bool:
        """Exact mirror symmetry of the pieces about ``u = 0``."""
        n = len(self.pieces)
        for i in range(n):
            p, q = self.pieces[i], self.pieces[n - 1 - i]
            if p.lo != -q.hi or p.hi != -q.lo:
                return False
            cp = list(p.coeffs) + [Fraction(0)] * (len(q.coeffs) - len(p.coeffs))
            cq = list(q.coeffs) + [Fraction(0)] * (len(p.coeffs) - len(q.coeffs))
            if any(a != (-1) ** j * b for j, (a, b) in enumerate(zip(cp, cq))):
                return False
        return True

    def __repr__(self):
        return f"PiecewiseKernel(order={self.order}, range={float(self.range)!r}, pieces={len(self.pieces)})"


def first_order_kernel(eps) -> PiecewiseKernel:
    """Box kernel: ``1/(2 eps)`` on ``(-eps, eps)``, ``1/(4 eps)`` at ``+-eps``."""
    e = _frac(eps)
    if not e > 0:
        raise ValueError(f"range must be positive, got {eps}")
    return PiecewiseKernel(1, e, [Piece(-e, e, (1 / (2 * e),))])


def _convolve_pieces(a: Piece, b: Piece):
    """Exact ``int a(s) b(u - s) ds`` as pieces over ``[a.lo+b.lo, a.hi+b.hi]``."""
    ga, gb = a.global_coeffs(), b.global_coeffs()
    na, nb = len(ga), len(gb)
    # b(u - s) = sum_m gb[m] (u - s)^m ; integrand coefficients C[i][l] of u^i s^l
    deg_u, deg_s = nb, na + nb
    C = [[Fraction(0)] * deg_s for _ in range(deg_u)]
    for m, bm in enumerate(gb):
        if not bm:
            continue
        for i in range(m + 1):
            binom = math.comb(m, i) * (-1) ** (m - i)
            for l, al in enumerate(ga):
                C[i][l + m - i] += bm * binom * al
    # antiderivative in s
    F = [[Fraction(0)] + [c / (l + 1) for l, c in enumerate(row)] for row in C]

    def substitute(alpha: Fraction, beta: int):
        # F(u, alpha + beta*u) as coefficients in u
        out = [Fraction(0)] * (deg_u + deg_s + 1)
        for i, row in enumerate(F):
            for l, c in enumerate(row):
                if not c:
                    continue
                for r in range(l + 1):
                    term = c * math.comb(l, r) * alpha ** (l - r) * beta ** r
                    if term:
                        out[i + r] += term
        return out

    cuts = sorted({a.lo + b.lo, a.lo + b.hi, a.hi + b.lo, a.hi + b.hi})
    result = []
    for lo, hi in zip(cuts, cuts[1:]):
        if hi == lo:
            continue
        mid = (lo + hi) / 2
        # s ranges over [max(a.lo, u - b.hi), min(a.hi, u - b.lo)]
        lower = (a.lo, 0) if a.lo >= mid - b.hi else (-b.hi, 1)
        upper = (a.hi, 0) if a.hi <= mid - b.lo else (-b.lo, 1)
        up, dn = substitute(*upper), substitute(*lower)
        result.append((lo, hi, [x - y for x, y in zip(up, dn)]))
    return result


def _trim(coeffs):
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def convolve(a: PiecewiseKernel, b: PiecewiseKernel) -> PiecewiseKernel:
    """Exact convolution of two kernels; supports and orders add."""
    parts = [part for pa in a.pieces for pb in b.pieces for part in _convolve_pieces(pa, pb)]
    cuts = sorted({x for lo, hi, _ in parts for x in (lo, hi)})
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        total = []
        for plo, phi, coeffs in parts:
            if plo <= lo and hi <= phi:
                if len(coeffs) > len(total):
                    total += [Fraction(0)] * (len(coeffs) - len(total))
                for i, c in enumerate(coeffs):
                    total[i] += c
        centre = (lo + hi) / 2
        pieces.append(Piece(lo, hi, tuple(_trim(_shift(total or [Fraction(0)], centre)))))
    return PiecewiseKernel(a.order + b.order, a.range + b.range, pieces)


def order_n_kernel(n: int, eps) -> PiecewiseKernel:
    """``n``-fold convolution of ``first_order_kernel(eps / n)``; support ``[-eps, eps]``.

    The range-``n*eps`` construction is ``order_n_kernel(n, n * eps)``.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    e = _frac(eps)
    if not e > 0:
        raise ValueError(f"range must be positive, got {eps}")
    base = first_order_kernel(e / n)
    kernel = base
    for _ in range(n - 1):
        kernel = convolve(kernel, base)
    return kernel


def multiplier(n: int, eps: float, k):
    """Fourier multiplier ``sinc(k eps / n) ** n`` of the order-``n`` filter.

    ``sinc(0) = 1``; order 0 is the identity and returns 1 for every k.
    Accepts scalar or array ``k``.
    """
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    if not eps > 0:
        raise ValueError(f"range must be positive, got {eps}")
    ka = np.asarray(k)
    if np.any(ka < 0):
        raise ValueError("mode index k must be non-negative")
    if n == 0:
        out = np.ones(ka.shape)
    else:
        out = _sinc(ka * (eps / n)) ** n
    return float(out) if out.ndim == 0 else out


def _sinc(x):
    """``sin(x)/x`` with the value 1 at 0."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0, 1.0, x)
    return np.where(x == 0, 1.0, np.sin(safe) / safe)


def kernel_series(n: int, eps: float, k_max: int, allow_divergent: bool = False) -> FourierSeries:
    """Truncated Fourier series of the order-``n`` kernel on [-pi, pi].

    Order 0 is the Dirac delta, whose series does not converge; it is only
    returned with ``allow_divergent=True``.
    """
    if not 0 < eps <= math.pi:
        raise ValueError(f"range must satisfy 0 < eps <= pi inside the periodic interval, got {eps}")
    if n == 0 and not allow_divergent:
        raise DivergentSeriesError("the order-0 (delta) kernel has a divergent Fourier series; "
                                   "pass allow_divergent=True")
    k = np.arange(1, k_max + 1)
    return FourierSeries(1.0 / math.pi, multiplier(n, eps, k) / math.pi, np.zeros(k_max))


def kernel_table(kernel: PiecewiseKernel, u) -> np.ndarray:
    """``(u, K(u))`` rows for plotting."""
    u = np.asarray(u, dtype=float)
    return np.column_stack([u, kernel(u)])
