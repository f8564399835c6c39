"""Holomorphic Fourier transform of compactly supported piecewise polynomials.

    F(xi) = integral of f(x) exp(-i x xi) dx,   xi complex.

Away from the origin each piece is integrated in closed form in local
coordinates; for |xi| < tau the exact moments feed a truncated Taylor series
whose remainder is bounded below ``SERIES_TOL``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import RangeError
from .piecewise import PiecewisePoly, _shift, abs_integral, convolve, integrate, moment

TAU = 1e-3
SERIES_TOL = 1e-14
# exp(709.78) is the largest finite double
EXP_LIMIT = 700.0


def _check_range(radius: float, xi: complex) -> None:
    if not (math.isfinite(xi.real) and math.isfinite(xi.imag)):
        raise RangeError(f"non-finite argument {xi!r}")
    if abs(xi.imag) * radius > EXP_LIMIT:
        raise RangeError(f"|Im xi| * A = {abs(xi.imag) * radius:.4g} exceeds the double range")


def _unit_moments(z: complex, kmax: int) -> list[complex]:
    """E_k(z) = integral_0^1 t^k e^(z t) dt for k = 0..kmax."""
    if abs(z) <= kmax + 1:
        # E_k(z) = sum_n z^n / (n! (n + k + 1))
        out = []
        for k in range(kmax + 1):
            term, total, n = 1.0 + 0j, 0j, 0
            while True:
                contrib = term / (n + k + 1)
                total += contrib
                if n > abs(z) and abs(contrib) <= 1e-17 * abs(total):
                    break
                n += 1
                term *= z / n
            out.append(total)
        return out
    ez = cmath.exp(z)
    out = [(ez - 1) / z]
    for k in range(1, kmax + 1):
        out.append((ez - k * out[-1]) / z)
    return out


@lru_cache(maxsize=256)
def _local_form(f: PiecewisePoly) -> tuple[tuple[float, float, tuple[float, ...]], ...]:
    return tuple(
        (float(u), float(v - u), tuple(float(c) for c in _shift(p, u)))
        for u, v, p in f.intervals()
        if p
    )


@lru_cache(maxsize=256)
def _abs_mass_bound(f: PiecewisePoly) -> float:
    # integral of |p| over a piece <= w * sum |b_k| w^k in local coordinates
    return sum(w * sum(abs(b) * w**k for k, b in enumerate(bs)) for _, w, bs in _local_form(f))


@lru_cache(maxsize=4096)
def _moment(f: PiecewisePoly, j: int) -> Fraction:
    return moment(f, j)


def _closed_form(f: PiecewisePoly, xi: complex) -> complex:
    s = -1j * xi
    total = 0j
    for u, w, bs in _local_form(f):
        E = _unit_moments(s * w, len(bs) - 1)
        inner = sum(b * w ** (k + 1) * E[k] for k, b in enumerate(bs))
        total += cmath.exp(s * u) * inner
    return total


def _series(f: PiecewisePoly, xi: complex) -> complex:
    if xi == 0:
        return complex(float(integrate(f)))
    A = float(f.radius)
    M = _abs_mass_bound(f)
    r = A * abs(xi)
    K = 0
    bound = M * r * math.exp(r)
    while bound > SERIES_TOL and K < 200:
        K += 1
        bound *= r / (K + 1)
    total = 0j
    power = 1.0 + 0j
    for j in range(K + 1):
        total += power * float(_moment(f, j) / math.factorial(j))
        power *= -1j * xi
    return total


def ft_piecewise(f: PiecewisePoly, xi, *, tau: float = TAU, path: str = "auto") -> complex:
    """Fourier transform of ``f`` at complex ``xi``.

    ``path`` forces the ``"closed"`` or ``"series"`` evaluation; ``"auto"``
    picks the series inside |xi| < tau.
    """
    xi = complex(xi)
    if f.is_zero():
        return 0j
    _check_range(float(f.radius), xi)
    if path == "auto":
        path = "series" if abs(xi) < tau else "closed"
    try:
        if path == "series":
            return _series(f, xi)
        if path == "closed":
            return _closed_form(f, xi)
    except OverflowError as exc:
        raise RangeError(f"overflow evaluating the transform at {xi!r}") from exc
    raise ValueError(f"unknown path {path!r}")


def ft_at_zero(f: PiecewisePoly) -> Fraction:
    """The transform at 0 as an exact rational: the mass of ``f``."""
    return integrate(f)


def check_convolution_theorem(
    f: PiecewisePoly, g: PiecewisePoly, samples: Sequence[complex], fg: PiecewisePoly | None = None
) -> float:
    """max |FT(f*g) - FT(f) FT(g)| over ``samples``."""
    if not samples:
        raise ValueError("samples must be nonempty")
    fg = convolve(f, g) if fg is None else fg
    return max(abs(ft_piecewise(fg, xi) - ft_piecewise(f, xi) * ft_piecewise(g, xi)) for xi in samples)


@dataclass(frozen=True)
class GrowthBound:
    C: float
    A: float

    def __call__(self, xi: complex) -> float:
        return self.C * math.exp(self.A * abs(xi))


@dataclass
class GrowthReport:
    bound: GrowthBound
    ok: bool
    worst_ratio: float
    violations: list[tuple[complex, float, float]] = field(default_factory=list)


def growth_bound(f: PiecewisePoly) -> GrowthBound:
    return GrowthBound(abs_integral(f), float(f.radius))


def check_growth_bound(f: PiecewisePoly, samples: Iterable[complex], rel_slack: float = 1e-12) -> GrowthReport:
    """Check |FT(f)(xi)| <= C exp(A |xi|) with C = integral |f| and A the support radius.

    ``rel_slack`` absorbs double rounding at points where the bound is tight
    (xi = 0 for non-negative f).
    """
    gb = growth_bound(f)
    worst = 0.0
    violations = []
    for xi in samples:
        xi = complex(xi)
        val = abs(ft_piecewise(f, xi))
        cap = gb(xi)
        if cap > 0:
            worst = max(worst, val / cap)
        if val > cap * (1 + rel_slack) + 1e-300:
            violations.append((xi, val, cap))
    return GrowthReport(gb, not violations, worst, violations)
