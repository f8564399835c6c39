"""Exact calculus of compactly supported piecewise polynomials over Q.

A function is a strictly increasing list of breakpoints x_0 < ... < x_N and one
polynomial per interval [x_k, x_{k+1}), coefficients ascending in the global
variable x.  Outside [x_0, x_N) the value is 0.  Every constructor returns the
canonical form (adjacent equal pieces merged, zero tails trimmed), so ``==`` is
equality of functions.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .graded_core import StepDensity

Poly = tuple[Fraction, ...]

# -- dense polynomial helpers (ascending coefficients) -------------------------


def _trim(c: Iterable) -> Poly:
    c = [Fraction(v) for v in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    return _trim([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])


def _scale(a: Poly, s) -> Poly:
    return _trim([s * v for v in a])


def _mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _eval(a: Poly, x) -> Fraction:
    acc = Fraction(0)
    for v in reversed(a):
        acc = acc * x + v
    return acc


def _antiderivative(a: Poly) -> Poly:
    return _trim([Fraction(0)] + [v / (k + 1) for k, v in enumerate(a)])


def _derivative(a: Poly) -> Poly:
    return _trim([k * v for k, v in enumerate(a)][1:])


def _shift(a: Poly, u) -> Poly:
    """Coefficients of t -> a(u + t)."""
    out = [Fraction(0)] * len(a)
    for k, v in enumerate(a):
        if not v:
            continue
        upow = Fraction(1)
        for j in range(k, -1, -1):
            # term C(k, j) u^(k-j) t^j, j descending so u power ascends
            out[j] += v * comb(k, j) * upow
            upow *= u
    return _trim(out)


def _linear_power(alpha, beta, n: int) -> Poly:
    """Coefficients of (alpha + beta x)^n."""
    return _trim([comb(n, k) * Fraction(alpha) ** (n - k) * Fraction(beta) ** k for k in range(n + 1)])


# -- the function type ---------------------------------------------------------


@dataclass(frozen=True)
class PiecewisePoly:
    breakpoints: tuple[Fraction, ...] = ()
    pieces: tuple[Poly, ...] = ()

    def __post_init__(self):
        bps = tuple(Fraction(b) for b in self.breakpoints)
        pieces = tuple(_trim(p) for p in self.pieces)
        if bps and len(pieces) != len(bps) - 1:
            raise ValidationError(f"{len(bps)} breakpoints need {len(bps) - 1} pieces, got {len(pieces)}")
        if not bps and pieces:
            raise ValidationError("pieces given without breakpoints")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise ValidationError("breakpoints must be strictly increasing")
        bps, pieces = _canonical(bps, pieces)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def zero(cls) -> PiecewisePoly:
        return cls()

    @classmethod
    def indicator(cls, a=0, b=1) -> PiecewisePoly:
        return cls((a, b), ((1,),))

    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def support(self) -> tuple[Fraction, Fraction]:
        if self.is_zero():
            return Fraction(0), Fraction(0)
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def radius(self) -> Fraction:
        """max(|x_0|, |x_N|): the exponential type of the Fourier transform."""
        lo, hi = self.support
        return max(abs(lo), abs(hi))

    @property
    def degree(self) -> int:
        return max((len(p) - 1 for p in self.pieces), default=-1)

    def intervals(self):
        """Yield (left, right, poly) for each piece."""
        for k, p in enumerate(self.pieces):
            yield self.breakpoints[k], self.breakpoints[k + 1], p

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def left_limit(self, x) -> Fraction:
        x = Fraction(x)
        k = bisect_left(self.breakpoints, x) - 1
        if k < 0 or k >= len(self.pieces):
            return Fraction(0)
        return _eval(self.pieces[k], x)

    def __add__(self, other: PiecewisePoly) -> PiecewisePoly:
        return _combine(self, other, _add)

    def __sub__(self, other: PiecewisePoly) -> PiecewisePoly:
        return _combine(self, other, lambda a, b: _add(a, _scale(b, -1)))

    def __neg__(self) -> PiecewisePoly:
        return self.scale(-1)

    def scale(self, s) -> PiecewisePoly:
        s = Fraction(s)
        return PiecewisePoly(self.breakpoints, tuple(_scale(p, s) for p in self.pieces))

    __rmul__ = scale

    def __mul__(self, s):
        return self.scale(s)


def _canonical(bps, pieces):
    if not bps:
        return (), ()
    lo, hi = 0, len(pieces)
    while lo < hi and not pieces[lo]:
        lo += 1
    while hi > lo and not pieces[hi - 1]:
        hi -= 1
    if lo == hi:
        return (), ()
    out_b = [bps[lo]]
    out_p: list[Poly] = []
    for k in range(lo, hi):
        if out_p and out_p[-1] == pieces[k]:
            out_b[-1] = bps[k + 1]
        else:
            out_p.append(pieces[k])
            out_b.append(bps[k + 1])
    return tuple(out_b), tuple(out_p)


def _poly_on(f: PiecewisePoly, a, b) -> Poly:
    """The polynomial of ``f`` on an interval [a, b] lying inside one piece (or outside)."""
    k = bisect_right(f.breakpoints, Fraction(a)) - 1
    if 0 <= k < len(f.pieces) and b <= f.breakpoints[k + 1]:
        return f.pieces[k]
    return ()


def _refine(*fs: PiecewisePoly) -> list[Fraction]:
    return sorted(set().union(*(f.breakpoints for f in fs)))


def _combine(f: PiecewisePoly, g: PiecewisePoly, op) -> PiecewisePoly:
    bps = _refine(f, g)
    if not bps:
        return PiecewisePoly()
    pieces = [op(_poly_on(f, a, b), _poly_on(g, a, b)) for a, b in zip(bps, bps[1:])]
    return PiecewisePoly(tuple(bps), tuple(pieces))


# -- operations ----------------------------------------------------------------


def from_step(s: StepDensity) -> PiecewisePoly:
    q = s.q
    bps = tuple(Fraction(i, q) for i in range(len(s.values) + 1))
    pieces = tuple((v,) if v else () for v in s.values)
    if not pieces:
        return PiecewisePoly()
    return PiecewisePoly(bps, pieces)


def evaluate(f: PiecewisePoly, x) -> Fraction:
    """Exact value, right-continuous at every breakpoint (so 0 at x_N)."""
    x = Fraction(x)
    k = bisect_right(f.breakpoints, x) - 1
    if k < 0 or k >= len(f.pieces):
        return Fraction(0)
    return _eval(f.pieces[k], x)


def integrate(f: PiecewisePoly, a=None, b=None) -> Fraction:
    """Exact integral of ``f`` over [a, b] (the whole line by default)."""
    lo, hi = f.support
    a = lo if a is None else Fraction(a)
    b = hi if b is None else Fraction(b)
    if b < a:
        return -integrate(f, b, a)
    total = Fraction(0)
    for u, v, p in f.intervals():
        u, v = max(u, a), min(v, b)
        if u < v and p:
            F = _antiderivative(p)
            total += _eval(F, v) - _eval(F, u)
    return total


def moment(f: PiecewisePoly, j: int) -> Fraction:
    """Exact moment of order ``j``: the integral of x^j f(x)."""
    xj = (Fraction(0),) * j + (Fraction(1),)
    total = Fraction(0)
    for u, v, p in f.intervals():
        F = _antiderivative(_mul(p, xj))
        total += _eval(F, v) - _eval(F, u)
    return total


def abs_integral(f: PiecewisePoly) -> float:
    """Integral of |f|, splitting pieces at their real roots (floating point roots)."""
    total = Fraction(0)
    for u, v, p in f.intervals():
        if not p:
            continue
        cuts = {u, v}
        if len(p) > 1:
            for r in np.roots([float(c) for c in reversed(p)]):
                if abs(r.imag) < 1e-12 and u < r.real < v:
                    cuts.add(Fraction(r.real))
        cuts = sorted(cuts)
        F = _antiderivative(p)
        for a, b in zip(cuts, cuts[1:]):
            total += abs(_eval(F, b) - _eval(F, a))
    return float(total)


def convolve(f: PiecewisePoly, g: PiecewisePoly) -> PiecewisePoly:
    """Exact convolution x -> integral of f(y) g(x - y) dy.

    For each pair of pieces f_i on [a0, a1] and g_j on [b0, b1] the y-range is
    [max(a0, x - b1), min(a1, x - b0)], whose endpoints are affine in x on at
    most three x-intervals; on each we antidifferentiate in y and substitute.
    """
    if f.is_zero() or g.is_zero():
        return PiecewisePoly()
    contributions: list[tuple[Fraction, Fraction, Poly]] = []
    for a0, a1, p in f.intervals():
        if not p:
            continue
        for b0, b1, r in g.intervals():
            if not r:
                continue
            contributions.extend(_convolve_pieces(a0, a1, p, b0, b1, r))
    bps = sorted({e for s, t, _ in contributions for e in (s, t)})
    acc: list[Poly] = [()] * (len(bps) - 1)
    for s, t, poly in contributions:
        i, j = bisect_left(bps, s), bisect_left(bps, t)
        for k in range(i, j):
            acc[k] = _add(acc[k], poly)
    return PiecewisePoly(tuple(bps), tuple(acc))


def _convolve_pieces(a0, a1, p: Poly, b0, b1, r: Poly):
    # integrand p(y) r(x - y) = sum_k y^k A_k(x); its y-antiderivative is
    # sum_k y^(k+1)/(k+1) A_k(x), stored as A[k] (poly in x) for y^(k+1).
    deg = len(p) + len(r)
    A: list[Poly] = [()] * deg
    for l, e in enumerate(r):
        if not e:
            continue
        for s in range(l + 1):
            # e (x - y)^l contributes e C(l, s) x^(l-s) (-y)^s
            cx = (Fraction(0),) * (l - s) + (e * comb(l, s) * (-1) ** s,)
            for i, c in enumerate(p):
                if c:
                    A[i + s] = _add(A[i + s], _scale(cx, c))
    anti = [(k + 1, _scale(a, Fraction(1, k + 1))) for k, a in enumerate(A) if a]

    def F(alpha, beta) -> Poly:
        # antiderivative evaluated at y = alpha + beta x
        out: Poly = ()
        for power, a in anti:
            out = _add(out, _mul(a, _linear_power(alpha, beta, power)))
        return out

    lo, hi = a0 + b0, a1 + b1
    cuts = sorted({lo, hi, a0 + b1, a1 + b0})
    out = []
    for s, t in zip(cuts, cuts[1:]):
        mid = (s + t) / 2
        lower = F(a0, 0) if mid <= a0 + b1 else F(-b1, 1)
        upper = F(-b0, 1) if mid <= a1 + b0 else F(a1, 0)
        out.append((s, t, _add(upper, _scale(lower, -1))))
    return out


def sup_distance_bound(f: PiecewisePoly, g: PiecewisePoly, grid: int = 256) -> Fraction:
    """Certified upper bound on sup |f - g|.

    Pieces of degree <= 1 attain their extremes at the endpoints, which are
    evaluated exactly.  Higher-degree pieces are sampled at ``grid + 1`` points
    and padded by L h / 2, where L bounds |h'| on the piece from its shifted
    coefficients and h is the sample spacing.
    """
    if grid < 1:
        raise ValidationError(f"grid must be at least 1, got {grid}")
    h = f - g
    best = Fraction(0)
    for u, v, p in h.intervals():
        if not p:
            continue
        if len(p) <= 2:
            best = max(best, abs(_eval(p, u)), abs(_eval(p, v)))
            continue
        w = v - u
        local = _shift(p, u)
        lip = sum(abs(c) * w**k for k, c in enumerate(_derivative(local)))
        step = w / grid
        samples = max(abs(_eval(local, step * k)) for k in range(grid + 1))
        best = max(best, samples + lip * step / 2)
    return best


# -- rendering -----------------------------------------------------------------


def format_decimal(x, digits: int = 12) -> str:
    """Render a rational with ``digits`` significant digits, no exponent."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        value = Decimal(x.numerator) / Decimal(x.denominator)
    text = format(value, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def sample_points(lo, hi, count: int) -> list[Fraction]:
    lo, hi = Fraction(lo), Fraction(hi)
    if count < 1:
        raise ValidationError(f"sample count must be positive, got {count}")
    if count == 1:
        return [lo]
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def to_csv(f: PiecewisePoly, lo=None, hi=None, count: int = 257, digits: int = 12) -> str:
    """Rows ``x,f(x)`` at ``count`` equally spaced points of [lo, hi]."""
    s_lo, s_hi = f.support
    lo = s_lo if lo is None else lo
    hi = s_hi if hi is None else hi
    rows = ["x,f(x)"]
    for x in sample_points(lo, hi, count):
        rows.append(f"{format_decimal(x, digits)},{format_decimal(evaluate(f, x), digits)}")
    return "\n".join(rows) + "\n"


def to_json(f: PiecewisePoly) -> dict:
    return {
        "breakpoints": [format_rational(b) for b in f.breakpoints],
        "pieces": [[format_rational(c) for c in p] for p in f.pieces],
    }


def from_coefficients(breakpoints: Sequence, pieces: Sequence[Sequence]) -> PiecewisePoly:
    return PiecewisePoly(tuple(Fraction(b) for b in breakpoints), tuple(tuple(p) for p in pieces))
