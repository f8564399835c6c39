"""Box-tensor pairs and finite-level checks of the tensor/convolution theorem.

For pairs (R, I) and (S, J) the ideal I x S + R x J of R x S has bracket
powers whose graded lengths are the Cauchy product of the factors' lengths.
Everything here is exact except the convolution-gap diagnostic, which is a
certified one-sided bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ValidationError
from .graded_core import (
    GradedPair,
    MonomialIdeal,
    density_approximant,
    graded_colength_vector,
)
from .piecewise import convolve, evaluate, from_step, sup_distance_bound


@dataclass(frozen=True)
class BoxTensorPair:
    factors: tuple[GradedPair, ...]
    combined: GradedPair


def _box2(a: GradedPair, b: GradedPair) -> GradedPair:
    if a.p != b.p:
        raise ValidationError(f"characteristic mismatch: {a.p} != {b.p}")
    za, zb = (0,) * a.d, (0,) * b.d
    gens = [g + zb for g in a.ideal.gens] + [za + g for g in b.ideal.gens]
    # blocks are disjoint, so the union of minimal generators stays minimal
    return GradedPair(a.d + b.d, a.p, MonomialIdeal(a.d + b.d, tuple(gens)))


def box_tensor(factors: Sequence[GradedPair]) -> BoxTensorPair:
    """Folds the factors left to right through the binary construction."""
    factors = tuple(factors)
    if len(factors) < 2:
        raise ValidationError(f"a box tensor needs at least 2 factors, got {len(factors)}")
    combined = factors[0]
    for f in factors[1:]:
        combined = _box2(combined, f)
    return BoxTensorPair(factors, combined)


def cauchy_product(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@dataclass
class CauchyReport:
    q: int
    ok: bool
    degrees_checked: int
    violations: list[tuple[int, int, int]] = field(default_factory=list)


def verify_cauchy(a: GradedPair, b: GradedPair, n: int) -> CauchyReport:
    """Compare l(R x S / (I box J)^[q])_m with sum_i l(R/I^[q])_i l(S/J^[q])_{m-i} for all m."""
    tensor = graded_colength_vector(box_tensor([a, b]).combined, n)
    la, lb = graded_colength_vector(a, n), graded_colength_vector(b, n)
    cauchy = cauchy_product(la.lengths, lb.lengths)
    top = max(len(tensor), len(cauchy))
    violations = [
        (m, tensor[m], cauchy[m] if m < len(cauchy) else 0)
        for m in range(top)
        if tensor[m] != (cauchy[m] if m < len(cauchy) else 0)
    ]
    return CauchyReport(tensor.q, not violations, top, violations)


def _lattice_index(x0, p: int, q: int) -> int:
    x0 = Fraction(x0)
    if x0 < 0:
        raise ValidationError(f"lattice point must be non-negative, got {x0}")
    den = x0.denominator
    while den % p == 0:
        den //= p
    if den != 1:
        raise ValidationError(f"{x0} is not of the form m/{p}^k")
    if q % x0.denominator:
        raise ValidationError(f"denominator of {x0} does not divide q = {q}")
    return int(x0 * q)


@dataclass
class PhiReport:
    x0: Fraction
    q: int
    ok: bool
    cauchy_sum: Fraction
    tensor_value: Fraction
    phi_integral: Fraction


def phi_lattice_identity(a: GradedPair, b: GradedPair, n: int, x0) -> PhiReport:
    """Check phi_n(x0) = f_n(tensor)(x0) at a lattice point x0 = m/q.

    phi_n(x) = integral_0^{x+1/q} f_n(a)(y) f_n(b)(x + 1/q - y) dy is taken from
    the exact convolution of the two step functions; it must equal both the
    scaled Cauchy sum and the tensor pair's own approximant.
    """
    q = a.q(n)
    m = _lattice_index(x0, a.p, q)
    la, lb = graded_colength_vector(a, n), graded_colength_vector(b, n)
    scale = q ** (a.d + b.d - 1)
    cauchy = Fraction(sum(la[i] * lb[m - i] for i in range(m + 1)), scale)
    tensor = density_approximant(box_tensor([a, b]).combined, n)(Fraction(m, q))
    conv = _step_convolution(a, b, n)
    phi = evaluate(conv, Fraction(m + 1, q))
    return PhiReport(Fraction(m, q), q, cauchy == tensor == phi, cauchy, tensor, phi)


@lru_cache(maxsize=32)
def _step_convolution(a: GradedPair, b: GradedPair, n: int):
    return convolve(from_step(density_approximant(a, n)), from_step(density_approximant(b, n)))


def phi_lattice_sweep(a: GradedPair, b: GradedPair, n: int) -> list[PhiReport]:
    """phi_lattice_identity at every m/q up to the tensor pair's support."""
    q = a.q(n)
    top = box_tensor([a, b]).combined.vanishing_bound(q)
    return [phi_lattice_identity(a, b, n, Fraction(m, q)) for m in range(top + 1)]


def convolution_gap(a: GradedPair, b: GradedPair, n: int, grid: int = 256) -> Fraction:
    """Certified bound on sup |f_n(tensor) - f_n(a) * f_n(b)|."""
    tensor = from_step(density_approximant(box_tensor([a, b]).combined, n))
    return sup_distance_bound(tensor, _step_convolution(a, b, n), grid)
