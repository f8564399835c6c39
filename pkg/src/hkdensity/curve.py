"""Projective curves: HK density and its Fourier transform from strong HN data.

The input is the polarisation degree d, the strong Harder-Narasimhan data
(normalised slopes a_j, ranks r_j) of the syzygy bundle V of the ideal
generators, and the generator degree profile (degrees e(k), multiplicities
s_k).  The bundle M = sum O(1 - e_i) has slopes 1 - e(k) with ranks s_k.

Consistency of the data is the pair of identities

    sum_k s_k = sum_j r_j + 1,
    sum_j a_j r_j - sum_k (1 - e(k)) s_k = -d,

the second coming from deg V = deg M - d in the defining exact sequence.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import RangeError, ValidationError, VerificationError
from .piecewise import PiecewisePoly, format_rational, integrate

TAU = 1e-3
SERIES_TOL = 1e-14


@dataclass(frozen=True)
class StrongHNData:
    slopes: tuple[Fraction, ...]
    ranks: tuple[int, ...]

    def __post_init__(self):
        slopes = tuple(Fraction(a) for a in self.slopes)
        ranks = tuple(self.ranks)
        if not slopes:
            raise ValidationError("HN data needs at least one slope")
        if len(slopes) != len(ranks):
            raise ValidationError(f"{len(slopes)} slopes but {len(ranks)} ranks")
        if any(isinstance(r, bool) or not isinstance(r, int) or r < 1 for r in ranks):
            raise ValidationError(f"ranks must be positive integers, got {list(ranks)}")
        if any(a <= b for a, b in zip(slopes, slopes[1:])):
            raise ValidationError(f"slopes must be strictly decreasing, got {[str(a) for a in slopes]}")
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "ranks", ranks)


@dataclass(frozen=True)
class GeneratorProfile:
    degrees: tuple[int, ...]
    mults: tuple[int, ...]

    def __post_init__(self):
        degrees, mults = tuple(self.degrees), tuple(self.mults)
        if not degrees:
            raise ValidationError("generator profile needs at least one degree")
        if len(degrees) != len(mults):
            raise ValidationError(f"{len(degrees)} degrees but {len(mults)} multiplicities")
        for name, vals in (("degrees", degrees), ("multiplicities", mults)):
            if any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in vals):
                raise ValidationError(f"{name} must be positive integers, got {list(vals)}")
        if any(a >= b for a, b in zip(degrees, degrees[1:])):
            raise ValidationError(f"degrees must be strictly increasing, got {list(degrees)}")
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "mults", mults)

    def as_hn(self) -> StrongHNData:
        """HN data of M = sum O(1 - e_i): slopes 1 - e(k) with ranks s_k."""
        return StrongHNData(tuple(Fraction(1 - e) for e in self.degrees), self.mults)


@dataclass(frozen=True)
class CurvePair:
    d: int
    hn: StrongHNData
    profile: GeneratorProfile

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int) or self.d < 1:
            raise ValidationError(f"curve degree must be a positive integer, got {self.d!r}")


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    rank_sides: tuple[int, int] = (0, 0)
    degree_sides: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    # whether the degree sum equals +d instead of -d; +d is never consistent
    # with a non-empty syzygy bundle, recorded only for comparison
    degree_equals_plus_d: bool = False

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": list(self.violations),
            "rank_identity": {"sum_s": self.rank_sides[0], "sum_r_plus_1": self.rank_sides[1]},
            "degree_identity": {
                "sum_a_r_minus_sum_1_minus_e_s": format_rational(self.degree_sides[0]),
                "expected": format_rational(self.degree_sides[1]),
                "equals_plus_d": self.degree_equals_plus_d,
            },
        }


def validate(c: CurvePair) -> ValidationReport:
    hn, prof = c.hn, c.profile
    violations = []
    sum_s, sum_r1 = sum(prof.mults), sum(hn.ranks) + 1
    if sum_s != sum_r1:
        violations.append(f"rank identity violated: sum s_k = {sum_s} but sum r_j + 1 = {sum_r1}")
    lhs = sum(a * r for a, r in zip(hn.slopes, hn.ranks)) - sum((1 - e) * s for e, s in zip(prof.degrees, prof.mults))
    if lhs != -c.d:
        violations.append(
            f"degree identity violated: sum a_j r_j - sum (1 - e(k)) s_k = {format_rational(lhs)} but -d = {-c.d}"
        )
    positive = [a for a in hn.slopes if a > 0]
    if positive:
        violations.append(f"syzygy slopes must be <= 0, got {[format_rational(a) for a in positive]}")
    return ValidationReport(not violations, violations, (sum_s, sum_r1), (lhs, Fraction(-c.d)), lhs == c.d)


def _require_valid(c: CurvePair) -> None:
    report = validate(c)
    if not report.ok:
        raise ValidationError("; ".join(report.violations))


def density_bundle(hn: StrongHNData, d: int) -> PiecewisePoly:
    """Piecewise-linear density of a bundle with strong HN data ``hn``.

    On [1 - a_j/d, 1 - a_{j+1}/d] (a_0 = 0) the value is
    sum_{k > j} -(a_k r_k + r_k d (x - 1)).
    """
    if any(a > 0 for a in hn.slopes):
        raise ValidationError(f"slopes must be <= 0, got {[format_rational(a) for a in hn.slopes]}")
    slopes = (Fraction(0),) + hn.slopes
    bps, pieces = [], []
    for j in range(len(hn.slopes)):
        left, right = 1 - slopes[j] / d, 1 - slopes[j + 1] / d
        const, lin = Fraction(0), Fraction(0)
        for a, r in zip(hn.slopes[j:], hn.ranks[j:]):
            # -(a r + r d (x - 1)) = (r d - a r) - r d x
            const += r * d - a * r
            lin -= r * d
        if left < right:
            if not bps:
                bps.append(left)
            bps.append(right)
            pieces.append((const, lin))
    return PiecewisePoly(tuple(bps), tuple(pieces))


def density_pair(c: CurvePair) -> PiecewisePoly:
    """d x on [0, 1], then f_V - f_M on [1, oo)."""
    _require_valid(c)
    head = PiecewisePoly((0, 1), ((0, c.d),))
    return head + density_bundle(c.hn, c.d) - density_bundle(c.profile.as_hn(), c.d)


@dataclass(frozen=True)
class FTClosedForm:
    """prefactor / xi^2 * sum_t c_t exp(-i w_t xi)."""

    prefactor: Fraction
    terms: tuple[tuple[Fraction, Fraction], ...]

    def power_sum(self, k: int) -> Fraction:
        """sum_t c_t w_t^k; k = 0, 1 must vanish for the origin to be removable."""
        return sum((c * w**k for c, w in self.terms), Fraction(0))

    def value_at_zero(self) -> Fraction:
        # prefactor * (-i)^2 * sum c w^2 / 2
        return -self.prefactor * self.power_sum(2) / 2

    def cancels(self) -> bool:
        return self.power_sum(0) == 0 and self.power_sum(1) == 0

    def to_json(self) -> dict:
        return {
            "prefactor": format_rational(self.prefactor),
            "terms": [{"coeff": format_rational(c), "freq": format_rational(w)} for c, w in self.terms],
        }


def ft_closed_form(c: CurvePair) -> FTClosedForm:
    _require_valid(c)
    d = c.d
    terms = [(Fraction(r), 1 - a / d) for a, r in zip(c.hn.slopes, c.hn.ranks)]
    terms += [(Fraction(-s), 1 - Fraction(1 - e, d)) for e, s in zip(c.profile.degrees, c.profile.mults)]
    terms.append((Fraction(1), Fraction(0)))
    return FTClosedForm(Fraction(-d), tuple(terms))


def _exp_tail(z: complex) -> complex:
    """exp(z) - 1 - z without cancellation for small z."""
    if abs(z) > 0.5:
        return cmath.exp(z) - 1 - z
    term, total, n = z * z / 2, 0j, 2
    while abs(term) > 1e-18 * max(abs(total), 1e-300):
        total += term
        n += 1
        term *= z / n
    return total


def ft_eval(cf: FTClosedForm, xi, *, tau: float = TAU, path: str = "auto") -> complex:
    """Evaluate the closed form at complex ``xi``.

    The direct path sums c_t (exp(-i w_t xi) - 1 + i w_t xi), which equals the
    plain exponential sum once the constant and linear sums vanish, and avoids
    losing digits to the 1/xi^2 division.  The series path evaluates
    prefactor * sum_{k>=2} (sum_t c_t (-i w_t)^k / k!) xi^(k-2).
    """
    if not cf.cancels():
        raise ValidationError("closed form has a pole at 0: constant or linear term does not cancel")
    xi = complex(xi)
    omega = max(abs(w) for _, w in cf.terms)
    if abs(xi.imag) * float(omega) > 700:
        raise RangeError(f"|Im xi| * max frequency = {abs(xi.imag) * float(omega):.4g} exceeds the double range")
    if path == "auto":
        path = "series" if abs(xi) < tau else "direct"
    if path == "direct":
        if xi == 0:
            return complex(float(cf.value_at_zero()))
        s = sum(float(c) * _exp_tail(-1j * float(w) * xi) for c, w in cf.terms)
        return float(cf.prefactor) * s / (xi * xi)
    if path == "series":
        r = float(omega) * abs(xi)
        mass = float(sum(abs(c) for c, _ in cf.terms))
        pre = abs(float(cf.prefactor))
        # tail after k = K: pre * mass * W^(K+1) |xi|^(K-1) / (K+1)! * e^r
        K = 2
        while True:
            tail = pre * mass * float(omega) ** (K + 1) * abs(xi) ** (K - 1) / math.factorial(K + 1) * math.exp(r)
            if tail <= SERIES_TOL or K > 200:
                break
            K += 1
        total = 0j
        for k in range(2, K + 1):
            coeff = cf.power_sum(k) / math.factorial(k)
            total += (-1j) ** k * float(coeff) * xi ** (k - 2)
        return float(cf.prefactor) * total
    raise ValueError(f"unknown path {path!r}")


def e_hk_curve(c: CurvePair, tol: float = 1e-10) -> Fraction:
    """HK multiplicity as the exact integral of the density, cross-checked at xi = 0."""
    value = integrate(density_pair(c))
    at_zero = ft_eval(ft_closed_form(c), 0)
    if abs(at_zero - float(value)) > tol:
        raise VerificationError(
            f"integral {value} and closed-form transform at 0 ({at_zero}) disagree", lhs=value, rhs=at_zero
        )
    return value


def _parse_rational(v, what: str) -> Fraction:
    if isinstance(v, bool):
        raise ValidationError(f"{what}: expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(f"{what}: expected an integer or a 'num/den' string, got {v!r}")


def curve_from_json(obj: dict) -> CurvePair:
    """Parse ``{"d": int, "hn": {"slopes": [...], "ranks": [...]}, "profile": {"degrees": [...], "mults": [...]}}``."""
    if not isinstance(obj, dict):
        raise ValidationError("curve JSON must be an object")
    unknown = set(obj) - {"d", "hn", "profile"}
    if unknown:
        raise ValidationError(f"unknown keys in curve JSON: {sorted(unknown)}")
    hn, prof = obj.get("hn"), obj.get("profile")
    if not isinstance(hn, dict) or set(hn) != {"slopes", "ranks"}:
        raise ValidationError("'hn' must be an object with exactly 'slopes' and 'ranks'")
    if not isinstance(prof, dict) or set(prof) != {"degrees", "mults"}:
        raise ValidationError("'profile' must be an object with exactly 'degrees' and 'mults'")
    for key, val in (("hn.slopes", hn["slopes"]), ("hn.ranks", hn["ranks"]),
                     ("profile.degrees", prof["degrees"]), ("profile.mults", prof["mults"])):
        if not isinstance(val, list):
            raise ValidationError(f"'{key}' must be a list")
    slopes = tuple(_parse_rational(v, f"hn.slopes[{i}]") for i, v in enumerate(hn["slopes"]))
    return CurvePair(
        obj.get("d"),
        StrongHNData(slopes, tuple(hn["ranks"])),
        GeneratorProfile(tuple(prof["degrees"]), tuple(prof["mults"])),
    )


def curve_to_json(c: CurvePair) -> dict:
    return {
        "d": c.d,
        "hn": {"slopes": [format_rational(a) for a in c.hn.slopes], "ranks": list(c.hn.ranks)},
        "profile": {"degrees": list(c.profile.degrees), "mults": list(c.profile.mults)},
    }


def load_curve(path: str) -> CurvePair:
    with open(path) as fh:
        return curve_from_json(json.load(fh))


def tent_curve() -> CurvePair:
    """(k[x, y], (x, y)) seen as the line P^1 with O(1)."""
    return CurvePair(1, StrongHNData((Fraction(-1),), (1,)), GeneratorProfile((1,), (2,)))


def conic_curve() -> CurvePair:
    """The quadric cone k[u, v, w]/(uw - v^2) with its maximal ideal."""
    return CurvePair(2, StrongHNData((Fraction(-1),), (2,)), GeneratorProfile((1,), (3,)))


def term_table(cf: FTClosedForm) -> str:
    rows = ["coeff,freq"]
    rows += [f"{format_rational(c)},{format_rational(w)}" for c, w in cf.terms]
    return "\n".join(rows) + "\n"
