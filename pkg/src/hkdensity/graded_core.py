"""Monomial graded pairs, Frobenius bracket powers and graded colengths.

A pair is a polynomial ring k[x_1..x_d] together with a monomial ideal of
finite colength.  For monomial ideals the graded pieces of R/I^[q] have a
basis of standard monomials, so every length below is an exact lattice-point
count and the characteristic only enters through the grid q = p^n.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from sympy import isprime

from .errors import TooManyGeneratorsError, ValidationError

Exponent = tuple[int, ...]

DEFAULT_IE_CAP = 20
IE_CAP_ENV = "HKDF_IE_CAP"


def ie_cap() -> int:
    """Inclusion-exclusion generator cap, overridable through ``HKDF_IE_CAP``."""
    raw = os.environ.get(IE_CAP_ENV)
    if raw is None:
        return DEFAULT_IE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(f"{IE_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValidationError(f"{IE_CAP_ENV} must be positive, got {cap}")
    return cap


def divides(a: Exponent, b: Exponent) -> bool:
    """True when x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def _check_exponent(e: Sequence[int], d: int, index: int | None = None) -> Exponent:
    where = "" if index is None else f" (generator {index})"
    if len(e) != d:
        raise ValidationError(f"exponent {list(e)}{where} has length {len(e)}, expected {d}")
    out = []
    for v in e:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValidationError(f"exponent {list(e)}{where} has a non-integer entry {v!r}")
        if v < 0:
            raise ValidationError(f"exponent {list(e)}{where} has a negative entry {v}")
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal in ``d`` variables, stored by its minimal generators.

    Generators are kept sorted so that structural equality is ideal equality.
    Finite colength is not enforced here; see :class:`GradedPair`.
    """

    d: int
    gens: tuple[Exponent, ...]

    def __post_init__(self):
        if self.d < 1:
            raise ValidationError(f"variable count must be positive, got {self.d}")
        if not self.gens:
            raise ValidationError("an ideal needs at least one generator")
        gens = [_check_exponent(g, self.d, i) for i, g in enumerate(self.gens)]
        for i, a in enumerate(gens):
            for j, b in enumerate(gens):
                if i != j and divides(a, b):
                    raise ValidationError(f"generator {j} {list(b)} is divisible by generator {i} {list(a)}")
        object.__setattr__(self, "gens", tuple(sorted(gens, reverse=True)))

    @property
    def pure_powers(self) -> dict[int, int]:
        """Map variable index -> exponent c with x_i^c a generator."""
        out = {}
        for g in self.gens:
            support = [i for i, v in enumerate(g) if v]
            if len(support) == 1:
                out[support[0]] = g[support[0]]
        return out

    def contains(self, e: Sequence[int]) -> bool:
        return any(divides(g, e) for g in self.gens)

    def __str__(self):
        return "(" + ", ".join(_monomial_str(g) for g in self.gens) + ")"


def _monomial_str(e: Exponent) -> str:
    names = "xyzuvwabc" if len(e) <= 9 else None
    parts = []
    for i, v in enumerate(e):
        if not v:
            continue
        name = names[i] if names else f"x{i + 1}"
        parts.append(name if v == 1 else f"{name}^{v}")
    return "*".join(parts) or "1"


def minimalize(gens: Iterable[Sequence[int]], d: int) -> MonomialIdeal:
    """Drop every generator divisible by another one."""
    exps = {_check_exponent(g, d, i) for i, g in enumerate(gens)}
    if not exps:
        raise ValidationError("an ideal needs at least one generator")
    minimal = [a for a in exps if not any(b != a and divides(b, a) for b in exps)]
    return MonomialIdeal(d, tuple(minimal))


def is_finite_colength(ideal: MonomialIdeal) -> bool:
    return len(ideal.pure_powers) == ideal.d


def frobenius_power(ideal: MonomialIdeal, q: int) -> MonomialIdeal:
    """The bracket power I^[q]: every generator exponent scaled by q."""
    if q < 1:
        raise ValidationError(f"q must be at least 1, got {q}")
    return MonomialIdeal(ideal.d, tuple(tuple(q * v for v in g) for g in ideal.gens))


@lru_cache(maxsize=512)
def _lcm_degree_table(ideal: MonomialIdeal) -> tuple[tuple[int, int], ...]:
    # Signed lcm lattice: {lcm exponent: coefficient}, starting from the unit
    # monomial (all monomials) and subtracting each generator's multiples.
    nodes: dict[Exponent, int] = {(0,) * ideal.d: 1}
    for g in ideal.gens:
        update = dict(nodes)
        for e, c in nodes.items():
            l = tuple(max(a, b) for a, b in zip(e, g))
            update[l] = update.get(l, 0) - c
        nodes = {e: c for e, c in update.items() if c}
    by_degree: dict[int, int] = {}
    for e, c in nodes.items():
        deg = sum(e)
        by_degree[deg] = by_degree.get(deg, 0) + c
    return tuple(sorted((k, c) for k, c in by_degree.items() if c))


def count_standard_monomials(ideal: MonomialIdeal, m: int, cap: int | None = None) -> int:
    """Number of degree-``m`` monomials outside ``ideal``.

    Inclusion-exclusion over the lcm lattice of the generators: the degree-m
    multiples of x^a number C(m - |a| + d - 1, d - 1).  Lattice nodes with equal
    lcm are merged as they are produced, which keeps the table small for the
    ideals met in practice.
    """
    if m < 0:
        return 0
    cap = ie_cap() if cap is None else cap
    if len(ideal.gens) > cap:
        raise TooManyGeneratorsError(
            f"too many generators: {len(ideal.gens)} exceeds the inclusion-exclusion cap {cap}"
        )
    d = ideal.d
    total = 0
    for deg, c in _lcm_degree_table(ideal):
        if deg <= m:
            total += c * comb(m - deg + d - 1, d - 1)
    return total


@dataclass(frozen=True)
class GradedPair:
    """(k[x_1..x_d], I) with d >= 2, prime characteristic p and I of finite colength."""

    d: int
    p: int
    ideal: MonomialIdeal

    def __post_init__(self):
        if self.d < 2:
            raise ValidationError(f"dimension must be at least 2, got {self.d}")
        if not isprime(self.p):
            raise ValidationError(f"characteristic must be prime, got {self.p}")
        if self.ideal.d != self.d:
            raise ValidationError(f"ideal lives in {self.ideal.d} variables, ring has {self.d}")
        if not is_finite_colength(self.ideal):
            missing = sorted(set(range(self.d)) - set(self.ideal.pure_powers))
            raise ValidationError(f"ideal is not of finite colength: no pure power of variables {missing}")

    @classmethod
    def from_gens(cls, gens: Iterable[Sequence[int]], p: int = 2) -> GradedPair:
        gens = [tuple(g) for g in gens]
        if not gens:
            raise ValidationError("an ideal needs at least one generator")
        d = len(gens[0])
        return cls(d, p, minimalize(gens, d))

    @classmethod
    def maximal(cls, d: int, p: int = 2) -> GradedPair:
        return cls.from_gens([tuple(int(i == j) for j in range(d)) for i in range(d)], p)

    def q(self, n: int) -> int:
        if n < 0:
            raise ValidationError(f"Frobenius level must be non-negative, got {n}")
        return self.p**n

    def vanishing_bound(self, q: int) -> int:
        """Number of degrees that can carry standard monomials of I^[q]."""
        return sum(q * c - 1 for c in self.ideal.pure_powers.values()) + 1

    def to_json(self) -> dict:
        return {"d": self.d, "p": self.p, "gens": [list(g) for g in self.ideal.gens]}


def pair_from_json(obj: dict, p: int | None = None) -> GradedPair:
    """Build a pair from ``{"d": int, "p": int, "gens": [[int, ...], ...]}``.

    ``p`` fills in a missing characteristic; it must agree with one that is present.
    """
    if not isinstance(obj, dict):
        raise ValidationError("pair JSON must be an object")
    unknown = set(obj) - {"d", "p", "gens"}
    if unknown:
        raise ValidationError(f"unknown keys in pair JSON: {sorted(unknown)}")
    d = obj.get("d")
    if isinstance(d, bool) or not isinstance(d, int):
        raise ValidationError(f"'d' must be an integer, got {d!r}")
    gens = obj.get("gens")
    if not isinstance(gens, list) or not gens:
        raise ValidationError("'gens' must be a non-empty list of exponent lists")
    checked = []
    for i, g in enumerate(gens):
        if not isinstance(g, list):
            raise ValidationError(f"generator {i} must be a list of integers, got {g!r}")
        checked.append(_check_exponent(g, d, i))
    json_p = obj.get("p")
    if json_p is not None and (isinstance(json_p, bool) or not isinstance(json_p, int)):
        raise ValidationError(f"'p' must be an integer, got {json_p!r}")
    if json_p is not None and p is not None and json_p != p:
        raise ValidationError(f"characteristic conflict: JSON has p={json_p}, option has p={p}")
    char = json_p if json_p is not None else (p if p is not None else 2)
    return GradedPair(d, char, minimalize(checked, d))


@dataclass(frozen=True)
class HilbertVector:
    """Graded lengths l(R/I^[q])_m for m = 0, 1, ...; zero past the stored entries."""

    q: int
    lengths: tuple[int, ...]

    def __getitem__(self, m: int) -> int:
        if 0 <= m < len(self.lengths):
            return self.lengths[m]
        return 0

    def __len__(self):
        return len(self.lengths)

    @property
    def total(self) -> int:
        return sum(self.lengths)


@dataclass(frozen=True)
class StepDensity:
    """Step function taking ``values[i]`` on [i/q, (i+1)/q) and 0 elsewhere."""

    q: int
    values: tuple[Fraction, ...]

    def __call__(self, x) -> Fraction:
        if x < 0:
            return Fraction(0)
        i = int(Fraction(x) * self.q // 1)
        if i < len(self.values):
            return self.values[i]
        return Fraction(0)

    @property
    def support_end(self) -> Fraction:
        return Fraction(len(self.values), self.q)


def graded_colength_vector(pair: GradedPair, n: int) -> HilbertVector:
    q = pair.q(n)
    ideal = frobenius_power(pair.ideal, q)
    lengths = [count_standard_monomials(ideal, m) for m in range(pair.vanishing_bound(q))]
    while lengths and lengths[-1] == 0:
        lengths.pop()
    return HilbertVector(q, tuple(lengths))


def density_approximant(pair: GradedPair, n: int) -> StepDensity:
    """f_n(x) = l(R/I^[q])_{floor(qx)} / q^(d-1) as exact step data."""
    hv = graded_colength_vector(pair, n)
    scale = hv.q ** (pair.d - 1)
    return StepDensity(hv.q, tuple(Fraction(v, scale) for v in hv.lengths))


def hk_approx(pair: GradedPair, n: int) -> Fraction:
    """l(R/I^[q]) / q^d, which converges to the Hilbert-Kunz multiplicity."""
    hv = graded_colength_vector(pair, n)
    return Fraction(hv.total, hv.q**pair.d)
