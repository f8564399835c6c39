from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkdensity.curve import conic_curve, density_pair
from hkdensity.errors import ValidationError
from hkdensity.graded_core import GradedPair, StepDensity, density_approximant
from hkdensity.piecewise import (
    PiecewisePoly,
    convolve,
    evaluate,
    format_decimal,
    from_step,
    integrate,
    sup_distance_bound,
    to_csv,
)

from oracles import symbolic_convolution_at

IND = PiecewisePoly.indicator(0, 1)
TENT = PiecewisePoly((0, 1, 2), ((0, 1), (2, -1)))
XY = GradedPair.maximal(2)


def test_canonical_form_merges_and_trims():
    f = PiecewisePoly((0, 1, 2, 3, 4), ((), (1,), (1,), ()))
    assert f.breakpoints == (1, 3) and f.pieces == ((1,),)
    assert PiecewisePoly((0, 1), ((0, 0),)).is_zero()


def test_rejects_bad_breakpoints():
    with pytest.raises(ValidationError):
        PiecewisePoly((0, 0), ((1,),))
    with pytest.raises(ValidationError):
        PiecewisePoly((0, 1, 2), ((1,),))


def test_from_step():
    assert from_step(density_approximant(XY, 1)) == PiecewisePoly(
        (0, Fraction(1, 2), 1, Fraction(3, 2)), ((Fraction(1, 2),), (1,), (Fraction(1, 2),))
    )
    assert from_step(StepDensity(4, (Fraction(0),) * 3)).is_zero()
    f = from_step(density_approximant(XY, 2))
    # lengths 1,2,3,4,3,2,1 over q = 4
    assert [p[0] for p in f.pieces] == [Fraction(k, 4) for k in (1, 2, 3, 4, 3, 2, 1)]
    assert f.support == (0, Fraction(7, 4))


def test_eval():
    tent = convolve(IND, IND)
    assert evaluate(tent, Fraction(1, 2)) == Fraction(1, 2)
    assert evaluate(tent, 1) == 1
    assert evaluate(tent, -1) == 0
    assert evaluate(tent, 2) == 0
    # right-continuous at interior jumps
    step = from_step(density_approximant(XY, 1))
    assert step(Fraction(1, 2)) == 1 and step.left_limit(Fraction(1, 2)) == Fraction(1, 2)


def test_integrate():
    assert integrate(IND) == 1
    assert integrate(TENT) == 1
    assert integrate(density_pair(conic_curve())) == Fraction(3, 2)
    assert integrate(TENT, 0, 1) == Fraction(1, 2)
    assert integrate(TENT, Fraction(1, 2), Fraction(3, 2)) == Fraction(3, 4)


def test_convolve_examples():
    assert convolve(IND, IND) == TENT
    assert convolve(IND, PiecewisePoly.zero()).is_zero()
    tt = convolve(TENT, TENT)
    assert tt(2) == Fraction(2, 3)
    # values frozen from the sympy oracle
    assert tt(1) == Fraction(1, 6)
    assert tt(Fraction(1, 3)) == Fraction(1, 162)
    assert tt.support == (0, 4) and tt.degree == 3


@pytest.mark.parametrize("x0", [Fraction(1, 3), Fraction(7, 5), 2, Fraction(5, 2)])
def test_convolve_matches_symbolic_oracle(x0):
    f = PiecewisePoly((0, Fraction(1, 2), 2), ((1, 2), (3, 0, -1)))
    g = PiecewisePoly((-1, 0, 1), ((2,), (1, 1)))
    assert convolve(f, g)(x0) == symbolic_convolution_at(f, g, x0)


def test_sup_distance_bound():
    assert sup_distance_bound(TENT, TENT) == 0
    assert sup_distance_bound(IND, PiecewisePoly.zero()) >= 1
    step = from_step(density_approximant(XY, 6))
    assert sup_distance_bound(TENT, step) <= Fraction(3, 64)
    with pytest.raises(ValidationError):
        sup_distance_bound(TENT, step, 0)


def test_sup_distance_bound_is_an_upper_bound_for_curved_pieces():
    tt = convolve(TENT, TENT)
    dense = max(abs(tt(Fraction(k, 1000))) for k in range(4001))
    for grid in (1, 4, 64):
        assert sup_distance_bound(tt, PiecewisePoly.zero(), grid) >= dense
    assert sup_distance_bound(tt, PiecewisePoly.zero(), 256) - Fraction(2, 3) < Fraction(1, 100)


def test_csv_rendering():
    text = to_csv(TENT, 0, 2, 5)
    assert text.splitlines() == ["x,f(x)", "0,0", "0.5,0.5", "1,1", "1.5,0.5", "2,0"]
    assert format_decimal(Fraction(1, 3), 5) == "0.33333"
    assert format_decimal(Fraction(-7, 2)) == "-3.5"


# -- properties ----------------------------------------------------------------

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def piecewise(draw, max_pieces=3, max_degree=2):
    k = draw(st.integers(1, max_pieces))
    start = draw(st.fractions(min_value=-2, max_value=2, max_denominator=4))
    widths = draw(st.lists(st.fractions(min_value=Fraction(1, 4), max_value=2, max_denominator=4), min_size=k, max_size=k))
    bps = [start]
    for w in widths:
        bps.append(bps[-1] + w)
    pieces = [tuple(draw(st.lists(small, min_size=1, max_size=max_degree + 1))) for _ in range(k)]
    return PiecewisePoly(tuple(bps), tuple(pieces))


@settings(max_examples=40, deadline=None)
@given(piecewise(), piecewise())
def test_convolution_commutes(f, g):
    assert convolve(f, g) == convolve(g, f)


@settings(max_examples=20, deadline=None)
@given(piecewise(max_pieces=2, max_degree=1), piecewise(max_pieces=2, max_degree=1), piecewise(max_pieces=2, max_degree=1))
def test_convolution_associates(f, g, h):
    assert convolve(f, convolve(g, h)) == convolve(convolve(f, g), h)


@settings(max_examples=40, deadline=None)
@given(piecewise(), piecewise())
def test_mass_multiplies(f, g):
    assert integrate(convolve(f, g)) == integrate(f) * integrate(g)


@settings(max_examples=40, deadline=None)
@given(piecewise(), piecewise())
def test_support_adds(f, g):
    fg = convolve(f, g)
    if fg.is_zero():
        return
    # canonical trimming may only shrink the support if the ends vanish identically
    assert fg.support[0] >= f.support[0] + g.support[0]
    assert fg.support[1] <= f.support[1] + g.support[1]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_support_adds_exactly_for_positive_steps(n1, n2):
    f = from_step(density_approximant(XY, n1))
    g = from_step(density_approximant(GradedPair.from_gens([(2, 0), (0, 1)]), n2))
    fg = convolve(f, g)
    assert fg.support == (f.support[0] + g.support[0], f.support[1] + g.support[1])


@settings(max_examples=40, deadline=None)
@given(piecewise(), small, small)
def test_partial_integrals_add_up(f, a, b):
    lo, hi = f.support
    assert integrate(f, lo, a) + integrate(f, a, hi) == integrate(f)
    assert integrate(f, a, b) == -integrate(f, b, a)


@settings(max_examples=40, deadline=None)
@given(piecewise(), piecewise(), small)
def test_linear_structure(f, g, x):
    assert (f + g)(x) == f(x) + g(x)
    assert (f - g)(x) == f(x) - g(x)
    assert (f - f).is_zero()
