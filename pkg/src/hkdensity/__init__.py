"""Hilbert-Kunz density functions, their convolutions and Fourier transforms, in exact arithmetic."""

from .curve import (
    CurvePair,
    FTClosedForm,
    GeneratorProfile,
    StrongHNData,
    density_bundle,
    density_pair,
    e_hk_curve,
    ft_closed_form,
    ft_eval,
    validate,
)
from .errors import HKError, RangeError, TooManyGeneratorsError, ValidationError, VerificationError
from .fourier import check_convolution_theorem, check_growth_bound, ft_at_zero, ft_piecewise
from .graded_core import (
    GradedPair,
    HilbertVector,
    MonomialIdeal,
    StepDensity,
    count_standard_monomials,
    density_approximant,
    frobenius_power,
    graded_colength_vector,
    hk_approx,
    is_finite_colength,
    minimalize,
)
from .piecewise import PiecewisePoly, convolve, evaluate, from_step, integrate, sup_distance_bound
from .tensor_conv import (
    BoxTensorPair,
    box_tensor,
    convolution_gap,
    phi_lattice_identity,
    verify_cauchy,
)

__version__ = "0.1.0"
