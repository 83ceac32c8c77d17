"""Likelihood-ratio Haar smoothing and variance stabilisation for Poisson
and scaled chi-squared signals."""

__version__ = "0.1.0"

from .coeffs import (
    Gaussian,
    LRHDecomposition,
    Poisson,
    ScaledChiSquared,
    f_chisq,
    f_coefficient,
    f_poisson,
    g_chisq,
    g_coefficient,
    g_poisson,
    lrh_forward,
    parse_family,
)
from .denoise import DenoiseConfig, denoise, denoise_decimated, denoise_ti, mse, universal_threshold
from .errors import DomainError, InfeasibleCoefficientError, LengthError, LrhaarError, ShapeError
from .haar import (
    HaarDecomposition,
    forward_haar,
    forward_stationary,
    inverse_haar,
    inverse_stationary_average,
    local_means,
)
from .stabilize import invert_pair, lrh_inverse, stabilize, stabilize_ti, stabilized_residual, unstabilize
