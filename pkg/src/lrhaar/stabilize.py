"""The likelihood-ratio Haar transform ``G`` and its exact inverse.

``G(x)`` replaces every Haar detail of ``x`` by its LRH coefficient and runs
ordinary Haar synthesis.  ``G`` is a bijection: each parent smooth
coefficient fixes the sum of the two child block means and the LRH
coefficient fixes how far apart they are, through a function that is
strictly increasing in the gap.  :func:`invert_pair` solves for that gap.

Writing the child means as ``a (1 + r)`` and ``a (1 - r)`` with ``a`` their
average, the LRH coefficient at scale ``j`` is
``sign(r) 2**(j/2) sqrt(a phi(r))`` (Poisson) or
``sign(r) 2**(j/2) sqrt(-m/2 log(1 - r**2))`` (chi-squared), so inversion
is a one-dimensional root search for ``|r|`` in ``[0, 1]``.
"""

from __future__ import annotations

import numpy as np

from .coeffs import (
    LOG4,
    Gaussian,
    LRHDecomposition,
    NoiseFamily,
    Poisson,
    ScaledChiSquared,
    check_domain,
    g_coefficient,
    lrh_forward,
    phi_poisson,
)
from .errors import DomainError, InfeasibleCoefficientError, LengthError
from .haar import (
    dyadic_level,
    forward_haar,
    forward_stationary,
    inverse_haar,
    inverse_stationary_average,
)

MAX_BISECTIONS = 200
# relative slack on the attainable maximum before a Poisson pair is declared infeasible
FEASIBILITY_RTOL = 1e-12


def bisect_increasing(func, target, lo, hi, max_iter: int = MAX_BISECTIONS):
    """Vectorised bisection for ``func(r) = target`` with ``func`` increasing.

    Stops once every bracket has collapsed to adjacent floats, or after
    ``max_iter`` halvings.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    target = np.asarray(target, dtype=float)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not np.any(active):
            break
        below = func(mid) < target
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    return 0.5 * (lo + hi)


def _solve_gap_poisson(target):
    """``|r|`` with ``phi(r) = target``; ``target`` must lie in ``[0, 2 log 2]``.

    ``r**2 <= phi(r) <= 2 log 2 * r**2`` gives a bracket of relative width
    under 18%, so bisection reaches full precision in about 55 steps.
    """
    target = np.asarray(target, dtype=float)
    lo = np.sqrt(target / LOG4)
    hi = np.minimum(1.0, np.sqrt(target))
    r = bisect_increasing(phi_poisson, target, lo, hi)
    return np.where(target >= LOG4, 1.0, r)


def _solve_gap_chisq(target, m):
    # -m/2 log(1 - r^2) = target has the closed form below
    return np.sqrt(-np.expm1(-2.0 * target / m))


def _child_means(mean, g, j, family: NoiseFamily):
    """Vectorised core of :func:`invert_pair`, working with block means.

    Returns ``(left, right, infeasible)`` where ``infeasible`` flags pairs
    whose ``|g|`` no child pair can reach.
    """
    mean = np.asarray(mean, dtype=float)
    g = np.asarray(g, dtype=float)
    if not np.all(np.isfinite(g)):
        raise DomainError("LRH coefficients must be finite")
    scaled = (g / 2.0 ** (j / 2.0)) ** 2
    if isinstance(family, Gaussian):
        half_gap = g * family.sigma / 2.0 ** (j / 2.0)
        return mean + half_gap, mean - half_gap, np.zeros(mean.shape, dtype=bool)
    if isinstance(family, Poisson):
        if np.any(mean < 0):
            raise DomainError("Poisson block means must be nonnegative")
        with np.errstate(divide="ignore", invalid="ignore"):
            target = np.where(mean > 0, scaled / np.where(mean > 0, mean, 1.0), 0.0)
        infeasible = (target > LOG4 * (1 + FEASIBILITY_RTOL)) | ((mean == 0) & (g != 0))
        r = _solve_gap_poisson(np.minimum(target, LOG4))
    elif isinstance(family, ScaledChiSquared):
        if np.any(mean <= 0):
            raise DomainError("chi-squared block means must be strictly positive")
        r = _solve_gap_chisq(scaled, family.m)
        infeasible = r >= 1.0
        # 1 - |r| = (1 - r**2) / (1 + |r|) keeps the smaller child accurate when r is near 1
        big = mean * (1.0 + r)
        small = mean * np.exp(-2.0 * scaled / family.m) / (1.0 + r)
        return np.where(g >= 0, big, small), np.where(g >= 0, small, big), infeasible
    else:
        raise TypeError(f"unsupported noise family {family!r}")
    r = np.copysign(r, g)
    return mean * (1.0 + r), mean * (1.0 - r), infeasible


def invert_pair(s_parent: float, g: float, j: int, family: NoiseFamily) -> tuple[float, float]:
    """Child smooth coefficients ``(s_{j-1,2k-1}, s_{j-1,2k})`` from ``(s_{j,k}, g_{j,k})``."""
    mean = s_parent * 2.0 ** (-j / 2.0)
    left, right, infeasible = _child_means(mean, g, j, family)
    if infeasible:
        raise InfeasibleCoefficientError(f"|g| = {float(abs(g))!r} is not attainable at scale {j} "
                                         f"with parent smooth {s_parent!r}", scale=j)
    child_scale = 2.0 ** ((j - 1) / 2.0)
    return float(left * child_scale), float(right * child_scale)


def lrh_inverse(d: LRHDecomposition) -> np.ndarray:
    """Exact inverse of :func:`lrh_forward`, synthesising from scale J down to 1."""
    J = dyadic_level(d.n)
    if len(d.g) != J:
        raise LengthError(f"expected {J} coefficient levels, got {len(d.g)}")
    means = np.array([d.smooth_top * 2.0 ** (-J / 2.0)])
    for j in range(J, 0, -1):
        g = np.asarray(d.g[j - 1], dtype=float)
        if g.shape != means.shape:
            raise LengthError(f"scale {j}: expected {means.size} coefficients, got {g.size}")
        left, right, infeasible = _child_means(means, g, j, d.family)
        if np.any(infeasible):
            k = int(np.flatnonzero(infeasible)[0]) + 1
            raise InfeasibleCoefficientError(f"coefficient (j={j}, k={k}) = {float(g[k - 1])!r} is not attainable",
                                             scale=j, location=k)
        out = np.empty(2 * means.size)
        out[0::2], out[1::2] = left, right
        means = out
    return means


def stabilize(x, family: NoiseFamily) -> np.ndarray:
    """``G(x)``: Haar synthesis of the LRH coefficients and the top smooth."""
    return inverse_haar(lrh_forward(x, family).as_haar())


def unstabilize(y, family: NoiseFamily) -> np.ndarray:
    """``G^{-1}(y)``; raises :class:`InfeasibleCoefficientError` when ``y`` lies
    outside the range of ``G``."""
    h = forward_haar(y)
    return lrh_inverse(LRHDecomposition(h.details, h.smooth_top, h.n, family))


def stabilize_ti(x, family: NoiseFamily) -> np.ndarray:
    """Translation-invariant ``G``: the average of ``G`` over all cyclic shifts."""
    x = check_domain(x, family)
    sd = forward_stationary(x)
    g = [np.asarray(g_coefficient(sd.left[j - 1], sd.right[j - 1], j, family), dtype=float)
         for j in range(1, sd.levels + 1)]
    return inverse_stationary_average(sd.replace_details(g))


def stabilized_residual(x, theta, family: NoiseFamily, variant: str = "dec") -> np.ndarray:
    """``G(x) - G(theta)``, decimated (``"dec"``) or cycle-spun (``"ti"``)."""
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if x.shape != theta.shape:
        raise LengthError(f"length mismatch: {x.shape} vs {theta.shape}")
    transform = {"dec": stabilize, "ti": stabilize_ti}[variant]
    return transform(x, family) - transform(theta, family)

