"""Likelihood-ratio Haar (LRH) and Fisz coefficients.

All coefficient functions are vectorised over ``u`` (left half-block mean),
``v`` (right half-block mean) and ``j`` (scale; each half holds
``2**(j-1)`` observations).

With ``a = (u + v) / 2`` and ``r = (u - v) / (u + v)`` the two likelihood
ratio radicands reduce to functions of ``r`` alone, which is how they are
evaluated here:

* Poisson: ``u log u + v log v - 2 a log a = a * phi(r)`` with
  ``phi(r) = (1+r) log(1+r) + (1-r) log(1-r) = 2 r atanh(r) + log(1 - r**2)``;
* scaled chi-squared: ``m [log a - log(u)/2 - log(v)/2] = -m/2 * log(1 - r**2)``.

Both forms avoid the cancellation of the raw ``x log x`` expression when
``u`` and ``v`` are close, which matters for exact inversion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .haar import HaarDecomposition, dyadic_level, forward_haar, local_means

LOG4 = 2.0 * np.log(2.0)
RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class Poisson:
    def __str__(self):
        return "poisson"


@dataclass(frozen=True)
class ScaledChiSquared:
    """``X = sigma^2 m^-1 chi^2_m``; ``m = 2`` is the exponential model."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"degrees of freedom must be a positive integer, got {self.m}")

    def __str__(self):
        return f"chisq:{self.m}"


@dataclass(frozen=True)
class Gaussian:
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def __str__(self):
        return f"gaussian:{self.sigma!r}"


NoiseFamily = Union[Poisson, ScaledChiSquared, Gaussian]


def parse_family(text: str) -> NoiseFamily:
    """Parse ``poisson``, ``chisq:<m>``, ``exp`` or ``gaussian[:<sigma>]``."""
    text = text.strip().lower()
    if text == "poisson":
        return Poisson()
    if text in ("exp", "exponential"):
        return ScaledChiSquared(2)
    m = re.fullmatch(r"chisq:(\d+)", text)
    if m:
        return ScaledChiSquared(int(m.group(1)))
    m = re.fullmatch(r"gaussian(?::(.+))?", text)
    if m:
        return Gaussian(float(m.group(1)) if m.group(1) else 1.0)
    raise ValueError(f"unknown noise family {text!r}")


def phi_poisson(r):
    """``(1+r) log(1+r) + (1-r) log(1-r)`` on ``[-1, 1]``; even, ``phi(+-1) = 2 log 2``."""
    r = np.abs(np.asarray(r, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 2.0 * r * np.arctanh(r) + np.log1p(-r * r)
    return np.where(r >= 1.0, LOG4, out)


def _pair_ratio(u, v):
    total = u + v
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(total > 0, (u - v) / np.where(total > 0, total, 1.0), 0.0)
    return total / 2.0, r


def _check_radicand(rad):
    if np.any(rad < -RADICAND_TOL):
        raise ArithmeticError(f"negative likelihood-ratio radicand {np.min(rad)!r}")
    return np.maximum(rad, 0.0)


def _finish(value):
    return float(value) if np.ndim(value) == 0 else value


def _nonneg(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(u < 0) or np.any(v < 0):
        raise DomainError("Poisson half-means must be nonnegative")
    return u, v


def _positive(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(u <= 0) or np.any(v <= 0):
        raise DomainError("chi-squared half-means must be strictly positive")
    return u, v


def poisson_radicand(u, v):
    """``u log u + v log v - (u+v) log((u+v)/2)``, with ``0 log 0 = 0``."""
    u, v = _nonneg(u, v)
    a, r = _pair_ratio(u, v)
    return a * phi_poisson(r)


def chisq_radicand(u, v, m: int = 1):
    """``m [log((u+v)/2) - log(u)/2 - log(v)/2]``."""
    u, v = _positive(u, v)
    a, r = _pair_ratio(u, v)
    r2 = r * r
    # log1p is accurate for nearly equal halves; the direct ratio avoids
    # cancellation in 1 - r**2 when the halves are far apart
    with np.errstate(divide="ignore"):
        return -0.5 * m * np.where(r2 < 0.5, np.log1p(-r2), np.log((u / a) * (v / a)))


def g_poisson(u, v, j):
    rad = _check_radicand(poisson_radicand(u, v))
    sign = np.sign(np.asarray(u, dtype=float) - np.asarray(v, dtype=float))
    return _finish(sign * 2.0 ** (np.asarray(j) / 2.0) * np.sqrt(rad))


def g_chisq(u, v, j, m: int = 1):
    rad = _check_radicand(chisq_radicand(u, v, m))
    sign = np.sign(np.asarray(u, dtype=float) - np.asarray(v, dtype=float))
    return _finish(sign * 2.0 ** (np.asarray(j) / 2.0) * np.sqrt(rad))


def f_poisson(u, v, j):
    """Haar detail over the square root of the pooled mean; 0 when ``u = v = 0``."""
    u, v = _nonneg(u, v)
    a = (u + v) / 2.0
    with np.errstate(invalid="ignore", divide="ignore"):
        out = 2.0 ** (np.asarray(j) / 2.0 - 1.0) * (u - v) / np.sqrt(a)
    return _finish(np.where(a > 0, out, 0.0))


def f_chisq(u, v, j, m: int = 1):
    u, v = _positive(u, v)
    a = (u + v) / 2.0
    return _finish(2.0 ** ((np.asarray(j) - 3.0) / 2.0) * np.sqrt(m) * (u - v) / a)


def _gaussian_stat(u, v, j, sigma):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return _finish(2.0 ** (np.asarray(j) / 2.0 - 1.0) * (u - v) / sigma)


def g_coefficient(u, v, j, family: NoiseFamily):
    """Signed square-rooted likelihood ratio statistic for the given family.

    For :class:`Gaussian` this is the ordinary Haar detail divided by sigma.
    """
    if isinstance(family, Poisson):
        return g_poisson(u, v, j)
    if isinstance(family, ScaledChiSquared):
        return g_chisq(u, v, j, family.m)
    if isinstance(family, Gaussian):
        return _gaussian_stat(u, v, j, family.sigma)
    raise TypeError(f"unsupported noise family {family!r}")


def f_coefficient(u, v, j, family: NoiseFamily):
    """Fisz coefficient (Haar detail over the null-MLE of its standard deviation)."""
    if isinstance(family, Poisson):
        return f_poisson(u, v, j)
    if isinstance(family, ScaledChiSquared):
        return f_chisq(u, v, j, family.m)
    if isinstance(family, Gaussian):
        return _gaussian_stat(u, v, j, family.sigma)
    raise TypeError(f"unsupported noise family {family!r}")


def statistic(name: str):
    """Return the coefficient function for ``"lrh"`` or ``"fisz"``."""
    name = name.lower()
    if name == "lrh":
        return g_coefficient
    if name == "fisz":
        return f_coefficient
    raise ValueError(f"unknown statistic {name!r}; expected 'lrh' or 'fisz'")


def check_domain(x, family: NoiseFamily) -> np.ndarray:
    """Reject data the family cannot have produced, naming the first bad index."""
    x = np.asarray(x, dtype=float)
    if isinstance(family, Poisson):
        bad = np.flatnonzero(x < 0)
        if bad.size:
            raise DomainError(f"Poisson data must be nonnegative; x[{bad[0]}] = {x[bad[0]]!r}")
    elif isinstance(family, ScaledChiSquared):
        bad = np.flatnonzero(x <= 0)
        if bad.size:
            raise DomainError(f"chi-squared data must be strictly positive; x[{bad[0]}] = {x[bad[0]]!r}")
    return x


@dataclass(frozen=True)
class LRHDecomposition:
    """LRH coefficients ``g[j - 1]`` per scale plus the standard ``s_{J,1}``."""

    g: tuple[np.ndarray, ...]
    smooth_top: float
    n: int
    family: NoiseFamily

    @property
    def levels(self) -> int:
        return len(self.g)

    def as_haar(self) -> HaarDecomposition:
        """Reinterpret the g-coefficients as Haar details (the map ``G``)."""
        return HaarDecomposition(self.g, self.smooth_top, self.n)


def lrh_forward(x, family: NoiseFamily) -> LRHDecomposition:
    h = forward_haar(x)
    x = check_domain(x, family)
    lm = local_means(x)
    g = []
    for j in range(1, dyadic_level(x.size) + 1):
        u, v = lm.halves(j)
        g.append(np.asarray(g_coefficient(u, v, j, family), dtype=float))
    return LRHDecomposition(tuple(g), h.smooth_top, h.n, family)
