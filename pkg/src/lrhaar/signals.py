"""Test signals and noise samplers.

Random streams come from numpy's PCG64 bit generator seeded through
``SeedSequence(seed, spawn_key=key)``.  A replication identified by a key
tuple always sees the same stream regardless of how many other
replications run or in what order.

Sampling algorithms are numpy's ``Generator.poisson`` (multiplication
method below intensity 10, Hormann's PTRS transformed rejection above) and
``Generator.gamma`` (Marsaglia-Tsang).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .haar import dyadic_level

RNG_DESCRIPTION = ("numpy PCG64 via SeedSequence(seed, spawn_key); poisson: multiplication (lam<10) / "
                   "PTRS rejection (lam>=10); gamma: Marsaglia-Tsang")

# Donoho-Johnstone (1994) knot positions, shared by blocks and bumps
DJ_POSITIONS = np.array([0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81])
BLOCKS_HEIGHTS = np.array([4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2])
BUMPS_HEIGHTS = np.array([4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2])
BUMPS_WIDTHS = np.array([0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005])

# (min, max) used for the blocks and bumps intensities in the comparison study
BLOCKS_RANGE = (0.681, 27.029)
BUMPS_RANGE = (1.0, 12.565)


def make_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))))


def grid(n: int) -> np.ndarray:
    """Sample points ``t_i = i / n`` for ``i = 1..n``."""
    return np.arange(1, n + 1) / n


def blocks(t) -> np.ndarray:
    """Piecewise-constant blocks; each step is right-continuous (takes its new
    value at the knot itself)."""
    t = np.asarray(t, dtype=float)
    return np.sum(BLOCKS_HEIGHTS * (t[:, None] >= DJ_POSITIONS), axis=1)


def bumps(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.sum(BUMPS_HEIGHTS / (1.0 + np.abs((t[:, None] - DJ_POSITIONS) / BUMPS_WIDTHS)) ** 4, axis=1)


SHAPES = {"blocks": blocks, "bumps": bumps}


@dataclass(frozen=True)
class TestSignalSpec:
    shape: str
    n: int
    target_min: float
    target_max: float

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {sorted(SHAPES)}")
        dyadic_level(self.n)
        if not self.target_min < self.target_max:
            raise ValueError("target_min must be below target_max")


def rescale(raw, lo: float, hi: float) -> np.ndarray:
    """Affine map of ``raw`` onto ``[lo, hi]``, pinning the extremes exactly."""
    raw = np.asarray(raw, dtype=float)
    rmin, rmax = raw.min(), raw.max()
    if rmax == rmin:
        raise ValueError("cannot rescale a constant signal")
    out = lo + (raw - rmin) * ((hi - lo) / (rmax - rmin))
    out[raw == rmin] = lo
    out[raw == rmax] = hi
    return out


def make_signal(spec: TestSignalSpec) -> np.ndarray:
    return rescale(SHAPES[spec.shape](grid(spec.n)), spec.target_min, spec.target_max)


def blocks_intensity(n: int = 2048) -> np.ndarray:
    return make_signal(TestSignalSpec("blocks", n, *BLOCKS_RANGE))


def bumps_intensity(n: int = 2048) -> np.ndarray:
    return make_signal(TestSignalSpec("bumps", n, *BUMPS_RANGE))


def sample_poisson(lam, rng: np.random.Generator) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise DomainError("Poisson intensities must be finite and nonnegative")
    return rng.poisson(lam).astype(float)


def sample_scaled_chisq(sigma2, m: int, rng: np.random.Generator) -> np.ndarray:
    """``sigma2 * chi2_m / m`` drawn as Gamma(shape m/2, scale 2 sigma2 / m)."""
    sigma2 = np.asarray(sigma2, dtype=float)
    if m < 1 or int(m) != m:
        raise DomainError(f"degrees of freedom must be a positive integer, got {m}")
    if np.any(sigma2 <= 0) or not np.all(np.isfinite(sigma2)):
        raise DomainError("chi-squared scales must be finite and positive")
    return rng.gamma(m / 2.0, 2.0 * sigma2 / m)
