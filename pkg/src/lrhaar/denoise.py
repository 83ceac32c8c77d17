"""Hard-threshold Haar smoothers driven by LRH or Fisz decision statistics.

A detail coefficient at scale ``j`` survives iff ``j > j0`` and the decision
statistic computed from its two half-block means exceeds the threshold in
absolute value (ties are killed).  The surviving coefficient keeps its
ordinary Haar value; only the keep/kill decision uses the statistic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coeffs import NoiseFamily, Poisson, check_domain, statistic
from .haar import (
    dyadic_level,
    forward_haar,
    forward_stationary,
    inverse_haar,
    inverse_stationary_average,
    local_means,
)
from .errors import DomainError, LengthError


def universal_threshold(n: int) -> float:
    """``sqrt(2 log n)``."""
    if n < 2:
        raise DomainError(f"universal threshold needs n >= 2, got {n}")
    return math.sqrt(2.0 * math.log(n))


@dataclass(frozen=True)
class DenoiseConfig:
    """Smoother settings.

    ``threshold=None`` means the universal threshold for the input length.
    ``variant`` is ``"ti"`` (translation invariant, the default) or ``"dec"``.
    """

    threshold: float | None = None
    j0: int = 0
    variant: str = "ti"
    family: NoiseFamily = field(default_factory=Poisson)
    statistic: str = "lrh"

    def __post_init__(self):
        if self.threshold is not None and not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        if self.j0 < 0:
            raise ValueError(f"j0 must be nonnegative, got {self.j0}")
        if self.variant not in ("ti", "dec"):
            raise ValueError(f"variant must be 'ti' or 'dec', got {self.variant!r}")
        statistic(self.statistic)

    def resolve_threshold(self, n: int) -> float:
        return universal_threshold(n) if self.threshold is None else float(self.threshold)

    def to_dict(self) -> dict:
        return {"threshold": self.threshold, "j0": self.j0, "variant": self.variant,
                "family": str(self.family), "statistic": self.statistic}


def _prepare(x, cfg: DenoiseConfig):
    x = check_domain(np.asarray(x, dtype=float), cfg.family)
    J = dyadic_level(x.size)
    if cfg.j0 > J - 1:
        raise ValueError(f"j0 must be at most J-1 = {J - 1}, got {cfg.j0}")
    return x, J, cfg.resolve_threshold(x.size), statistic(cfg.statistic)


def keep_masks_decimated(x, cfg: DenoiseConfig) -> list[np.ndarray]:
    """Boolean keep-mask per scale (``masks[j - 1]``) for the decimated smoother."""
    x, J, t, stat = _prepare(x, cfg)
    lm = local_means(x)
    masks = []
    for j in range(1, J + 1):
        if j <= cfg.j0:
            masks.append(np.zeros(x.size >> j, dtype=bool))
            continue
        u, v = lm.halves(j)
        masks.append(np.abs(stat(u, v, j, cfg.family)) > t)
    return masks


def denoise_decimated(x, cfg: DenoiseConfig) -> np.ndarray:
    h = forward_haar(x)
    masks = keep_masks_decimated(x, cfg)
    return inverse_haar(h.replace_details([d * m for d, m in zip(h.details, masks)]))


def keep_masks_ti(x, cfg: DenoiseConfig, sd=None) -> list[np.ndarray]:
    """Keep-mask per scale and circular start position for the TI smoother."""
    x, J, t, stat = _prepare(x, cfg)
    sd = forward_stationary(x) if sd is None else sd
    masks = []
    for j in range(1, J + 1):
        if j <= cfg.j0:
            masks.append(np.zeros(x.size, dtype=bool))
            continue
        masks.append(np.abs(stat(sd.left[j - 1], sd.right[j - 1], j, cfg.family)) > t)
    return masks


def denoise_ti(x, cfg: DenoiseConfig) -> np.ndarray:
    """Cycle-spun smoother: the average of :func:`denoise_decimated` over all
    circular shifts, computed in ``O(n log n)`` from the stationary transform."""
    sd = forward_stationary(x)
    masks = keep_masks_ti(x, cfg, sd)
    return inverse_stationary_average(sd.replace_details([d * m for d, m in zip(sd.detail, masks)]))


def denoise(x, cfg: DenoiseConfig) -> np.ndarray:
    return denoise_ti(x, cfg) if cfg.variant == "ti" else denoise_decimated(x, cfg)


def mse(estimate, truth) -> float:
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise LengthError(f"length mismatch: {estimate.shape} vs {truth.shape}")
    return float(np.mean((estimate - truth) ** 2))
