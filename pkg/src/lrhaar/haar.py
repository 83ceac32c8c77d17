"""Decimated and stationary Haar transforms.

Scales are indexed ``j = 1`` (finest, blocks of 2 samples) to ``j = J``
(coarsest, the whole signal), where ``n = 2**J``.  Every per-scale list in
this module stores scale ``j`` at position ``j - 1``.

The stationary (non-decimated) transform uses circular boundaries: the
window of scale ``j`` starting at position ``p`` covers samples
``p, p+1, ..., p + 2**j - 1`` taken modulo ``n``.  With this convention the
decimated coefficient ``d[j][k]`` (0-based ``k``) equals the stationary
detail at position ``k * 2**j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthError, ShapeError

SQRT2 = np.sqrt(2.0)


def dyadic_level(n: int) -> int:
    """Return ``J`` with ``n == 2**J``; raise :class:`LengthError` otherwise."""
    n = int(n)
    if n < 2 or n & (n - 1):
        raise LengthError(f"length must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def as_signal(x) -> np.ndarray:
    """Validate ``x`` as a finite float vector of dyadic length."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ShapeError(f"signal must be one-dimensional, got shape {arr.shape}")
    dyadic_level(arr.size)
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal contains non-finite values")
    return arr


@dataclass(frozen=True)
class HaarDecomposition:
    """Output of :func:`forward_haar`.

    ``details[j - 1]`` holds ``d_j`` (length ``2**(J-j)``); ``smooth_top``
    is the single coarsest smooth coefficient ``s_{J,1}``.
    """

    details: tuple[np.ndarray, ...]
    smooth_top: float
    n: int

    @property
    def levels(self) -> int:
        return len(self.details)

    def detail(self, j: int) -> np.ndarray:
        return self.details[j - 1]

    def energy(self) -> float:
        return float(sum(np.sum(d * d) for d in self.details) + self.smooth_top**2)

    def replace_details(self, details) -> "HaarDecomposition":
        return HaarDecomposition(tuple(np.asarray(d, dtype=float) for d in details),
                                 self.smooth_top, self.n)


def forward_haar(x) -> HaarDecomposition:
    """Orthonormal Haar pyramid: ``s_j = (s_{j-1,odd} + s_{j-1,even}) / sqrt 2``
    and ``d_j = (s_{j-1,odd} - s_{j-1,even}) / sqrt 2``."""
    s = as_signal(x)
    details = []
    while s.size > 1:
        a, b = s[0::2], s[1::2]
        details.append((a - b) / SQRT2)
        s = (a + b) / SQRT2
    return HaarDecomposition(tuple(details), float(s[0]), len(x))


def _check_shapes(details, n):
    J = dyadic_level(n)
    if len(details) != J:
        raise ShapeError(f"expected {J} detail levels for n={n}, got {len(details)}")
    for j, d in enumerate(details, start=1):
        if np.shape(d) != (n >> j,):
            raise ShapeError(f"scale {j}: expected {n >> j} coefficients, got {np.shape(d)}")


def inverse_haar(h: HaarDecomposition) -> np.ndarray:
    _check_shapes(h.details, h.n)
    s = np.array([h.smooth_top], dtype=float)
    for d in reversed(h.details):
        out = np.empty(2 * s.size)
        out[0::2] = (s + d) / SQRT2
        out[1::2] = (s - d) / SQRT2
        s = out
    return s


@dataclass(frozen=True)
class LocalMeansTable:
    """Block means ``means[j]`` over consecutive blocks of ``2**j`` samples,
    for ``j = 0..J`` (``means[0]`` is the data itself)."""

    means: tuple[np.ndarray, ...]

    @property
    def levels(self) -> int:
        return len(self.means) - 1

    def halves(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """Left and right half-block means ``(u, v)`` of every block at scale ``j``."""
        if not 1 <= j <= self.levels:
            raise ValueError(f"scale must lie in 1..{self.levels}, got {j}")
        child = self.means[j - 1]
        return child[0::2], child[1::2]


def local_means(x) -> LocalMeansTable:
    x = as_signal(x)
    J = dyadic_level(x.size)
    csum = np.concatenate(([0.0], np.cumsum(x)))
    means = [x.copy()]
    for j in range(1, J + 1):
        w = 1 << j
        means.append((csum[w::w] - csum[:-w:w]) / w)
    return LocalMeansTable(tuple(means))


@dataclass(frozen=True)
class StationaryDecomposition:
    """Circular non-decimated Haar transform.

    For scale ``j`` and start position ``p`` (0-based), ``left[j-1][p]`` and
    ``right[j-1][p]`` are the means of the two half windows of length
    ``2**(j-1)``; ``smooth[j-1][p]`` and ``detail[j-1][p]`` are the
    orthonormally scaled sum and difference, so that subsampling every
    ``2**j``-th entry recovers the decimated transform.
    """

    smooth: tuple[np.ndarray, ...]
    detail: tuple[np.ndarray, ...]
    left: tuple[np.ndarray, ...]
    right: tuple[np.ndarray, ...]
    n: int

    @property
    def levels(self) -> int:
        return len(self.detail)

    def replace_details(self, detail) -> "StationaryDecomposition":
        return StationaryDecomposition(self.smooth, tuple(np.asarray(d, dtype=float) for d in detail),
                                       self.left, self.right, self.n)


def _window_sums(csum2: np.ndarray, n: int, w: int) -> np.ndarray:
    # csum2 is the zero-prefixed cumulative sum of the doubled signal
    return csum2[w:w + n] - csum2[:n]


def forward_stationary(x) -> StationaryDecomposition:
    x = as_signal(x)
    n = x.size
    J = dyadic_level(n)
    csum2 = np.concatenate(([0.0], np.cumsum(np.concatenate((x, x)))))
    smooth, detail, left, right = [], [], [], []
    for j in range(1, J + 1):
        h = 1 << (j - 1)
        half = _window_sums(csum2, n, h)
        lsum = half
        rsum = np.roll(half, -h)
        scale = 2.0 ** (-j / 2)
        smooth.append(scale * (lsum + rsum))
        detail.append(scale * (lsum - rsum))
        left.append(lsum / h)
        right.append(rsum / h)
    return StationaryDecomposition(tuple(smooth), tuple(detail), tuple(left), tuple(right), n)


def _trailing_circular_sum(w: np.ndarray, length: int, offset: int) -> np.ndarray:
    """``out[i] = sum(w[(i - offset - q) % n] for q in range(length))``."""
    n = w.size
    csum2 = np.concatenate(([0.0], np.cumsum(np.concatenate((w, w)))))
    idx = np.arange(n) - offset + n + 1
    return csum2[idx] - csum2[idx - length]


def inverse_stationary_average(sd: StationaryDecomposition) -> np.ndarray:
    """Average-basis reconstruction.

    Equal to the mean, over all ``n`` cyclic shifts, of decimated synthesis
    applied to the coefficients each shift selects.  Every window position
    at scale ``j`` is shared by ``n / 2**j`` shifts, hence the ``2**-j``
    weight on each stationary detail.
    """
    n = sd.n
    J = dyadic_level(n)
    if len(sd.detail) != J or len(sd.smooth) != J:
        raise ShapeError(f"expected {J} levels for n={n}")
    for j in range(1, J + 1):
        if sd.detail[j - 1].shape != (n,) or sd.smooth[j - 1].shape != (n,):
            raise ShapeError(f"scale {j}: stationary arrays must have length {n}")
    out = np.full(n, 2.0 ** (-J / 2) * np.mean(sd.smooth[J - 1]))
    for j in range(1, J + 1):
        h = 1 << (j - 1)
        w = sd.detail[j - 1] * 2.0 ** (-1.5 * j)
        out += _trailing_circular_sum(w, h, 0) - _trailing_circular_sum(w, h, h)
    return out
