"""Sample moments, autocorrelation and normality diagnostics."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class MomentStats:
    """Variance (``n - 1`` denominator), skewness and non-excess kurtosis
    (central moments with ``n`` denominator; a normal sample gives 3)."""

    variance: float
    skewness: float
    kurtosis: float

    def to_dict(self) -> dict:
        return asdict(self)


def moment_stats(xs) -> MomentStats:
    xs = np.asarray(xs, dtype=float)
    if xs.size < 4:
        raise ValueError(f"need at least 4 observations, got {xs.size}")
    dev = xs - xs.mean()
    m2 = np.mean(dev**2)
    if m2 <= 0:
        raise ValueError("sample has zero variance")
    return MomentStats(
        variance=float(np.sum(dev**2) / (xs.size - 1)),
        skewness=float(np.mean(dev**3) / m2**1.5),
        kurtosis=float(np.mean(dev**4) / m2**2),
    )


def acf(xs, max_lag: int) -> np.ndarray:
    """Sample autocorrelations at lags ``0..max_lag`` (biased estimator,
    normalised so lag 0 is exactly 1)."""
    xs = np.asarray(xs, dtype=float)
    if not 0 <= max_lag < xs.size:
        raise ValueError(f"max_lag must lie in [0, {xs.size - 1}], got {max_lag}")
    dev = xs - xs.mean()
    denom = np.dot(dev, dev)
    if denom == 0:
        raise ValueError("autocorrelation of a constant series is undefined")
    return np.array([np.dot(dev[: xs.size - k], dev[k:]) / denom for k in range(max_lag + 1)])


def bartlett_band(n: int) -> float:
    """Approximate 95% band ``1.96 / sqrt(n)`` for the acf of white noise."""
    return 1.96 / np.sqrt(n)


def normal_qq_points(xs) -> np.ndarray:
    """``(theoretical, empirical)`` rows: standard-normal quantiles at
    ``(i - 0.5) / n`` against the order statistics."""
    xs = np.sort(np.asarray(xs, dtype=float))
    if xs.size == 0:
        raise ValueError("empty sample")
    probs = (np.arange(1, xs.size + 1) - 0.5) / xs.size
    return np.column_stack((stats.norm.ppf(probs), xs))


def ks_distance_normal(xs, standardize: bool = True) -> float:
    """Kolmogorov-Smirnov distance to N(0, 1), after centring and scaling by
    the sample standard deviation unless ``standardize`` is False."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("empty sample")
    if standardize:
        sd = xs.std(ddof=1) if xs.size > 1 else 0.0
        xs = xs - xs.mean()
        if sd > 0:
            xs = xs / sd
    return float(stats.kstest(xs, "norm").statistic)


def five_number_summary(xs) -> dict:
    q = np.quantile(np.asarray(xs, dtype=float), [0.0, 0.25, 0.5, 0.75, 1.0])
    return dict(zip(("min", "q1", "median", "q3", "max"), map(float, q)))


def histogram(xs, bins: int = 30) -> dict:
    counts, edges = np.histogram(np.asarray(xs, dtype=float), bins=bins)
    return {"edges": edges.tolist(), "counts": counts.tolist()}
