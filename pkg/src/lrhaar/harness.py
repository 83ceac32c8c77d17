"""Monte-Carlo experiment drivers and count-data ingestion.

Every replication draws from its own random stream keyed by
``(seed, stream tag, replication index)`` and results are aggregated in
replication order, so reports are bit-identical whatever ``jobs`` is.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .coeffs import Gaussian, NoiseFamily, Poisson, ScaledChiSquared, f_coefficient, g_coefficient
from .denoise import DenoiseConfig, denoise, mse
from .errors import DomainError, LengthError
from .haar import dyadic_level
from .io import fmt
from .signals import RNG_DESCRIPTION, blocks_intensity, bumps_intensity, make_rng, sample_poisson, sample_scaled_chisq
from .stabilize import stabilized_residual
from .stats import MomentStats, acf, bartlett_band, five_number_summary, histogram, ks_distance_normal, moment_stats, normal_qq_points

# stream tags keep the experiments' random streams disjoint for a shared seed
_COEFF_TAG = 1
_MSE_TAG = 2
_STAB_TAG = 3

MODELS = {
    "1a": ("blocks", Poisson()),
    "1b": ("blocks", ScaledChiSquared(2)),
    "2a": ("bumps", Poisson()),
    "2b": ("bumps", ScaledChiSquared(2)),
}
STATISTICS = ("lrh", "fisz")


def model_intensity(model: str, n: int = 2048) -> np.ndarray:
    shape, _ = MODELS[model]
    return blocks_intensity(n) if shape == "blocks" else bumps_intensity(n)


def sample_family(theta, family: NoiseFamily, rng: np.random.Generator) -> np.ndarray:
    """One draw per element of ``theta`` (the mean) from ``family``."""
    if isinstance(family, Poisson):
        return sample_poisson(theta, rng)
    if isinstance(family, ScaledChiSquared):
        return sample_scaled_chisq(theta, family.m, rng)
    if isinstance(family, Gaussian):
        theta = np.asarray(theta, dtype=float)
        return theta + family.sigma * rng.standard_normal(theta.shape)
    raise TypeError(f"unsupported noise family {family!r}")


def _meta(seed, **config) -> dict:
    return {"seed": int(seed), "version": __version__, "rng": RNG_DESCRIPTION, "config": config}


# --------------------------------------------------------------------------
# coefficient study


@dataclass(frozen=True)
class CoeffStudySpec:
    family: NoiseFamily
    j: int
    mean_left: float
    mean_right: float
    replications: int = 1000

    def __post_init__(self):
        if self.replications < 2:
            raise ValueError("need at least 2 replications")
        if self.j < 1:
            raise ValueError("scale must be >= 1")
        if isinstance(self.family, Poisson) and min(self.mean_left, self.mean_right) < 0:
            raise DomainError("Poisson means must be nonnegative")
        if isinstance(self.family, ScaledChiSquared) and min(self.mean_left, self.mean_right) <= 0:
            raise DomainError("chi-squared means must be positive")


@dataclass
class CoeffStudyResult:
    spec: CoeffStudySpec
    seed: int
    g: np.ndarray
    f: np.ndarray
    stats_g: MomentStats
    stats_f: MomentStats

    @property
    def abs_diff(self) -> np.ndarray:
        return np.abs(self.g) - np.abs(self.f)

    def to_dict(self, bins: int = 30) -> dict:
        s = self.spec
        return {
            "meta": _meta(self.seed, family=str(s.family), j=s.j, mean_left=s.mean_left,
                          mean_right=s.mean_right, replications=s.replications),
            "stats_g": self.stats_g.to_dict(),
            "stats_f": self.stats_f.to_dict(),
            "boxplot_g": five_number_summary(self.g),
            "boxplot_f": five_number_summary(self.f),
            "abs_diff_histogram": histogram(self.abs_diff, bins),
        }


def coeff_study(spec: CoeffStudySpec, seed: int = 0) -> CoeffStudyResult:
    """Simulate the two half-block means ``spec.replications`` times and
    compute the LRH and Fisz coefficients of each pair."""
    half = 1 << (spec.j - 1)
    u = np.empty(spec.replications)
    v = np.empty(spec.replications)
    left = np.full(half, float(spec.mean_left))
    right = np.full(half, float(spec.mean_right))
    for i in range(spec.replications):
        rng = make_rng(seed, _COEFF_TAG, i)
        u[i] = sample_family(left, spec.family, rng).mean()
        v[i] = sample_family(right, spec.family, rng).mean()
    g = np.asarray(g_coefficient(u, v, spec.j, spec.family), dtype=float)
    f = np.asarray(f_coefficient(u, v, spec.j, spec.family), dtype=float)
    return CoeffStudyResult(spec, seed, g, f, moment_stats(g), moment_stats(f))


# --------------------------------------------------------------------------
# MSE study


@dataclass(frozen=True)
class MseCell:
    mean: float
    stderr: float
    replications: int


@dataclass
class MseStudyReport:
    seed: int
    n: int
    config: dict
    cells: dict = field(default_factory=dict)  # (model, statistic) -> MseCell
    per_replication: dict = field(default_factory=dict)  # (model, statistic) -> array

    def cell(self, model: str, stat: str) -> MseCell:
        return self.cells[(model, stat)]

    def to_dict(self, include_replications: bool = False) -> dict:
        out = {
            "meta": _meta(self.seed, n=self.n, **self.config),
            "cells": [
                {"model": m, "statistic": s, "mean_mse": c.mean, "stderr": c.stderr, "replications": c.replications}
                for (m, s), c in self.cells.items()
            ],
        }
        if include_replications:
            out["per_replication"] = {f"{m}/{s}": arr.tolist() for (m, s), arr in self.per_replication.items()}
        return out


def _mse_chunk(args):
    model, model_index, indices, seed, n, stats, threshold, j0, variant = args
    _, family = MODELS[model]
    theta = model_intensity(model, n)
    out = np.empty((len(indices), len(stats)))
    cfgs = [DenoiseConfig(threshold=threshold, j0=j0, variant=variant, family=family, statistic=s) for s in stats]
    for row, i in enumerate(indices):
        x = sample_family(theta, family, make_rng(seed, _MSE_TAG, model_index, i))
        for col, cfg in enumerate(cfgs):
            out[row, col] = mse(denoise(x, cfg), theta)
    return out


def mse_study(models=tuple(MODELS), statistics=STATISTICS, replications: int = 1000, seed: int = 0,
              n: int = 2048, jobs: int = 1, threshold: float | None = None, j0: int = 0,
              variant: str = "ti") -> MseStudyReport:
    """Average denoising MSE per (model, statistic).

    All statistics of a model see the same noise realisation in each
    replication (paired design).
    """
    if replications < 1:
        raise ValueError("need at least one replication")
    dyadic_level(n)
    statistics = tuple(statistics)
    report = MseStudyReport(seed, n, {"models": list(models), "statistics": list(statistics),
                                      "replications": replications, "threshold": threshold,
                                      "j0": j0, "variant": variant})
    tasks = []
    for model in models:
        if model not in MODELS:
            raise ValueError(f"unknown model {model!r}; expected one of {sorted(MODELS)}")
        index = list(MODELS).index(model)
        chunks = np.array_split(np.arange(replications), max(1, jobs) * 4 if jobs > 1 else 1)
        tasks.extend((model, index, c.tolist(), seed, n, statistics, threshold, j0, variant) for c in chunks if c.size)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_mse_chunk, tasks))
    else:
        results = [_mse_chunk(t) for t in tasks]
    for model in models:
        block = np.vstack([r for t, r in zip(tasks, results) if t[0] == model])
        for col, stat in enumerate(statistics):
            values = block[:, col]
            stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else float("nan")
            report.cells[(model, stat)] = MseCell(float(values.mean()), stderr, int(values.size))
            report.per_replication[(model, stat)] = values
    return report


# --------------------------------------------------------------------------
# stabilisation study


@dataclass
class StabilizationResult:
    model: str
    seed: int
    variant: str
    theta: np.ndarray
    x: np.ndarray
    residual: np.ndarray
    variance: float
    qq: np.ndarray
    acf_res: np.ndarray
    acf_res_sq: np.ndarray
    ks: float

    @property
    def band(self) -> float:
        return bartlett_band(self.residual.size)

    def fraction_within_band(self) -> float:
        return float(np.mean(np.abs(self.acf_res[1:]) < self.band))

    def to_dict(self) -> dict:
        return {
            "meta": _meta(self.seed, model=self.model, variant=self.variant),
            "variance": self.variance,
            "ks_distance": self.ks,
            "bartlett_band": self.band,
            "acf_fraction_within_band": self.fraction_within_band(),
            "acf_residual": self.acf_res,
            "acf_residual_squared": self.acf_res_sq,
        }


def stabilization_study(model: str = "1a", seed: int = 0, n: int = 2048, variant: str = "ti",
                        max_lag: int = 50) -> StabilizationResult:
    """One draw from a blocks model and the residual ``G(X) - G(theta)``.

    ``variant="ti"`` uses the cycle-spun ``G`` (the default); ``"dec"``
    uses the decimated one.
    """
    if model not in ("1a", "1b"):
        raise ValueError(f"stabilisation study supports models 1a and 1b, got {model!r}")
    _, family = MODELS[model]
    theta = model_intensity(model, n)
    x = sample_family(theta, family, make_rng(seed, _STAB_TAG, list(MODELS).index(model)))
    res = stabilized_residual(x, theta, family, variant=variant)
    return StabilizationResult(
        model=model, seed=seed, variant=variant, theta=theta, x=x, residual=res,
        variance=float(np.var(res, ddof=1)), qq=normal_qq_points(res),
        acf_res=acf(res, max_lag), acf_res_sq=acf(res**2, max_lag), ks=ks_distance_normal(res),
    )


# --------------------------------------------------------------------------
# count data


@dataclass
class CountSeries:
    counts: np.ndarray
    labels: list | None = None
    source: str = ""


def _parse_window(window: str) -> slice:
    try:
        start, stop = (int(p) if p else None for p in window.split(":"))
    except ValueError:
        raise ValueError(f"window must look like START:STOP, got {window!r}") from None
    return slice(start, stop)


def load_counts(path, column: str | int | None = None, window: str | None = None,
                truncate: bool = False) -> CountSeries:
    """Read a column of nonnegative integer counts from a CSV file.

    ``column`` is a header name or 0-based index (default: the last column).
    A leading non-numeric row is treated as a header.  Any other column in
    the file (the first one not holding counts) is carried along as labels.
    The series must have dyadic length unless ``window`` (``"START:STOP"``,
    Python slice semantics) or ``truncate`` (keep the longest dyadic
    prefix) is given.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError(f"{path}: no data")
    header = None
    first = rows[0][1]
    col_idx = None
    if isinstance(column, int) or (isinstance(column, str) and column.lstrip("-").isdigit()):
        col_idx = int(column)
    try:
        float(first[col_idx if col_idx is not None else -1])
    except (ValueError, IndexError):
        header = [c.strip() for c in first]
        rows = rows[1:]
    if col_idx is None:
        if column is None:
            col_idx = len(first) - 1
        elif header and column in header:
            col_idx = header.index(column)
        else:
            raise ValueError(f"{path}: no column named {column!r}")
    width = len(first)
    label_idx = next((c for c in range(width) if c != col_idx % width), None)
    counts, labels = [], []
    for row_no, row in rows:
        try:
            text = row[col_idx].strip()
        except IndexError:
            raise ValueError(f"{path}:{row_no}: missing count column") from None
        try:
            value = float(text)
        except ValueError:
            raise ValueError(f"{path}:{row_no}: not a count: {text!r}") from None
        if not value.is_integer():
            raise ValueError(f"{path}:{row_no}: count must be an integer, got {text!r}")
        if value < 0:
            raise DomainError(f"{path}:{row_no}: count must be nonnegative, got {text!r}")
        counts.append(int(value))
        if label_idx is not None and label_idx < len(row):
            labels.append(row[label_idx].strip())
    counts = np.asarray(counts, dtype=np.int64)
    labels = labels if label_idx is not None and len(labels) == counts.size else None
    if window is not None:
        sl = _parse_window(window)
        counts = counts[sl]
        labels = labels[sl] if labels is not None else None
    elif truncate and counts.size >= 2:
        keep = 1 << (counts.size.bit_length() - 1)
        counts = counts[:keep]
        labels = labels[:keep] if labels is not None else None
    try:
        dyadic_level(counts.size)
    except LengthError as exc:
        raise LengthError(f"{path}: {exc}; use a window or truncation") from None
    return CountSeries(counts, labels, str(path))


def denoise_counts(cs: CountSeries, cfg: DenoiseConfig | None = None) -> np.ndarray:
    """Intensity estimate for a count series (TI LRH smoother by default)."""
    cfg = cfg or DenoiseConfig()
    if not isinstance(cfg.family, Poisson):
        raise ValueError("count data requires the Poisson family")
    return denoise(cs.counts.astype(float), cfg)


def write_counts_estimate(path, cs: CountSeries, estimate) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "label", "count", "estimate"])
        for i, (c, e) in enumerate(zip(cs.counts, estimate), start=1):
            writer.writerow([i, cs.labels[i - 1] if cs.labels else "", int(c), fmt(e)])
