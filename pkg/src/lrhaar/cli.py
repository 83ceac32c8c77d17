"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 bad data or domain error,
4 infeasible LRH coefficient during inversion.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .coeffs import lrh_forward, parse_family
from .denoise import DenoiseConfig, denoise
from .errors import InfeasibleCoefficientError, LrhaarError
from .harness import (
    MODELS,
    STATISTICS,
    CoeffStudySpec,
    coeff_study,
    denoise_counts,
    load_counts,
    model_intensity,
    mse_study,
    sample_family,
    stabilization_study,
    write_counts_estimate,
)
from .haar import forward_haar, inverse_haar
from .io import decomposition_from_dict, decomposition_to_dict, dump_json, fmt, read_signal, signal_to_text
from .plot import svg_chart
from .signals import BLOCKS_RANGE, BUMPS_RANGE, SHAPES, TestSignalSpec, make_rng, make_signal
from .stabilize import lrh_inverse, stabilize, stabilize_ti, unstabilize
from .stats import five_number_summary

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE = 0, 2, 3, 4
_SAMPLE_TAG = 4
_DEFAULT_RANGES = {"blocks": BLOCKS_RANGE, "bumps": BUMPS_RANGE}


# --------------------------------------------------------------------------
# argument types


def _family(text):
    try:
        return parse_family(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _threshold(text):
    if text == "universal":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'universal' or a number, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("threshold must be positive")
    return value


def _csv_list(choices):
    def parse(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in choices]
        if bad or not items:
            raise argparse.ArgumentTypeError(f"expected a comma list from {sorted(choices)}, got {text!r}")
        return items
    return parse


def _means(text):
    try:
        left, right = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LEFT,RIGHT means, got {text!r}") from None
    return left, right


# --------------------------------------------------------------------------
# output helpers


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_signal(args, values) -> None:
    fmt_name = args.format or ("json" if args.out and str(args.out).endswith(".json") else "csv")
    _emit(args, signal_to_text(values, fmt_name))


def _read_input(args):
    path = getattr(args, "input", None)
    if path is None or path == "-":
        text = sys.stdin.read()
        data = json.loads(text) if text.lstrip().startswith("[") else [float(t) for t in text.split() if t]
        return np.asarray(data, dtype=float)
    return read_signal(path, args.format)


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _boxplot_rows(named):
    for name, xs in named:
        s = five_number_summary(xs)
        yield [name, s["min"], s["q1"], s["median"], s["q3"], s["max"]]


# --------------------------------------------------------------------------
# subcommands


def cmd_make_signal(args):
    lo, hi = _DEFAULT_RANGES[args.shape]
    lo = lo if args.min is None else args.min
    hi = hi if args.max is None else args.max
    _emit_signal(args, make_signal(TestSignalSpec(args.shape, args.n, lo, hi)))


def cmd_sample(args):
    if args.model:
        _, family = MODELS[args.model]
        theta = model_intensity(args.model, args.n)
    else:
        if args.family is None:
            raise argparse.ArgumentTypeError("sample needs --model or --family with --in")
        family, theta = args.family, _read_input(args)
    family = args.family or family
    _emit_signal(args, sample_family(theta, family, make_rng(args.seed, _SAMPLE_TAG)))


def cmd_transform(args):
    if args.inverse:
        data = json.loads(Path(args.input).read_text() if args.input not in (None, "-") else sys.stdin.read())
        dec = decomposition_from_dict(data)
        _emit_signal(args, lrh_inverse(dec) if data.get("kind") == "lrh" else inverse_haar(dec))
        return
    x = _read_input(args)
    dec = lrh_forward(x, args.family) if args.kind == "lrh" else forward_haar(x)
    _emit(args, dump_json(decomposition_to_dict(dec)))


def cmd_stabilize(args):
    x = _read_input(args)
    _emit_signal(args, (stabilize_ti if args.variant == "ti" else stabilize)(x, args.family))


def cmd_unstabilize(args):
    _emit_signal(args, unstabilize(_read_input(args), args.family))


def _denoise_config(args) -> DenoiseConfig:
    return DenoiseConfig(threshold=args.threshold, j0=args.j0, variant=args.variant,
                         family=args.family, statistic=args.statistic)


def cmd_denoise(args):
    _emit_signal(args, denoise(_read_input(args), _denoise_config(args)))


def cmd_coeff_study(args):
    spec = CoeffStudySpec(args.family, args.j, args.means[0], args.means[1], args.replications)
    res = coeff_study(spec, seed=args.seed)
    _emit(args, dump_json(res.to_dict(bins=args.bins)))
    if args.sidecar_dir:
        out = Path(args.sidecar_dir)
        out.mkdir(parents=True, exist_ok=True)
        hist = np.histogram(res.abs_diff, bins=args.bins)
        _write_csv(out / "abs_diff_histogram.csv", ["left_edge", "right_edge", "count"],
                   ([float(a), float(b), int(c)] for a, b, c in zip(hist[1][:-1], hist[1][1:], hist[0])))
        _write_csv(out / "boxplots.csv", ["statistic", "min", "q1", "median", "q3", "max"],
                   _boxplot_rows([("lrh", res.g), ("fisz", res.f)]))
        _write_csv(out / "coefficients.csv", ["replication", "lrh", "fisz"],
                   ([i, float(a), float(b)] for i, (a, b) in enumerate(zip(res.g, res.f), start=1)))


def cmd_mse_study(args):
    report = mse_study(models=args.models, statistics=args.statistics, replications=args.replications,
                       seed=args.seed, n=args.n, jobs=args.jobs, threshold=args.threshold, j0=args.j0,
                       variant=args.variant)
    _emit(args, dump_json(report.to_dict(include_replications=args.per_replication)))
    if args.sidecar_dir:
        out = Path(args.sidecar_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "mse_table.csv", ["model", "statistic", "mean_mse", "stderr", "replications"],
                   ([m, s, c.mean, c.stderr, c.replications] for (m, s), c in report.cells.items()))
        _write_csv(out / "mse_boxplots.csv", ["cell", "min", "q1", "median", "q3", "max"],
                   _boxplot_rows((f"{m}/{s}", v) for (m, s), v in report.per_replication.items()))


def cmd_stab_study(args):
    res = stabilization_study(model=args.model, seed=args.seed, n=args.n, variant=args.variant,
                              max_lag=args.max_lag)
    _emit(args, dump_json(res.to_dict()))
    if args.sidecar_dir:
        out = Path(args.sidecar_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "qq.csv", ["theoretical", "empirical"], (map(float, row) for row in res.qq))
        _write_csv(out / "acf.csv", ["lag", "residual", "residual_squared", "band"],
                   ([k, float(a), float(b), float(res.band)]
                    for k, (a, b) in enumerate(zip(res.acf_res, res.acf_res_sq))))
        _write_csv(out / "series.csv", ["index", "theta", "x", "residual"],
                   ([i, float(t), float(x), float(r)]
                    for i, (t, x, r) in enumerate(zip(res.theta, res.x, res.residual), start=1)))


def cmd_denoise_counts(args):
    if args.window and args.truncate:
        raise argparse.ArgumentTypeError("--window and --truncate are mutually exclusive")
    cs = load_counts(args.input, column=args.column, window=args.window, truncate=args.truncate)
    cfg = DenoiseConfig(threshold=args.threshold, j0=args.j0, variant=args.variant,
                        family=parse_family("poisson"), statistic=args.statistic)
    estimate = denoise_counts(cs, cfg)
    if args.out:
        write_counts_estimate(args.out, cs, estimate)
    else:
        sys.stdout.write(signal_to_text(estimate, args.format or "csv"))


def cmd_plot(args):
    with Path(args.input).open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    header, body = rows[0], rows[1:]
    try:
        table = np.array([[float(c) for c in r] for r in body])
    except ValueError as exc:
        raise ValueError(f"{args.input}: plot needs an all-numeric CSV body ({exc})") from None
    if table.ndim != 2 or table.shape[0] == 0:
        raise ValueError(f"{args.input}: no rows to plot")
    cols = args.y or [h for h in header if h != args.x]
    missing = [c for c in cols + ([args.x] if args.x else []) if c not in header]
    if missing:
        raise ValueError(f"{args.input}: unknown column(s) {missing}; header is {header}")
    xs = table[:, header.index(args.x)] if args.x else np.arange(1, table.shape[0] + 1)
    series = [(xs, table[:, header.index(c)], c) for c in cols]
    svg = svg_chart(series, title=args.title or Path(args.input).name, kind=args.kind)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)


# --------------------------------------------------------------------------
# parser


def _global_options(parser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(0), help="random seed (default 0)")
    parser.add_argument("--jobs", type=int, default=default(1), help="worker processes for studies")
    parser.add_argument("--out", default=default(None), help="output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=default(None),
                        help="signal format (default: by file extension, else csv)")


def _denoise_options(p, with_family: bool = True) -> None:
    if with_family:
        p.add_argument("--family", type=_family, default=parse_family("poisson"),
                       help="poisson, chisq:M or gaussian:SIGMA")
    p.add_argument("--statistic", choices=STATISTICS, default="lrh")
    p.add_argument("--threshold", type=_threshold, default=None, help="'universal' (default) or a number")
    p.add_argument("--j0", type=int, default=0, help="zero every detail at scales j <= j0")
    p.add_argument("--variant", choices=("dec", "ti"), default="ti")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrhaar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("make-signal", cmd_make_signal, "blocks or bumps test intensity")
    p.add_argument("--shape", choices=sorted(SHAPES), required=True)
    p.add_argument("--n", type=int, default=2048)
    p.add_argument("--min", type=float)
    p.add_argument("--max", type=float)

    p = add("sample", cmd_sample, "draw one noisy signal")
    p.add_argument("--model", choices=sorted(MODELS))
    p.add_argument("--family", type=_family)
    p.add_argument("--in", dest="input", help="mean signal (used with --family)")
    p.add_argument("--n", type=int, default=2048)

    p = add("transform", cmd_transform, "Haar or LRH decomposition as JSON, or its inverse")
    p.add_argument("--in", dest="input")
    p.add_argument("--kind", choices=("haar", "lrh"), default="lrh")
    p.add_argument("--family", type=_family, default=parse_family("poisson"))
    p.add_argument("--inverse", action="store_true", help="read a decomposition JSON and synthesise")

    p = add("stabilize", cmd_stabilize, "apply G")
    p.add_argument("--in", dest="input")
    p.add_argument("--family", type=_family, default=parse_family("poisson"))
    p.add_argument("--variant", choices=("dec", "ti"), default="dec")

    p = add("unstabilize", cmd_unstabilize, "apply the inverse of G")
    p.add_argument("--in", dest="input")
    p.add_argument("--family", type=_family, default=parse_family("poisson"))

    p = add("denoise", cmd_denoise, "Haar smoother with LRH or Fisz thresholding")
    p.add_argument("--in", dest="input")
    _denoise_options(p)

    p = add("coeff-study", cmd_coeff_study, "simulate LRH and Fisz coefficients of one pair")
    p.add_argument("--family", type=_family, default=parse_family("poisson"))
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--means", type=_means, default=(10.0, 10.5), help="LEFT,RIGHT")
    p.add_argument("--replications", type=int, default=1000)
    p.add_argument("--bins", type=int, default=30)
    p.add_argument("--sidecar-dir")

    p = add("mse-study", cmd_mse_study, "denoising MSE on the benchmark models")
    p.add_argument("--models", type=_csv_list(MODELS), default=list(MODELS))
    p.add_argument("--statistics", type=_csv_list(STATISTICS), default=list(STATISTICS))
    p.add_argument("--replications", type=int, default=1000)
    p.add_argument("--n", type=int, default=2048)
    p.add_argument("--threshold", type=_threshold, default=None)
    p.add_argument("--j0", type=int, default=0)
    p.add_argument("--variant", choices=("dec", "ti"), default="ti")
    p.add_argument("--per-replication", action="store_true")
    p.add_argument("--sidecar-dir")

    p = add("stab-study", cmd_stab_study, "residual diagnostics of G on a blocks model")
    p.add_argument("--model", choices=("1a", "1b"), default="1a")
    p.add_argument("--n", type=int, default=2048)
    p.add_argument("--variant", choices=("dec", "ti"), default="ti")
    p.add_argument("--max-lag", type=int, default=50)
    p.add_argument("--sidecar-dir")

    p = add("denoise-counts", cmd_denoise_counts, "intensity estimate for a CSV of counts")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--column")
    p.add_argument("--window", help="START:STOP slice selecting a dyadic window")
    p.add_argument("--truncate", action="store_true", help="keep the longest dyadic prefix")
    _denoise_options(p, with_family=False)

    p = add("plot", cmd_plot, "SVG chart of CSV columns")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--x", help="x column (default: row number)")
    p.add_argument("--y", action="append", help="y column, repeatable (default: all others)")
    p.add_argument("--kind", choices=("line", "scatter"), default="line")
    p.add_argument("--title")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        args.func(args)
    except InfeasibleCoefficientError as exc:
        print(f"lrhaar: infeasible coefficient: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (LrhaarError, ValueError, OSError, KeyError, ArithmeticError) as exc:
        print(f"lrhaar: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
