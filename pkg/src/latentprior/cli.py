"""Command-line front end.

    latentprior sample  --prior normal --dim 100 -n 10000 --seed 7 --format lsb1 -o z.lsb1
    latentprior interp  --scheme cauchy_linear --prior normal --dim 100 --steps 11 -o path.csv
    latentprior norms   --prior uniform --dim 100 -n 10000 -o norms.json
    latentprior audit   --scheme linear --prior cauchy --dim 100 -n 10000 --lambdas 0.25,0.5,0.75
    latentprior figure1 -o figure1/

Exit status: 0 success, 1 audit rejected, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as bio
from .errors import DomainError, UnsupportedFamilyError
from .interp import InterpolationScheme, Kind
from .priors import Family, Modifier, PriorSpec, SampleBatch, sample
from .stats import norm_summary, property4_audit

EXIT_OK = 0
EXIT_AUDIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_SEED = 7
DEFAULT_LAMBDAS = "0.1,0.25,0.5,0.75,0.9"


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def _prior_args(p: argparse.ArgumentParser, dim_required=True):
    p.add_argument("--prior", choices=[f.value for f in Family], default="normal")
    p.add_argument("--dim", type=int, required=dim_required, help="latent dimension D")
    p.add_argument("--modifier", choices=["sparse", "subspace"])
    p.add_argument("--K", type=int, help="number of coordinates kept by --modifier")
    p.add_argument("--scale-correction", action="store_true",
                   help="record that dense test samples are scaled by sqrt(K/D)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latentprior", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a batch from a prior")
    _prior_args(p)
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--format", choices=["csv", "lsb1"], default="lsb1")
    p.add_argument("-o", "--output-path", required=True)

    p = sub.add_parser("interp", help="evaluate an interpolation path")
    _prior_args(p, dim_required=False)
    p.add_argument("--scheme", choices=[k.value for k in Kind], required=True)
    p.add_argument("--endpoints", help="CSV or LSB1 file; its first two rows are used")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambdas", type=_float_list)
    g.add_argument("--steps", type=int, default=11)
    p.add_argument("--format", choices=["csv", "lsb1"], default="csv")
    p.add_argument("-o", "--output-path", required=True)

    p = sub.add_parser("norms", help="norm histogram and moments")
    _prior_args(p)
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("-o", "--output-path", required=True, help="JSON summary")
    p.add_argument("--histogram-path", help="histogram CSV (default: <output>.csv)")

    p = sub.add_parser("audit", help="distribution-matching audit of a scheme")
    _prior_args(p)
    p.add_argument("--scheme", choices=[k.value for k in Kind], required=True)
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--lambdas", type=_float_list, default=_float_list(DEFAULT_LAMBDAS))
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("-o", "--output-path", help="write the JSON report here")

    p = sub.add_parser("figure1", help="norm histograms across families and dimensions")
    p.add_argument("--families", default="normal,uniform,cauchy")
    p.add_argument("--dims", type=_int_list, default=[2, 10, 100, 1000])
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-o", "--output-path", required=True, help="output directory")
    return parser


def _prior_from(args, D=None) -> PriorSpec:
    if (args.modifier is None) != (args.K is None):
        raise UsageError("--modifier and --K must be given together")
    if args.scale_correction and args.modifier is None:
        raise UsageError("--scale-correction needs --modifier")
    D = args.dim if D is None else D
    if D is None:
        raise UsageError("--dim is required")
    mod = Modifier(args.modifier, args.K) if args.modifier else None
    return PriorSpec(args.prior, D, mod, args.scale_correction)


def _write_batch(batch: SampleBatch, fmt: str, path: str):
    if fmt == "lsb1":
        bio.write_lsb1(batch, path)
    else:
        bio.write_csv(batch, path)


def _cmd_sample(args):
    if args.n < 0:
        raise UsageError("-n must be nonnegative")
    batch = sample(_prior_from(args), args.n, args.seed)
    _write_batch(batch, args.format, args.output_path)
    return EXIT_OK


def _cmd_interp(args):
    if args.endpoints:
        src = bio.read_batch(args.endpoints)
        rows = src.data if isinstance(src, SampleBatch) else src
        if rows.shape[0] < 2:
            raise UsageError("endpoint file needs at least two rows")
        if args.dim is not None and args.dim != rows.shape[1]:
            raise UsageError(f"--dim {args.dim} does not match endpoint file D={rows.shape[1]}")
        prior = _prior_from(args, D=rows.shape[1])
        x1, x2 = rows[0], rows[1]
    else:
        prior = _prior_from(args)
        rows = sample(prior, 2, args.seed).data
        x1, x2 = rows[0], rows[1]
    if args.lambdas is not None:
        lams = sorted(args.lambdas)
    else:
        if args.steps < 2:
            raise UsageError("--steps must be at least 2")
        lams = list(np.linspace(0.0, 1.0, args.steps))
    needs_prior = args.scheme in (Kind.CAUCHY_LINEAR.value, Kind.SPHERICAL_CAUCHY_LINEAR.value)
    scheme = InterpolationScheme(args.scheme, prior if needs_prior else None)
    pts = np.array([scheme(x1, x2, lam) for lam in lams])
    batch = SampleBatch(pts, prior, args.seed, lambdas=lams,
                        extra={"scheme": args.scheme})
    _write_batch(batch, args.format, args.output_path)
    return EXIT_OK


def _cmd_norms(args):
    if args.n < 1:
        raise UsageError("-n must be positive")
    batch = sample(_prior_from(args), args.n, args.seed)
    summary = norm_summary(batch, args.bins)
    out = Path(args.output_path)
    bio.write_json(summary.to_dict(), out)
    hist = Path(args.histogram_path) if args.histogram_path else out.with_suffix(".csv")
    bio.write_histogram_csv(summary.histogram, hist)
    return EXIT_OK


def _cmd_audit(args):
    prior = _prior_from(args)
    needs_prior = args.scheme in (Kind.CAUCHY_LINEAR.value, Kind.SPHERICAL_CAUCHY_LINEAR.value)
    scheme = InterpolationScheme(args.scheme, prior if needs_prior else None)
    if args.n < 1:
        raise UsageError("-n must be positive")
    report = property4_audit(scheme, prior, args.lambdas, args.n, args.seed, args.alpha)
    for item in report.per_lambda:
        norm = "-" if item.norm_ks is None else (
            f"{item.norm_ks.statistic:.4f}/{item.norm_ks.critical_value:.4f}")
        print(f"lambda={item.lam:<6g} coord KS {item.coordinate_ks.statistic:.4f}/"
              f"{item.coordinate_ks.critical_value:.4f}  norm KS {norm}  "
              f"mean norm {item.mean_norm:.4f}  {'pass' if item.passed else 'REJECT'}")
    print("overall:", "pass" if report.overall_pass else "REJECT")
    if args.output_path:
        bio.write_json(report.to_dict(), args.output_path)
    return EXIT_OK if report.overall_pass else EXIT_AUDIT_FAILED


def _cmd_figure1(args):
    families = [Family(f.strip()) for f in args.families.split(",") if f.strip()]
    out = Path(args.output_path)
    out.mkdir(parents=True, exist_ok=True)
    index = []
    for fam in families:
        for D in args.dims:
            batch = sample(PriorSpec(fam, D), args.n, args.seed)
            summary = norm_summary(batch, args.bins)
            name = f"norms_{fam.value}_D{D}.csv"
            bio.write_histogram_csv(summary.histogram, out / name)
            r = batch.norms()
            index.append({
                "family": fam.value, "D": D, "file": name,
                "empirical_mean": summary.empirical_mean,
                "empirical_std": summary.empirical_std,
                "analytic_mean": summary.analytic_mean,
                "analytic_std": summary.analytic_std,
                "median": float(np.median(r)),
                "p99": float(np.percentile(r, 99)),
            })
    bio.write_json({"n": args.n, "seed": args.seed, "curves": index},
                   out / "figure1_summary.json")
    return EXIT_OK


_COMMANDS = {
    "sample": _cmd_sample,
    "interp": _cmd_interp,
    "norms": _cmd_norms,
    "audit": _cmd_audit,
    "figure1": _cmd_figure1,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    if getattr(args, "seed", 0) < 0 or getattr(args, "seed", 0) >= 2 ** 64:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, UnsupportedFamilyError, DomainError, ValueError) as exc:
        print(f"latentprior {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"latentprior {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
