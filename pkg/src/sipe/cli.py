"""Command-line interface: ``sipe {simulate,estimate,coherence,bench,check}``."""

import argparse
import logging
import os
import sys

import numpy as np

from . import io
from .analysis import band_summary, partial_coherence, power_spectra, sparsity_fraction
from .benchmark import (
    RESULT_COLUMNS,
    load_scenario,
    parse_lambda_grid,
    run_benchmark,
)
from .clime import DEFAULT_LAMBDAS, select_lambda, sipe_from_spectrum
from .core import InputError, NumericalError, center_standardize
from .simgen import make_model, simulate, true_spectrum
from .spectral import gcv_select_span, periodogram, smooth

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3

log = logging.getLogger("sipe")


def _band(text):
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"band must read 'a,b', got {text!r}") from None
    return a, b


def _figure_path(csv_path):
    return os.path.splitext(csv_path)[0] + ".png"


def cmd_simulate(args):
    scenario = load_scenario(args.config)
    seed = scenario.seed + args.rep
    model = make_model(scenario.scenario, scenario.p, seed=seed)
    ts = simulate(model, scenario.n, burn_in=scenario.burn_in)
    os.makedirs(args.out_dir, exist_ok=True)
    series_path = os.path.join(args.out_dir, "series.csv")
    truth_path = os.path.join(args.out_dir, "truth.json")
    io.write_series_csv(series_path, ts)
    _, theta = true_spectrum(model, periodogram(center_standardize(ts)).grid)
    extra = {
        "kind": "truth",
        "scenario": scenario.scenario,
        "seed": seed,
        "phi": model.phi.tolist(),
        "sigma_e": model.sigma_e.tolist(),
    }
    io.write_precision_json(truth_path, theta, ts.names, extra)
    print(f"wrote {series_path} and {truth_path}")
    return EXIT_OK


def cmd_estimate(args):
    ts = center_standardize(io.read_series_csv(args.input), standardize=args.standardize)
    per = periodogram(ts)
    extra = {"kind": "sipe", "standardized": bool(args.standardize)}
    if args.span is not None:
        M = args.span
    else:
        M, scores = gcv_select_span(per)
        extra["gcv_scores"] = {str(k): v for k, v in scores.items()}
    smoothed = smooth(per, M)
    positions = np.arange(per.grid.n)
    if args.band:
        a, b = args.band
        freqs = per.grid.frequencies
        positions = np.flatnonzero((freqs > a) & (freqs < b))
        if positions.size == 0:
            raise InputError(f"band {args.band} contains no Fourier frequency")
    positions = positions[:: args.freq_stride]
    if args.lam is not None:
        lam = args.lam
    else:
        grid = parse_lambda_grid(args.lambda_grid) if args.lambda_grid else DEFAULT_LAMBDAS
        lam, scores = select_lambda(ts, M, grid, stride=args.freq_stride)
        extra["lambda_scores"] = {repr(k): v for k, v in scores.items()}
    log.info("span %d, lambda %g, %d frequencies", M, lam, positions.size)
    est = sipe_from_spectrum(smoothed, lam, positions)
    io.write_precision_json(args.out, est, ts.names, extra)
    if args.power_csv:
        rows = power_spectra(smoothed, list(ts.names))
        io.write_rows_csv(args.power_csv, rows, ("dimension", "frequency", "power"))
        if not args.no_figures:
            from .plotting import plot_power_spectra

            plot_power_spectra(rows, _figure_path(args.power_csv))
    if est.failures:
        for pos, msg in sorted(est.failures.items()):
            print(f"failed: {msg}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"wrote {args.out} (span={M}, lambda={lam:g})")
    return EXIT_OK


def cmd_coherence(args):
    est, names = io.read_precision_json(args.input)
    rho = partial_coherence(est)
    summary = band_summary(rho, est.grid, args.band, args.stat)
    io.write_matrix_csv(args.out, summary, names)
    frac = sparsity_fraction(summary, args.tau)
    if not args.no_figures:
        from .plotting import plot_matrix

        a, b = args.band
        plot_matrix(summary, names, _figure_path(args.out),
                    title=f"{args.stat} partial coherence, band ({a:g}, {b:g})")
    print(f"wrote {args.out}; zero pairs: {frac:.4f}")
    return EXIT_OK


def cmd_bench(args):
    scenario = load_scenario(args.config)
    if args.reps is not None:
        scenario.reps = args.reps
    estimators = args.estimators.split(",")
    result = run_benchmark(scenario, estimators, workers=args.workers)
    io.write_rows_csv(args.out, result.rows, RESULT_COLUMNS)
    io.write_json(args.json or os.path.splitext(args.out)[0] + ".json", result.to_dict())
    if not args.no_figures:
        from .plotting import plot_benchmark

        plot_benchmark(result.rows, _figure_path(args.out))
    for row in result.rows:
        print(
            f"{row['estimator']:>9}: MISE x1e3 {row['mise_mean']:.4g} ({row['mise_sd']:.3g})"
            f"  failures {row['failures']}/{row['reps']}"
        )
    return EXIT_OK


def cmd_check(args):
    from .selfcheck import roundtrip_check, lp_oracle_check

    ok = True
    worst = roundtrip_check(args.cases)
    passed = worst <= 1e-9
    ok &= passed
    print(f"{'PASS' if passed else 'FAIL'} embedding inverse round trip: max error {worst:.3g}")
    gap, excess = lp_oracle_check(max(1, args.cases // 4))
    passed = gap <= 1e-6 and excess <= 1e-7
    ok &= passed
    print(f"{'PASS' if passed else 'FAIL'} CLIME LP vs reference: objective gap {gap:.3g}, "
          f"residual excess {excess:.3g}")
    return EXIT_OK if ok else EXIT_NUMERICAL


def build_parser():
    parser = argparse.ArgumentParser(prog="sipe", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a scenario: series CSV + truth JSON")
    p.add_argument("config")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--rep", type=int, default=0, help="replicate offset added to the seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="sparse spectral precision from a series CSV")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    span = p.add_mutually_exclusive_group()
    span.add_argument("--span", type=int, help="smoothing half-width M")
    span.add_argument("--gcv", action="store_true", help="choose M by GCV (default)")
    lam = p.add_mutually_exclusive_group()
    lam.add_argument("--lambda", dest="lam", type=float)
    lam.add_argument("--lambda-grid", help="a:b:steps grid for cross-validation")
    p.add_argument("--freq-stride", type=int, default=1)
    p.add_argument("--band", type=_band, help="only estimate frequencies in (a, b)")
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--power-csv", help="also write smoothed power spectra (long format)")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("coherence", help="band summary of partial coherence")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--band", type=_band, default=(0.0, 0.1))
    p.add_argument("--stat", default="median", choices=("median", "mean", "max", "min"))
    p.add_argument("--tau", type=float, default=1e-12)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("bench", help="Monte Carlo benchmark of a scenario")
    p.add_argument("config")
    p.add_argument("--out", required=True)
    p.add_argument("--json")
    p.add_argument("--reps", type=int)
    p.add_argument("--estimators", default="naive,shrinkage,sipe")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="run embedding and LP oracle self-tests")
    p.add_argument("--cases", type=int, default=200)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (InputError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
