"""
Command-line pipelines.  Every stage reads and writes the CSV formats in
:mod:`dyca.io`.

Exit codes: 0 success, 1 runtime or model failure, 2 usage error.
"""
import argparse
import math
import os
import sys

import numpy as np

from dyca import baselines, core, dynsys, io
from dyca.exceptions import DimensionMismatch, DycaError
from dyca.linalg import canonical_correlations, orthonormal_basis, principal_angles
from dyca.signal import BandpassSpec, bandpass_zero_phase, central_difference, correlation_triple


class UsageError(Exception):
    pass


def _snr(text):
    value = float(text)
    if math.isnan(value):
        raise argparse.ArgumentTypeError("SNR must be a number or 'inf'")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _read(args, path=None):
    return io.read_timeseries_csv(path or args.input, args.sample_rate)


def cmd_simulate_rossler(args):
    if args.t_end <= args.t_start + args.transient:
        raise UsageError("--t-end must exceed --t-start + --transient")
    if args.dt <= 0:
        raise UsageError("--dt must be positive")
    params = dynsys.RosslerParams(args.a, args.b, args.c)
    spec = dynsys.IntegrationSpec(t_start=args.t_start, t_end=args.t_end, dt_sample=args.dt,
                                  transient=args.transient)
    io.write_timeseries_csv(dynsys.simulate_rossler(params, spec), args.out)


def cmd_embed(args):
    ts = _read(args)
    if args.dim < ts.channels:
        raise UsageError(f"--dim {args.dim} is below the {ts.channels} input channels")
    spec = dynsys.EmbeddingSpec(args.dim, args.mixing_seed, args.snr_db, args.noise)
    io.write_timeseries_csv(dynsys.embed(ts, spec, args.noise_seed), args.out)


def cmd_windows(args):
    config = io.read_config(args.config) if args.config else io.RunConfig()
    ts = io.read_timeseries_csv(args.input, config.sample_rate_hz)
    band = config.bandpass()
    if band is not None:
        ts = bandpass_zero_phase(ts, band)
    wspec = config.window_spec()
    if wspec.length > ts.samples:
        raise DycaError(f"no window of {wspec.length} samples fits in {ts.samples} samples")
    results = core.dyca_windows(ts, wspec, config.ridges(), config.remove_mean)
    io.write_spectra_csv(results, args.top_k, args.out_spectra)


def cmd_fit(args):
    ts = _read(args)
    triple = correlation_triple(central_difference(ts))
    ridges = tuple(r for r in (args.ridge,) + core.DEFAULT_RIDGES if r >= args.ridge)
    spectrum = core.fit(triple, tuple(dict.fromkeys(ridges)))
    proj = core.build_projection(spectrum, triple, args.threshold, args.rank_tol)
    labels = [f"dyca_{j + 1}" for j in range(proj.n)]
    io.write_matrix_csv(args.out_basis, labels, proj.basis)
    if args.out_amplitudes:
        io.write_timeseries_csv(core.project(ts, proj).series, args.out_amplitudes)
    if args.out_spectrum:
        io.write_spectrum_csv(spectrum, args.out_spectrum)


def cmd_project(args):
    ts = _read(args)
    _, basis = io.read_matrix_csv(args.basis)
    try:
        amps = core.project(ts, basis)
    except DimensionMismatch as exc:
        raise UsageError(str(exc)) from None
    io.write_timeseries_csv(amps.series, args.out)


def cmd_pca(args):
    ts = _read(args)
    if args.k > ts.channels:
        raise UsageError(f"--k {args.k} exceeds {ts.channels} channels")
    res = baselines.pca(ts, args.k)
    io.write_timeseries_csv(res.transform(ts), args.out)
    if args.out_components:
        io.write_matrix_csv(args.out_components, [f"pca_{j + 1}" for j in range(args.k)],
                            res.components)


def cmd_ica(args):
    ts = _read(args)
    if args.k > ts.channels:
        raise UsageError(f"--k {args.k} exceeds {ts.channels} channels")
    res = baselines.fastica(ts, args.k, args.seed, args.max_iter, args.tol)
    if not res.converged:
        print(f"warning: FastICA stopped after {res.iterations_used} iterations without converging",
              file=sys.stderr)
    io.write_timeseries_csv(res.sources, args.out)


def cmd_filter(args):
    ts = _read(args)
    try:
        band = BandpassSpec(args.low, args.high, args.order)
        band.check(ts.dt)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    io.write_timeseries_csv(bandpass_zero_phase(ts, band), args.out)


def cmd_compare(args):
    ts = _read(args)
    if args.k > ts.channels:
        raise UsageError(f"--k {args.k} exceeds {ts.channels} channels")
    truth = _read(args, args.truth) if args.truth else None
    if truth is not None and truth.samples != ts.samples:
        raise UsageError("--truth must have as many samples as --in")

    triple = correlation_triple(central_difference(ts))
    proj = core.build_projection(core.fit(triple), triple, args.threshold)
    pca_res = baselines.pca(ts, args.k)
    ica_res = baselines.fastica(ts, args.k, args.seed)
    amplitudes = {
        "dyca": core.project(ts, proj).series,
        "pca": pca_res.transform(ts),
        "ica": ica_res.sources,
    }
    sensor_bases = {
        "dyca": proj.basis,
        "pca": pca_res.components,
        "ica": orthonormal_basis(ica_res.unmixing.T)[0],
    }

    os.makedirs(args.out_dir, exist_ok=True)
    for name, series in amplitudes.items():
        io.write_timeseries_csv(series, os.path.join(args.out_dir, f"{name}.csv"))

    rows = []
    for name in ("pca", "ica"):
        rows.append((name, "dyca", principal_angles(sensor_bases[name], sensor_bases["dyca"])))
    if truth is not None:
        for name, series in amplitudes.items():
            cc = canonical_correlations(series.data, truth.data)
            rows.append((name, "truth", np.sort(np.arccos(cc))))
    width = max(len(r[2]) for r in rows)
    table = np.full((width, len(rows)), math.nan)
    for j, (_, _, angles) in enumerate(rows):
        table[: len(angles), j] = angles
    io.write_matrix_csv(os.path.join(args.out_dir, "angles.csv"),
                        [f"{name}_vs_{ref}" for name, ref, _ in rows], table)


def build_parser():
    parser = argparse.ArgumentParser(prog="dyca", description="Dynamical Component Analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p, rate=1.0):
        p.add_argument("--in", dest="input", required=True, help="input time series CSV")
        p.add_argument("--sample-rate", type=float, default=rate, help="samples per second")
        return p

    p = sub.add_parser("simulate-rossler", help="integrate the Rössler system")
    p.add_argument("--out", required=True)
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=600.0)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--transient", type=float, default=100.0)
    p.add_argument("--a", type=float, default=0.15)
    p.add_argument("--b", type=float, default=0.2)
    p.add_argument("--c", type=float, default=10.0)
    p.set_defaults(func=cmd_simulate_rossler)

    p = with_input(sub.add_parser("embed", help="mix into sensor channels and add noise"))
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=_positive_int, default=25)
    p.add_argument("--snr-db", type=_snr, default=15.0)
    p.add_argument("--mixing-seed", type=int, default=0)
    p.add_argument("--noise-seed", type=int, default=0)
    p.add_argument("--noise", choices=("multiplicative", "additive"), default="multiplicative")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("windows", help="DyCA spectrum per window")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--config", help="key = value run configuration")
    p.add_argument("--out-spectra", required=True)
    p.add_argument("--top-k", type=_positive_int, default=3)
    p.set_defaults(func=cmd_windows)

    p = with_input(sub.add_parser("fit", help="fit DyCA and write the projection basis"))
    p.add_argument("--threshold", type=float, default=core.DEFAULT_THRESHOLD)
    p.add_argument("--rank-tol", type=float, default=1e-8)
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--out-basis", required=True)
    p.add_argument("--out-amplitudes")
    p.add_argument("--out-spectrum")
    p.set_defaults(func=cmd_fit)

    p = with_input(sub.add_parser("project", help="project onto a stored basis"))
    p.add_argument("--basis", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project)

    p = with_input(sub.add_parser("pca", help="principal component scores"))
    p.add_argument("--k", type=_positive_int, default=3)
    p.add_argument("--out", required=True)
    p.add_argument("--out-components")
    p.set_defaults(func=cmd_pca)

    p = with_input(sub.add_parser("ica", help="FastICA sources"))
    p.add_argument("--k", type=_positive_int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=_positive_int, default=200)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ica)

    p = with_input(sub.add_parser("filter", help="zero-phase Butterworth bandpass"), rate=256.0)
    p.add_argument("--low", type=float, default=0.5)
    p.add_argument("--high", type=float, default=30.0)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filter)

    p = with_input(sub.add_parser("compare", help="DyCA vs PCA vs ICA side by side"))
    p.add_argument("--truth", help="latent states CSV for ground-truth angles")
    p.add_argument("--k", type=_positive_int, default=3)
    p.add_argument("--threshold", type=float, default=core.DEFAULT_THRESHOLD)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad flags
    if getattr(args, "sample_rate", 1.0) <= 0:
        parser.error("--sample-rate must be positive")
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DycaError, OSError, ValueError) as exc:
        print(f"dyca {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
