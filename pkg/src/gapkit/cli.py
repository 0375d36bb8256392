"""``gapkit`` command line: trajectories in, correlators, spectra and reports out."""
import argparse
import json
import sys
import warnings

import numpy as np

from . import __version__
from .corrections import CorrectionKind, correct_spectrum, egelstaff_correct
from .correlators import (DEFAULT_THREE_TIME_LAG, read_series_csv, three_time_correlator,
                          two_time_correlator, write_grid_csv, write_series_csv)
from .diagnostics import (DEFAULT_SURROGATES, load_profile, rescale_experimental_profile,
                          temperature_invariance, three_point_significance)
from .exceptions import ValidationError
from .oracle import (LINEAR, CouplingForm, Distribution, concatenated_trace, default_quadratic_form,
                     load_modes, mc_correlator, write_analytic_csv)
from .spectral import (DEFAULT_FREQ_MAX, DEFAULT_FREQ_STEP, DEFAULT_WINDOW_FRACTION, WindowSpec,
                       apply_gaussian_window, classical_tdcd, frequency_grid, load_spectrum,
                       save_spectrum)
from .trajectory import load_trajectory, write_trajectory
from .units import PhysicalContext


def _write_json(obj, path):
    text = json.dumps(obj, indent=2)
    if path in (None, "-"):
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _emit_spectrum(spec, path):
    if path in (None, "-"):
        _write_json(spec.to_json(), None)
    else:
        save_spectrum(spec, path)


def _dest(path):
    return sys.stdout if path in (None, "-") else path


def _context(args, fallback=None):
    temp = args.temperature_kelvin if args.temperature_kelvin is not None else fallback
    if temp is None:
        raise ValidationError("temperature unknown: pass --temperature-kelvin")
    return PhysicalContext(temp)


def _load(args):
    return load_trajectory(args.input, temperature=args.temperature_kelvin)


def cmd_correlate(args):
    traj = _load(args)
    write_series_csv(two_time_correlator(traj, args.max_lag), _dest(args.output))


def cmd_threepoint(args):
    traj = _load(args)
    write_grid_csv(three_time_correlator(traj, args.max_k, args.max_j), _dest(args.output))


def cmd_spectrum(args):
    series = read_series_csv(args.input)
    if args.temperature_kelvin is not None:
        series = type(series)(series.dt, series.values, series.origin_stats, args.temperature_kelvin)
    if args.window_fraction > 0:
        series = apply_gaussian_window(series, WindowSpec.for_series(series, args.window_fraction))
    spec = classical_tdcd(series, frequency_grid(args.freq_max, args.freq_step))
    _emit_spectrum(spec, args.output)


def cmd_correct(args):
    kind = CorrectionKind.parse(args.method)
    if kind is CorrectionKind.EGELSTAFF:
        series = read_series_csv(args.input)
        ctx = _context(args, series.temperature)
        if args.window_fraction > 0:
            series = apply_gaussian_window(series, WindowSpec.for_series(series, args.window_fraction))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            G, J = egelstaff_correct(series, ctx, frequency_grid(args.freq_max, args.freq_step))
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    else:
        G_cl = load_spectrum(args.input)
        ctx = _context(args, G_cl.temperature)
        G, J = correct_spectrum(G_cl, kind, ctx)
    out = J if args.emit == "J" else G
    _emit_spectrum(out, args.output)


def _coupling(args, modes, ctx):
    if args.coupling == "linear":
        return LINEAR
    if args.xi2 is None:
        return default_quadratic_form(modes, ctx)
    xi = np.zeros((len(modes), len(modes)))
    xi[0, 0] = args.xi2
    return CouplingForm(xi)


def cmd_oracle(args):
    modes = load_modes(args.modes)
    ctx = _context(args)
    dist = Distribution(args.distribution)
    form = _coupling(args, modes, ctx)
    times = args.dt_fs * np.arange(args.steps)
    dest = _dest(args.output)
    if args.emit == "analytic":
        write_analytic_csv(modes, ctx, times, dest)
    elif args.emit == "trace":
        traj = concatenated_trace(modes, ctx, dist, form, n_segments=args.segments, steps=args.steps,
                                  dt=args.dt_fs, seed=args.seed)
        write_trajectory(traj, dest)
    else:
        series, _ = mc_correlator(modes, ctx, dist, form, n_samples=args.samples, times=times,
                                  seed=args.seed, workers=args.workers)
        write_series_csv(series, dest)


def cmd_compare_temps(args):
    report = temperature_invariance(load_spectrum(args.a), load_spectrum(args.b))
    _write_json(report.to_json(), args.output)


def cmd_significance(args):
    traj = _load(args)
    report = three_point_significance(traj, surrogates=args.surrogates, seed=args.seed,
                                      max_k=args.max_k, max_j=args.max_j, workers=args.workers)
    _write_json(report.to_json(), args.output)


def cmd_rescale_profile(args):
    spec = rescale_experimental_profile(*load_profile(args.input))
    _emit_spectrum(spec, args.output)


def _add_input(p, temperature=True):
    p.add_argument("--input", required=True, help="input file")
    p.add_argument("--output", default=None, help="output file (default: stdout)")
    if temperature:
        p.add_argument("--temperature-kelvin", type=float, default=None,
                       help="overrides the temperature stored in the input")


def _add_grid(p):
    p.add_argument("--window-fraction", type=float, default=DEFAULT_WINDOW_FRACTION,
                   help="Gaussian window variance as a fraction of t_max^2; 0 disables it")
    p.add_argument("--freq-max", type=float, default=DEFAULT_FREQ_MAX, help="cm^-1")
    p.add_argument("--freq-step", type=float, default=DEFAULT_FREQ_STEP, help="cm^-1")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gapkit",
        description="Bath spectral densities from classical energy-gap trajectories.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="<subcommand>")

    p = sub.add_parser("correlate", help="two-time correlator of a gap trajectory")
    _add_input(p)
    p.add_argument("--max-lag", type=int, default=None, help="default min(N/4, 400)")
    p.add_argument("--detrend", choices=["none"], default="none",
                   help="drift removal beyond the mean (only 'none' is available)")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("threepoint", help="three-time correlator grid")
    _add_input(p)
    p.add_argument("--max-k", type=int, default=DEFAULT_THREE_TIME_LAG)
    p.add_argument("--max-j", type=int, default=DEFAULT_THREE_TIME_LAG)
    p.set_defaults(func=cmd_threepoint)

    p = sub.add_parser("spectrum", help="windowed classical TDCD from a correlator CSV")
    _add_input(p)
    _add_grid(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("correct", help="apply a semiclassical correction")
    _add_input(p)
    p.add_argument("--method", required=True,
                   help="standard|harmonic|schofield|egelstaff|schofield-harmonic; "
                        "egelstaff reads a correlator CSV")
    p.add_argument("--emit", choices=["J", "G"], default="J", help="which spectrum to write")
    _add_grid(p)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("oracle", help="harmonic-bath reference data")
    p.add_argument("--modes", required=True, help="CSV with header omega_cm1,huang_rhys")
    p.add_argument("--output", default=None)
    p.add_argument("--temperature-kelvin", type=float, required=True)
    p.add_argument("--distribution", choices=[d.value for d in Distribution], default="boltzmann")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--dt-fs", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=401, help="time points per trajectory")
    p.add_argument("--segments", type=int, default=10, help="trajectories joined by --emit trace")
    p.add_argument("--coupling", choices=["linear", "quadratic"], default="linear")
    p.add_argument("--xi2", type=float, default=None,
                   help="quadratic coefficient on the first mode (default: ~10%% of s)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--emit", choices=["correlator", "trace", "analytic"], default="correlator")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare-temps", help="temperature-invariance report for two J spectra")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_compare_temps)

    p = sub.add_parser("significance", help="three-time correlator against permutation surrogates")
    _add_input(p)
    p.add_argument("--surrogates", type=int, default=DEFAULT_SURROGATES)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--max-k", type=int, default=DEFAULT_THREE_TIME_LAG)
    p.add_argument("--max-j", type=int, default=DEFAULT_THREE_TIME_LAG)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_significance)

    p = sub.add_parser("rescale-profile", help="multiply a measured profile by nu^2")
    _add_input(p, temperature=False)
    p.set_defaults(func=cmd_rescale_profile)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValidationError, FileNotFoundError) as exc:
        print(f"gapkit {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
