"""Command-line front end.

    stokes-thermo distribution --temperature 1K --output p.csv
    stokes-thermo calibrate --output cal.csv
    stokes-thermo invert --calibration cal.csv --fwhm-deg 2.5 [--refine]
    stokes-thermo overlap --motion-radius 0.1 --output w.csv

``distribution`` and ``overlap`` take either ``--temperature`` or
``--motion-radius``.

All subcommands take ``--config``.  Exit codes:

    0  success
    1  other error (I/O, invalid argument values)
    2  command-line usage error
    3  configuration file error
    4  flat emission regime during calibration (try a longer pulse)
    5  FWHM outside the calibrated range
    6  calibration file or bracket error
    7  numerical failure
"""

from __future__ import annotations

import argparse
import math
import re
import sys

from . import thermometry
from .collective import weight_scan
from .config import RunConfig, load_config
from .emission import angular_scan, measure_hot_fwhm
from .errors import (
    BracketInvalid,
    ConfigParseError,
    ConfigValidationError,
    FingerprintMismatch,
    FlatRegime,
    FormatError,
    NonMonotoneCurve,
    OutOfCalibrationRange,
    StokesThermoError,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_FLAT_REGIME = 4
EXIT_OUT_OF_RANGE = 5
EXIT_CALIBRATION_FILE = 6
EXIT_NUMERIC = 7

_EXIT_CODES = (
    ((ConfigParseError, ConfigValidationError), EXIT_CONFIG),
    ((FlatRegime,), EXIT_FLAT_REGIME),
    ((OutOfCalibrationRange,), EXIT_OUT_OF_RANGE),
    ((FormatError, FingerprintMismatch, NonMonotoneCurve, BracketInvalid), EXIT_CALIBRATION_FILE),
    ((ArithmeticError,), EXIT_NUMERIC),
)

_UNITS = {"nK": 1e-9, "uK": 1e-6, "µK": 1e-6, "mK": 1e-3, "K": 1.0}
_TEMPERATURE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(nK|uK|µK|mK|K)?\s*$")


def parse_temperature(text):
    """Kelvin from literals such as ``300K``, ``1mK``, ``100uK`` or ``4.2``."""
    m = _TEMPERATURE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"not a temperature: {text!r}")
    value = float(m.group(1)) * _UNITS[m.group(2) or "K"]
    if not value > 0:
        raise argparse.ArgumentTypeError(f"temperature must be positive: {text!r}")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _config(args):
    return load_config(args.config) if args.config else RunConfig()


def cmd_distribution(args):
    cfg = _config(args)
    model = cfg.model(args.temperature, motion_radius=args.motion_radius)
    dist = angular_scan(model, cfg.phi, cfg.theta_max, cfg.points, cfg.nodes_per_axis)
    dist.to_csv(args.output)


def cmd_calibrate(args):
    cfg = _config(args)
    curve = thermometry.calibrate(
        cfg.model(1.0), t_grid=cfg.temperature_grid(), trim_flat=args.trim_flat,
        phi=cfg.phi, theta_max=cfg.theta_max, n_points=cfg.points, n_nodes=cfg.nodes_per_axis)
    thermometry.save_curve(curve, args.output)


def cmd_invert(args):
    cfg = _config(args)
    model = cfg.model(1.0)
    curve = thermometry.load_curve(args.calibration, model)
    try:
        fwhm = thermometry.deg_text_to_rad(args.fwhm_deg)
    except (ValueError, ArithmeticError):
        raise ValueError(f"not an angle: {args.fwhm_deg!r}") from None
    hot = None
    if args.hot_limit:
        hot = measure_hot_fwhm(model, cfg.phi, cfg.theta_max, cfg.points)
    temperature = thermometry.invert_temperature(curve, fwhm, hot_fwhm=hot)
    if args.refine and fwhm not in curve.fwhms:
        temperature = thermometry.refine_temperature(
            model, curve.tau, fwhm, thermometry.bracket_for(curve, fwhm), cfg.rel_tol,
            phi=cfg.phi, theta_max=cfg.theta_max, n_points=cfg.points,
            n_nodes=cfg.nodes_per_axis)
    print(f"temperature_K={temperature!r}")


def cmd_overlap(args):
    cfg = _config(args)
    model = cfg.model(args.temperature, motion_radius=args.motion_radius)
    profile = weight_scan(model, cfg.phi, cfg.theta_max, cfg.points, cfg.nodes_per_axis)
    profile.to_csv(args.output)
    if profile.fwhm_marker is not None:
        print(f"emission_fwhm_deg={math.degrees(profile.fwhm_marker)!r}")


def _add_motion_arguments(parser):
    which = parser.add_mutually_exclusive_group(required=True)
    which.add_argument("--temperature", type=parse_temperature, help="e.g. 300K, 1mK, 100uK")
    which.add_argument("--motion-radius", type=_positive_float, metavar="METRES",
                       help="motion radius A directly, instead of a temperature")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stokes-thermo",
        description="Stokes-photon emission cones and emission-cone thermometry.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run configuration (section.key = value)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distribution", parents=[common],
                       help="peak-normalized angular distribution at one temperature")
    _add_motion_arguments(p)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("calibrate", parents=[common], help="FWHM(T) calibration curve")
    p.add_argument("--output", required=True)
    p.add_argument("--trim-flat", action="store_true",
                   help="drop grid temperatures without a finite cone instead of failing")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("invert", parents=[common], help="temperature from a measured FWHM")
    p.add_argument("--calibration", required=True)
    p.add_argument("--fwhm-deg", required=True)
    p.add_argument("--refine", action="store_true",
                   help="bisect against the forward model down to thermometry.rel_tol")
    p.add_argument("--hot-limit", action="store_true",
                   help="interpolate against the excess over the fast-motion cone width")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("overlap", parents=[common], help="symmetric-state weight versus angle")
    _add_motion_arguments(p)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_overlap)
    return parser


def _exit_code(exc):
    for kinds, code in _EXIT_CODES:
        if isinstance(exc, kinds):
            return code
    return EXIT_ERROR


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (StokesThermoError, ValueError, ArithmeticError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
