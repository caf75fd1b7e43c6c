"""Emission-cone thermometry: FWHM(T) calibration curves and their inversion.

A curve stores (T, FWHM) knots computed with the forward model at a fixed
pulse duration.  Inversion interpolates log T against the log of the width
with a monotone cubic (PCHIP), and can be refined by bisection on the
forward model itself.

Calibration files are CSV with a commented header::

    # fingerprint=<sha256 of the model parameters>
    # tau_s=<pulse duration>
    # schema=stokes-thermo-cal-v1
    temperature_K,fwhm_deg
    ...
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from decimal import Decimal, localcontext

import numpy as np
from scipy.interpolate import PchipInterpolator

from .emission import DEFAULT_NODES, DEFAULT_POINTS, DEFAULT_THETA_MAX, measure_fwhm
from .errors import (
    BracketInvalid,
    FingerprintMismatch,
    FlatRegime,
    FormatError,
    NoHalfCrossing,
    NonMonotoneCurve,
    OutOfCalibrationRange,
)

SCHEMA = "stokes-thermo-cal-v1"
MIN_KNOTS = 8
DEFAULT_T_MIN = 1e-3
DEFAULT_T_MAX = 300.0
DEFAULT_T_POINTS = 32

_PI = Decimal("3.14159265358979323846264338327950288419716939937510582097494459")
_HEADER = ("temperature_K", "fwhm_deg")


class FlatRegimeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CalibrationCurve:
    tau: float
    model_fingerprint: str
    temperatures: tuple
    fwhms: tuple  # radians

    def __post_init__(self):
        t = tuple(float(x) for x in self.temperatures)
        f = tuple(float(x) for x in self.fwhms)
        object.__setattr__(self, "temperatures", t)
        object.__setattr__(self, "fwhms", f)
        if len(t) != len(f):
            raise ValueError("temperature and FWHM columns differ in length")
        if len(t) < MIN_KNOTS:
            raise ValueError(f"a calibration curve needs at least {MIN_KNOTS} points, got {len(t)}")
        bad_t = [i for i in range(1, len(t)) if not t[i] > t[i - 1]]
        if bad_t:
            raise NonMonotoneCurve(bad_t, "temperatures are not strictly increasing")
        bad_f = [i for i in range(1, len(f)) if not f[i] < f[i - 1]]
        if bad_f:
            raise NonMonotoneCurve(bad_f)
        if min(t) <= 0 or min(f) <= 0:
            raise ValueError("temperatures and widths must be positive")

    @property
    def points(self):
        return list(zip(self.temperatures, self.fwhms))

    @property
    def fwhm_range(self):
        return self.fwhms[-1], self.fwhms[0]


def default_temperature_grid(t_min=DEFAULT_T_MIN, t_max=DEFAULT_T_MAX, n=DEFAULT_T_POINTS):
    return np.geomspace(t_min, t_max, n)


def calibrate(model, tau=None, t_grid=None, *, trim_flat=None, phi=0.0,
              theta_max=DEFAULT_THETA_MAX, n_points=DEFAULT_POINTS, n_nodes=DEFAULT_NODES):
    """Forward-model FWHM at each grid temperature for pulse duration ``tau``.

    ``model`` provides species, cell and beam; its temperature is ignored.
    Flat-regime temperatures raise :class:`FlatRegime`, or are dropped
    with a :class:`FlatRegimeWarning` when ``trim_flat`` is true.  By
    default only the built-in grid (``t_grid=None``) is trimmed.
    """
    base = model if tau is None else model.with_tau(tau)
    tau = base.pump.duration_tau
    trim = t_grid is None if trim_flat is None else trim_flat
    grid = default_temperature_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("t_grid must be strictly increasing and positive")

    temps, widths = [], []
    for T in grid:
        try:
            width = measure_fwhm(base.with_temperature(float(T)), phi, theta_max, n_points, n_nodes)
        except NoHalfCrossing:
            if not trim:
                raise FlatRegime(float(T), tau) from None
            warnings.warn(f"dropping T={T!r} K: flat emission at tau={tau!r} s",
                          FlatRegimeWarning, stacklevel=2)
            continue
        temps.append(float(T))
        widths.append(width)
    return CalibrationCurve(tau, base.fingerprint(), tuple(temps), tuple(widths))


def _abscissa(fwhm, hot_fwhm):
    f = np.asarray(fwhm, dtype=float)
    if hot_fwhm is None:
        return np.log(f)
    # widths add roughly in quadrature with the cell-limited cone
    return np.log(f * f - hot_fwhm * hot_fwhm)


def invert_temperature(curve, fwhm_measured, *, hot_fwhm=None):
    """Temperature whose emission cone has the measured FWHM (radians).

    Interpolates log T monotonically against log FWHM.  Passing the
    fast-motion limit width ``hot_fwhm`` (see
    :func:`stokes_thermo.emission.measure_hot_fwhm`) interpolates against
    log(FWHM^2 - hot_fwhm^2) instead, which is nearly linear in log T
    from the cold to the cell-limited regime.
    """
    lo, hi = curve.fwhm_range
    if not lo <= fwhm_measured <= hi:
        raise OutOfCalibrationRange(fwhm_measured, lo, hi)
    if fwhm_measured in curve.fwhms:
        return curve.temperatures[curve.fwhms.index(fwhm_measured)]
    if hot_fwhm is not None and not 0 < hot_fwhm < lo:
        raise ValueError("hot-limit width must be positive and below every calibrated width")
    x = _abscissa(curve.fwhms[::-1], hot_fwhm)
    y = np.log(curve.temperatures[::-1])
    t = math.exp(float(PchipInterpolator(x, y)(_abscissa(fwhm_measured, hot_fwhm))))
    return min(max(t, curve.temperatures[0]), curve.temperatures[-1])


def bracket_for(curve, fwhm_measured):
    """Adjacent knot temperatures whose widths straddle the measurement."""
    lo, hi = curve.fwhm_range
    if not lo < fwhm_measured < hi:
        raise OutOfCalibrationRange(fwhm_measured, lo, hi)
    f = curve.fwhms
    for i in range(len(f) - 1):
        if f[i] > fwhm_measured > f[i + 1]:
            return curve.temperatures[i], curve.temperatures[i + 1]
    i = f.index(fwhm_measured)
    return curve.temperatures[i - 1], curve.temperatures[i + 1]


def refine_temperature(model, tau, fwhm_measured, bracket, rel_tol=1e-3, *, phi=0.0,
                       theta_max=DEFAULT_THETA_MAX, n_points=DEFAULT_POINTS,
                       n_nodes=DEFAULT_NODES):
    """Bisect on temperature against the full forward model.

    Bisection is geometric; it stops once T_hi / T_lo - 1 <= rel_tol and
    returns the geometric midpoint.
    """
    t_lo, t_hi = (float(x) for x in bracket)
    if not (0 < t_lo < t_hi):
        raise BracketInvalid(f"bracket must satisfy 0 < T_lo < T_hi, got {bracket!r}")
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    base = model.with_tau(tau)

    def width(T):
        try:
            return measure_fwhm(base.with_temperature(T), phi, theta_max, n_points, n_nodes)
        except NoHalfCrossing:
            return math.inf

    if not width(t_lo) > fwhm_measured > width(t_hi):
        raise BracketInvalid(
            f"forward FWHM over [{t_lo!r}, {t_hi!r}] K does not straddle {fwhm_measured!r} rad")
    while t_hi / t_lo - 1.0 > rel_tol:
        mid = math.sqrt(t_lo * t_hi)
        if width(mid) > fwhm_measured:
            t_lo = mid
        else:
            t_hi = mid
    return math.sqrt(t_lo * t_hi)


def rad_to_deg_text(rad):
    """Degrees as text that :func:`deg_text_to_rad` maps back to ``rad`` exactly."""
    with localcontext() as ctx:
        ctx.prec = 50
        return format(Decimal(rad) * 180 / _PI, ".25g")


def deg_text_to_rad(text):
    d = Decimal(text.strip())
    if not d.is_finite():
        raise ValueError(f"angle {text!r} is not finite")
    with localcontext() as ctx:
        ctx.prec = 50
        return float(d * _PI / 180)


def save_curve(curve, destination):
    lines = [
        f"# fingerprint={curve.model_fingerprint}",
        f"# tau_s={curve.tau!r}",
        f"# schema={SCHEMA}",
        ",".join(_HEADER),
    ]
    lines += [f"{t!r},{rad_to_deg_text(f)}" for t, f in curve.points]
    with open(destination, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def load_curve(source, model=None):
    """Read a calibration file; with ``model`` given, check its fingerprint."""
    meta = {}
    rows = []
    header_seen = False
    with open(source) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if header_seen:
                    raise FormatError(f"line {lineno}: comment after the column header")
                key, sep, value = line[1:].strip().partition("=")
                if not sep:
                    raise FormatError(f"line {lineno}: malformed metadata {line!r}")
                meta[key.strip()] = value.strip()
                continue
            if not header_seen:
                if tuple(c.strip() for c in line.split(",")) != _HEADER:
                    raise FormatError(f"line {lineno}: expected header {','.join(_HEADER)!r}")
                header_seen = True
                continue
            cells = line.split(",")
            if len(cells) != 2:
                raise FormatError(f"line {lineno}: expected 2 columns")
            try:
                rows.append((float(cells[0]), deg_text_to_rad(cells[1].strip())))
            except (ValueError, ArithmeticError):
                raise FormatError(f"line {lineno}: non-numeric value") from None

    if meta.get("schema") != SCHEMA:
        raise FormatError(f"missing or unsupported schema (expected {SCHEMA})")
    for key in ("fingerprint", "tau_s"):
        if key not in meta:
            raise FormatError(f"missing '# {key}=' header line")
    if not header_seen:
        raise FormatError("missing column header")
    try:
        tau = float(meta["tau_s"])
    except ValueError:
        raise FormatError("tau_s is not a number") from None

    curve = CalibrationCurve(tau, meta["fingerprint"],
                             tuple(r[0] for r in rows), tuple(r[1] for r in rows))
    if model is not None and model.fingerprint() != curve.model_fingerprint:
        raise FingerprintMismatch("calibration was computed for a different model")
    return curve
