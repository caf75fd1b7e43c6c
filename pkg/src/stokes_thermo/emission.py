"""Angular distribution of spontaneously emitted Stokes photons.

With the continuum replacement sum_i -> (N/V) int dV the emission
probability along k is proportional to the integral of |S(r, k)|^2 over all
mean positions in the cell.  Because S is a product of per-axis factors, so
is that integral, and the work reduces to three 1-D quadratures per angle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoHalfCrossing
from .model import (
    axis_factors,
    delta_k_components,
    mean_position_rule,
    windowed_gaussian_fourier,
    windowed_gaussian_fourier_mean,
)

DEFAULT_THETA_MAX = math.radians(20.0)
DEFAULT_POINTS = 2001
DEFAULT_NODES = 256
# a crossing closer to theta = 0 than this fraction of the scan is re-scanned finer
_MIN_CROSSING_FRACTION = 0.25
_MAX_RESCANS = 64
_Q_CHUNK = 256


@dataclass(frozen=True, eq=False)
class AngularDistribution:
    """Peak-normalized emission probability sampled along theta at fixed phi."""

    phi: float
    thetas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t, v = np.asarray(self.thetas, float), np.asarray(self.values, float)
        if t.shape != v.shape or t.ndim != 1 or len(t) < 3:
            raise ValueError("thetas and values must be 1-D of equal length >= 3")
        if np.any(np.diff(t) <= 0):
            raise ValueError("thetas must be strictly increasing")
        if v.max() != 1.0 or v.min() < 0.0:
            raise ValueError("values must be peak-normalized into [0, 1]")
        object.__setattr__(self, "thetas", t)
        object.__setattr__(self, "values", v)

    def to_csv(self, path):
        write_csv(path, ("theta_deg", "p_normalized"), np.degrees(self.thetas), self.values)


def write_csv(path, header, *columns):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in zip(*columns):
            out.writerow([format(float(x), ".17g") for x in row])


def _axis_integrals(q, motion_A, beam_w, length, n_nodes, with_mean=False):
    """int |G|^2 dc (and optionally int G dc) for every entry of q."""
    q = np.asarray(q, dtype=float)
    uq, inverse = np.unique(q, return_inverse=True)
    c, wt = mean_position_rule(length, motion_A, n_nodes)
    power = np.empty(uq.shape)
    for start in range(0, len(uq), _Q_CHUNK):
        chunk = uq[start:start + _Q_CHUNK]
        g = windowed_gaussian_fourier(c[None, :], chunk[:, None], motion_A, beam_w, length)
        power[start:start + _Q_CHUNK] = (g.real**2 + g.imag**2) @ wt
    power = power[inverse].reshape(q.shape)
    if not with_mean:
        return power
    mean = np.empty(uq.shape, dtype=complex)
    for start in range(0, len(uq), _Q_CHUNK):
        chunk = uq[start:start + _Q_CHUNK]
        mean[start:start + _Q_CHUNK] = windowed_gaussian_fourier_mean(
            chunk, motion_A, beam_w, length, n_nodes)
    return power, mean[inverse].reshape(q.shape)


def emission_profile(model, thetas, phi=0.0, n_nodes=DEFAULT_NODES):
    """Unnormalized emission probability int |S|^2 dV for each theta (m^3)."""
    qs = delta_k_components(model.species.wavenumber, thetas, phi)
    out = np.ones(np.shape(thetas))
    for q, (length, w) in zip(qs, axis_factors(model)):
        out = out * _axis_integrals(q, model.radius, w, length, n_nodes)
    return out


def emission_probability(model, direction, n_nodes=DEFAULT_NODES):
    """Emission probability along one direction, up to a k-independent constant."""
    return float(emission_profile(model, np.array([direction.theta]), direction.phi, n_nodes)[0])


def _normalized(thetas, phi, raw):
    peak = raw.max()
    if not peak > 0:
        raise ArithmeticError("emission probability vanished on the whole scan")
    return AngularDistribution(phi, thetas, raw / peak)


def angular_scan(model, phi=0.0, theta_max=DEFAULT_THETA_MAX, n_points=DEFAULT_POINTS,
                 n_nodes=DEFAULT_NODES):
    if not 0.0 < theta_max <= math.pi:
        raise ValueError("theta_max must lie in (0, pi]")
    if n_points < 3:
        raise ValueError("need at least 3 scan points")
    thetas = np.linspace(0.0, theta_max, n_points)
    return _normalized(thetas, phi, emission_profile(model, thetas, phi, n_nodes))


def _first_crossing(dist):
    below = np.flatnonzero(dist.values <= 0.5)
    if below.size == 0:
        raise NoHalfCrossing(float(dist.thetas[-1]), float(dist.values.min()))
    return int(below[0])


def fwhm(dist):
    """Full width at half maximum of a distribution peaked at theta = 0.

    The first sample at or below one half is bracketed with its predecessor
    and the crossing found by linear interpolation; the width is twice that
    angle since P is even in theta.
    """
    if dist.values[0] != 1.0:
        raise ValueError("fwhm expects the peak at theta = 0")
    j = _first_crossing(dist)
    t0, t1 = dist.thetas[j - 1], dist.thetas[j]
    v0, v1 = dist.values[j - 1], dist.values[j]
    return float(2.0 * (t0 + (v0 - 0.5) / (v0 - v1) * (t1 - t0)))


def _adaptive_fwhm(scan, theta_max, n_points):
    """Rescan until the half crossing is bracketed and well resolved.

    A missing crossing doubles the range (up to pi); a crossing in the first
    quarter of the grid shrinks the range to twice the first sample below
    one half, which puts the crossing near mid-grid.
    """
    for _ in range(_MAX_RESCANS):
        dist = scan(theta_max)
        try:
            j = _first_crossing(dist)
        except NoHalfCrossing:
            if theta_max >= math.pi:
                raise
            theta_max = min(2.0 * theta_max, math.pi)
            continue
        if j < _MIN_CROSSING_FRACTION * (n_points - 1):
            theta_max = 2.0 * float(dist.thetas[j])
            continue
        return fwhm(dist)
    raise ArithmeticError("emission cone too narrow to resolve")


def measure_fwhm(model, phi=0.0, theta_max=DEFAULT_THETA_MAX, n_points=DEFAULT_POINTS,
                 n_nodes=DEFAULT_NODES):
    """FWHM of the emission cone in radians, choosing the scan range automatically.

    Raises :class:`NoHalfCrossing` when the distribution stays above one
    half all the way to theta = pi (the flat, cold regime).
    """
    return _adaptive_fwhm(
        lambda tm: angular_scan(model, phi, tm, n_points, n_nodes), theta_max, n_points)


def cold_limit_distribution(model, direction=None):
    """Emission probability for atoms frozen in place: int |u|^2 dV, flat in k."""
    total = 1.0
    for length, w in axis_factors(model):
        if math.isinf(w):
            total *= length
        else:
            total *= w * math.sqrt(math.pi / 2) * math.erf(math.sqrt(2) * 0.5 * length / w)
    return total


def _beam_fourier(q, length, w):
    """int over the window of u(x) exp(-i q x) dx."""
    if math.isinf(w):
        return length * np.sinc(np.asarray(q, float) * 0.5 * length / math.pi)
    # a Gaussian beam is the motion kernel with A -> w, times sqrt(pi) w
    return math.sqrt(math.pi) * w * windowed_gaussian_fourier(0.0, q, w, math.inf, length)


def hot_limit_profile(model, thetas, phi=0.0):
    """|F(dk)|^2 for uniformly spread atoms (fast-motion limit), unnormalized."""
    qs = delta_k_components(model.species.wavenumber, thetas, phi)
    out = np.ones(np.shape(thetas))
    for q, (length, w) in zip(qs, axis_factors(model)):
        f = _beam_fourier(q, length, w)
        out = out * (f.real**2 + f.imag**2)
    return out


def hot_limit_distribution(model, direction):
    return float(hot_limit_profile(model, np.array([direction.theta]), direction.phi)[0])


def hot_limit_scan(model, phi=0.0, theta_max=DEFAULT_THETA_MAX, n_points=DEFAULT_POINTS):
    thetas = np.linspace(0.0, theta_max, n_points)
    return _normalized(thetas, phi, hot_limit_profile(model, thetas, phi))


def measure_hot_fwhm(model, phi=0.0, theta_max=DEFAULT_THETA_MAX, n_points=DEFAULT_POINTS):
    """FWHM of the fast-motion limit: the narrowest cone the cell allows."""
    return _adaptive_fwhm(lambda tm: hot_limit_scan(model, phi, tm, n_points), theta_max, n_points)
