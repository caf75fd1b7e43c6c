"""Physical parameters and the Stokes-emission amplitude.

The amplitude for an atom whose mean position is r_i and a Stokes photon
along k is

    S(r_i, k) = integral over the cell of f(r, r_i) u(r_perp) exp(-i dk . r) dr

with f the normalized Gaussian motion kernel of radius A and u the Gaussian
pump profile.  The integrand separates, so S is a product of three 1-D
factors, each a Gaussian-windowed Fourier integral with a closed form in
terms of complex error functions (see :func:`windowed_gaussian_fourier`).
"""

from __future__ import annotations

import dataclasses
import functools
import hashlib
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from .cerf import faddeeva, pair_erf_diff
from .errors import NegativeTemperature, QuadratureNonConvergence

K_B = 1.380649e-23  # J/K, exact SI value
INFINITE_BEAM = math.inf
MIN_TEMPERATURE = 1e-9  # K

# the motion kernel exp(-d^2/A^2) is below 1e-27 beyond this many radii
EDGE_LAYER_RADII = 8.0


@dataclass(frozen=True)
class AtomSpecies:
    mass: float  # kg
    transition_wavelength: float  # m

    def __post_init__(self):
        if not (self.mass > 0 and self.transition_wavelength > 0):
            raise ValueError("species mass and wavelength must be positive")

    @property
    def wavenumber(self):
        return 2 * math.pi / self.transition_wavelength


# 87Rb, D1 line (5P_1/2 excited level)
RB87 = AtomSpecies(mass=1.44316e-25, transition_wavelength=794.98e-9)


@dataclass(frozen=True)
class CloudGeometry:
    lx: float
    ly: float
    lz: float

    def __post_init__(self):
        if not (self.lx > 0 and self.ly > 0 and self.lz > 0):
            raise ValueError("cell dimensions must be positive")

    @property
    def volume(self):
        return self.lx * self.ly * self.lz

    @property
    def lengths(self):
        return (self.lx, self.ly, self.lz)


PENCIL_CELL = CloudGeometry(2e-3, 2e-3, 30e-3)


@dataclass(frozen=True)
class PumpPulse:
    waist_r0: float  # m, u = exp(-(x^2 + y^2) / r0^2)
    duration_tau: float  # s

    def __post_init__(self):
        if not (self.waist_r0 > 0 and self.duration_tau > 0):
            raise ValueError("pump waist and duration must be positive")


def most_probable_speed(species, temperature):
    """Most probable Maxwell-Boltzmann speed sqrt(2 k_B T / m) in m/s."""
    if temperature < 0:
        raise NegativeTemperature(f"temperature must be >= 0, got {temperature!r}")
    return math.sqrt(2.0 * K_B * temperature / species.mass)


def motion_radius(species, temperature, tau):
    """Radius A(T) = v_a * tau of the region explored during the pulse."""
    if not tau > 0:
        raise ValueError("pulse duration must be positive")
    return most_probable_speed(species, temperature) * tau


@dataclass(frozen=True)
class ThermalMotion:
    radius_A: float
    temperature: float
    tau: float

    @classmethod
    def from_temperature(cls, species, temperature, tau):
        return cls(motion_radius(species, temperature, tau), temperature, tau)

    @classmethod
    def from_radius(cls, species, radius, tau):
        """Motion fixed by its radius; the temperature is the one that yields it."""
        if not radius > 0:
            raise ValueError("motion radius must be positive")
        v = radius / tau
        return cls(radius, species.mass * v * v / (2.0 * K_B), tau)


@dataclass(frozen=True)
class ExperimentModel:
    species: AtomSpecies
    cell: CloudGeometry
    pump: PumpPulse
    motion: ThermalMotion

    def __post_init__(self):
        m = self.motion
        if m.temperature < MIN_TEMPERATURE or not m.radius_A > 0:
            raise ValueError(
                f"temperature must be at least {MIN_TEMPERATURE} K (got {m.temperature!r}); "
                "use a small finite temperature for the cold limit"
            )
        if m.tau != self.pump.duration_tau:
            raise ValueError("motion and pump pulse durations differ")
        expected = motion_radius(self.species, m.temperature, m.tau)
        if abs(expected - m.radius_A) > 1e-12 * m.radius_A:
            raise ValueError("motion radius inconsistent with temperature and tau")

    @classmethod
    def build(cls, temperature, *, tau=10e-9, species=RB87, cell=PENCIL_CELL, waist=2e-3):
        pump = PumpPulse(waist, tau)
        return cls(species, cell, pump, ThermalMotion.from_temperature(species, temperature, tau))

    def with_temperature(self, temperature):
        return dataclasses.replace(
            self,
            motion=ThermalMotion.from_temperature(self.species, temperature, self.pump.duration_tau),
        )

    def with_motion_radius(self, radius):
        return dataclasses.replace(
            self, motion=ThermalMotion.from_radius(self.species, radius, self.pump.duration_tau)
        )

    def with_tau(self, tau):
        """Same temperature, different pulse duration (and hence motion radius)."""
        pump = PumpPulse(self.pump.waist_r0, tau)
        motion = ThermalMotion.from_temperature(self.species, self.motion.temperature, tau)
        return dataclasses.replace(self, pump=pump, motion=motion)

    @property
    def radius(self):
        return self.motion.radius_A

    @property
    def temperature(self):
        return self.motion.temperature

    def fingerprint(self):
        """Hex digest of the temperature-independent parameters."""
        payload = {
            "mass_kg": self.species.mass,
            "wavelength_m": self.species.transition_wavelength,
            "cell_m": list(self.cell.lengths),
            "waist_m": self.pump.waist_r0,
            "tau_s": self.pump.duration_tau,
        }
        text = json.dumps({k: repr(v) for k, v in payload.items()}, sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class StokesDirection:
    theta: float  # polar angle from the pump axis z
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi!r}")


def delta_k_components(k0, theta, phi):
    """(dk_x, dk_y, dk_z) for |k| = k0; broadcasts over theta and phi."""
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    # cos(theta) - 1 without cancellation
    return k0 * s * np.cos(phi), k0 * s * np.sin(phi), -2.0 * k0 * np.sin(0.5 * theta) ** 2


def delta_k(model, direction):
    """Wave-vector mismatch k - k0 z_hat between Stokes photon and pump."""
    kx, ky, kz = delta_k_components(model.species.wavenumber, direction.theta, direction.phi)
    return np.array([float(kx), float(ky), float(kz)])


def windowed_gaussian_fourier(center, freq, motion_A, beam_w, length):
    """1-D factor of the emission amplitude.

    Closed form of

        G = int_{-L/2}^{L/2} dx  exp(-(x-c)^2/A^2) / (sqrt(pi) A)
                                 * exp(-x^2/w^2) * exp(-i q x)

    Completing the square gives a Gaussian of width sigma = (1/A^2 + 1/w^2)^(-1/2)
    centred on b = sigma^2 (c/A^2 - i q/2), so that

        G = sigma/(2A) exp(C) [erf((L/2 - b)/sigma) + erf((L/2 + b)/sigma)],
        C = -c^2/(A^2 + w^2) - sigma^2 q^2/4 - i q c sigma^2/A^2.

    The exponents of the two edge terms are the log of the integrand at
    x = +-L/2 and are passed to :func:`pair_erf_diff` in that exact form.
    ``beam_w = INFINITE_BEAM`` drops the beam factor (the axial direction).
    Broadcasts over array arguments.
    """
    c = np.asarray(center, dtype=float)
    q = np.asarray(freq, dtype=float)
    A2 = motion_A * motion_A
    inv_w2 = 0.0 if math.isinf(beam_w) else 1.0 / (beam_w * beam_w)
    alpha2 = 1.0 / (1.0 + A2 * inv_w2)  # sigma^2 / A^2
    s2 = A2 * alpha2
    sigma = math.sqrt(s2)
    h = 0.5 * length

    b = alpha2 * c - 0.5j * s2 * q
    upper = (h - b) / sigma
    lower = (-h - b) / sigma
    log_pref = -c * c * (inv_w2 * alpha2) - 0.25 * s2 * q * q - 1j * q * c * alpha2
    log_upper = -((h - c) ** 2) / A2 - h * h * inv_w2 - 1j * q * h
    log_lower = -((h + c) ** 2) / A2 - h * h * inv_w2 + 1j * q * h
    diff = pair_erf_diff(upper, lower, log_pref, log_a=log_upper, log_b=log_lower)
    return 0.5 * math.sqrt(alpha2) * diff


def windowed_gaussian_fourier_quadrature(center, freq, motion_A, beam_w, length,
                                         epsabs=1e-13, epsrel=1e-11):
    """Same integral by adaptive quadrature; a slow reference for tests."""
    c, q = float(center), float(freq)
    inv_w2 = 0.0 if math.isinf(beam_w) else 1.0 / (beam_w * beam_w)
    norm = 1.0 / (math.sqrt(math.pi) * motion_A)

    def envelope(x):
        return norm * math.exp(-((x - c) ** 2) / motion_A**2 - x * x * inv_w2)

    # the kernel is negligible (< e^-169) more than 13 radii from its centre
    lo = max(-0.5 * length, c - 13.0 * motion_A)
    hi = min(0.5 * length, c + 13.0 * motion_A)
    if lo >= hi:
        return 0j

    def run(**kw):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _ = integrate.quad(envelope, lo, hi, epsabs=epsabs, epsrel=epsrel,
                                        limit=5000, **kw)
            except integrate.IntegrationWarning as exc:
                raise QuadratureNonConvergence(str(exc)) from None
        return val

    if q == 0.0:
        pts = [c] if lo < c < hi else None
        return complex(run(points=pts))
    re = run(weight="cos", wvar=q)
    im = -run(weight="sin", wvar=q)
    return complex(re, im)


@functools.lru_cache(maxsize=64)
def _legendre(n):
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def mean_position_rule(length, motion_A, n_nodes=256):
    """Quadrature nodes and weights for integrals over an atom's mean position.

    Integrands built from the amplitude vary on the scale A within A of the
    cell walls and smoothly elsewhere, so the interval is split into two
    edge panels of width min(8 A, L/3) carrying a quarter of the nodes each
    and one interior panel; each panel uses a fixed-order Gauss-Legendre rule.
    """
    if n_nodes < 4:
        raise ValueError("need at least 4 nodes")
    h = 0.5 * length
    d = min(EDGE_LAYER_RADII * motion_A, length / 3.0)
    n_edge = n_nodes // 4
    n_mid = n_nodes - 2 * n_edge
    xs, ws = [], []
    for a, b, n in ((-h, -h + d, n_edge), (-h + d, h - d, n_mid), (h - d, h, n_edge)):
        x, w = _legendre(n)
        xs.append(0.5 * (a + b) + 0.5 * (b - a) * x)
        ws.append(0.5 * (b - a) * w)
    return np.concatenate(xs), np.concatenate(ws)


def axis_factors(model):
    """(length, beam waist) for the x, y and z factors of the amplitude."""
    lx, ly, lz = model.cell.lengths
    r0 = model.pump.waist_r0
    return ((lx, r0), (ly, r0), (lz, INFINITE_BEAM))


def amplitude(model, mean_pos, direction):
    """S(r_i, k): product of the three windowed Gaussian Fourier factors."""
    dk = delta_k(model, direction)
    A = model.radius
    out = 1.0 + 0j
    for c, q, (length, w) in zip(mean_pos, dk, axis_factors(model)):
        out *= complex(windowed_gaussian_fourier(c, q, A, w, length))
    return out


def _axis_terms(motion_A, beam_w):
    A2 = motion_A * motion_A
    inv_w2 = 0.0 if math.isinf(beam_w) else 1.0 / (beam_w * beam_w)
    alpha2 = 1.0 / (1.0 + A2 * inv_w2)
    return A2, inv_w2, alpha2, A2 * alpha2


def windowed_gaussian_fourier_mean(freq, motion_A, beam_w, length, n_nodes=256):
    """Integral of :func:`windowed_gaussian_fourier` over centres in the window.

    G(c) oscillates like exp(-i q c) in the bulk of the cell, which defeats
    any fixed quadrature once qL is large.  Writing

        erf(u) - erf(l) = 2 - exp(-u^2) w(iu) - exp(-l^2) w(-il)

    splits G into a Gaussian bulk term, integrated in closed form, and two
    wall terms whose phases do not depend on c; those are smooth and are
    integrated with :func:`mean_position_rule`.  Broadcasts over ``freq``.
    """
    q = np.asarray(freq, dtype=float)
    A2, inv_w2, alpha2, s2 = _axis_terms(motion_A, beam_w)
    sigma = math.sqrt(s2)
    h = 0.5 * length

    if inv_w2 == 0.0:
        plane = length * np.sinc(q * h / math.pi)
    else:
        B = 1.0 / math.sqrt(inv_w2 * alpha2)  # sqrt(A^2 + w^2)
        plane = math.sqrt(math.pi) * B * windowed_gaussian_fourier(0.0, q * alpha2, B, INFINITE_BEAM, length)
    bulk = np.exp(-0.25 * s2 * q * q) * plane

    c, wt = mean_position_rule(length, motion_A, n_nodes)
    qq = q[..., None]
    b = alpha2 * c - 0.5j * s2 * qq
    upper = (h - b) / sigma
    lower = (-h - b) / sigma
    log_upper = -((h - c) ** 2) / A2 - h * h * inv_w2 - 1j * qq * h
    log_lower = -((h + c) ** 2) / A2 - h * h * inv_w2 + 1j * qq * h
    walls = (np.exp(log_upper) * faddeeva(1j * upper)
             + np.exp(log_lower) * faddeeva(-1j * lower)) @ wt
    return 0.5 * math.sqrt(alpha2) * (2.0 * bulk - walls)
