"""Run configuration in a line-based ``section.key = value`` format.

Blank lines and ``#`` comments are ignored; every key is optional and
defaults to the 87Rb pencil-cell setup::

    species.mass_kg = 1.44316e-25
    species.wavelength_m = 794.98e-9
    cell.lx_m = 2e-3
    cell.ly_m = 2e-3
    cell.lz_m = 30e-3
    pump.waist_m = 2e-3
    pump.tau_s = 1e-5
    scan.phi_deg = 0
    scan.theta_max_deg = 20
    scan.points = 2001
    quadrature.nodes_per_axis = 256
    thermometry.t_min_K = 1e-3
    thermometry.t_max_K = 300
    thermometry.n_points = 32
    thermometry.rel_tol = 1e-3
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigParseError, ConfigValidationError
from .model import AtomSpecies, CloudGeometry, ExperimentModel, PumpPulse, ThermalMotion


@dataclass(frozen=True)
class RunConfig:
    mass_kg: float = 1.44316e-25
    wavelength_m: float = 794.98e-9
    lx_m: float = 2e-3
    ly_m: float = 2e-3
    lz_m: float = 30e-3
    waist_m: float = 2e-3
    tau_s: float = 1e-5
    phi_deg: float = 0.0
    theta_max_deg: float = 20.0
    points: int = 2001
    nodes_per_axis: int = 256
    t_min_K: float = 1e-3
    t_max_K: float = 300.0
    n_points: int = 32
    rel_tol: float = 1e-3

    def __post_init__(self):
        positive = ("mass_kg", "wavelength_m", "lx_m", "ly_m", "lz_m", "waist_m", "tau_s",
                    "theta_max_deg", "t_min_K", "t_max_K", "rel_tol")
        for name in positive:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigValidationError(f"{name} must be positive and finite, got {value!r}")
        if not 0.0 <= self.phi_deg < 360.0:
            raise ConfigValidationError(f"phi_deg must lie in [0, 360), got {self.phi_deg!r}")
        if self.theta_max_deg > 180.0:
            raise ConfigValidationError("theta_max_deg must not exceed 180")
        if self.points < 3:
            raise ConfigValidationError(f"points must be >= 3, got {self.points}")
        if self.nodes_per_axis < 4:
            raise ConfigValidationError(f"nodes_per_axis must be >= 4, got {self.nodes_per_axis}")
        if self.n_points < 8:
            raise ConfigValidationError(f"n_points must be >= 8, got {self.n_points}")
        if not self.t_min_K < self.t_max_K:
            raise ConfigValidationError("t_min_K must be below t_max_K")
        if not self.rel_tol < 1:
            raise ConfigValidationError("rel_tol must be below 1")

    @property
    def phi(self):
        return math.radians(self.phi_deg)

    @property
    def theta_max(self):
        return math.radians(self.theta_max_deg)

    def species(self):
        return AtomSpecies(self.mass_kg, self.wavelength_m)

    def model(self, temperature=None, *, motion_radius=None):
        """ExperimentModel at a temperature or a motion radius (not both)."""
        if (temperature is None) == (motion_radius is None):
            raise ValueError("give exactly one of temperature and motion_radius")
        species = self.species()
        pump = PumpPulse(self.waist_m, self.tau_s)
        cell = CloudGeometry(self.lx_m, self.ly_m, self.lz_m)
        if motion_radius is None:
            motion = ThermalMotion.from_temperature(species, temperature, self.tau_s)
        else:
            motion = ThermalMotion.from_radius(species, motion_radius, self.tau_s)
        return ExperimentModel(species, cell, pump, motion)

    def temperature_grid(self):
        return np.geomspace(self.t_min_K, self.t_max_K, self.n_points)


# (section, key) -> field name
_KEYS = {
    ("species", "mass_kg"): "mass_kg",
    ("species", "wavelength_m"): "wavelength_m",
    ("cell", "lx_m"): "lx_m",
    ("cell", "ly_m"): "ly_m",
    ("cell", "lz_m"): "lz_m",
    ("pump", "waist_m"): "waist_m",
    ("pump", "tau_s"): "tau_s",
    ("scan", "phi_deg"): "phi_deg",
    ("scan", "theta_max_deg"): "theta_max_deg",
    ("scan", "points"): "points",
    ("quadrature", "nodes_per_axis"): "nodes_per_axis",
    ("thermometry", "t_min_K"): "t_min_K",
    ("thermometry", "t_max_K"): "t_max_K",
    ("thermometry", "n_points"): "n_points",
    ("thermometry", "rel_tol"): "rel_tol",
}
_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def _convert(field, text, lineno):
    try:
        if _TYPES[field] == "int":
            return int(text)
        return float(text)
    except ValueError:
        raise ConfigParseError(lineno, f"cannot read {text!r} as {_TYPES[field]}") from None


def parse_config(text):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigParseError(lineno, "expected 'section.key = value'")
        section, dot, name = key.strip().partition(".")
        if not dot:
            raise ConfigParseError(lineno, f"key {key.strip()!r} has no section")
        field = _KEYS.get((section.strip(), name.strip()))
        if field is None:
            raise ConfigParseError(lineno, f"unknown key {key.strip()!r}")
        if field in values:
            raise ConfigParseError(lineno, f"duplicate key {key.strip()!r}")
        value = value.strip()
        if not value:
            raise ConfigParseError(lineno, f"missing value for {key.strip()!r}")
        values[field] = _convert(field, value, lineno)
    return RunConfig(**values)


def load_config(path):
    with open(path) as fh:
        return parse_config(fh.read())
