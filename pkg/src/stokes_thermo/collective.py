"""Weight of the symmetric collective state heralded by a Stokes detection.

Projecting the photon on |k> leaves the atoms in sum_i S(r_i, k) |..s_i..>.
Its normalized overlap with the symmetric state (1/sqrt N) sum_i |..s_i..>
is, after sum_i -> (N/V) int dV,

    W(k) = |int S dV|^2 / (V int |S|^2 dV),

in which N cancels.  W is a Cauchy-Schwarz ratio, hence in [0, 1], and
factorizes over the three axes like the emission probability does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .emission import (
    DEFAULT_NODES,
    DEFAULT_POINTS,
    DEFAULT_THETA_MAX,
    AngularDistribution,
    _axis_integrals,
    fwhm,
    write_csv,
)
from .errors import NoHalfCrossing
from .model import axis_factors, delta_k_components

# W may exceed 1 by rounding only
_CAUCHY_SCHWARZ_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class WeightProfile:
    thetas: np.ndarray
    weights: np.ndarray
    fwhm_marker: Optional[float] = None

    def __post_init__(self):
        t, w = np.asarray(self.thetas, float), np.asarray(self.weights, float)
        if t.shape != w.shape:
            raise ValueError("thetas and weights differ in length")
        if np.any(w < 0) or np.any(w > 1):
            raise ValueError("weights must lie in [0, 1]")
        object.__setattr__(self, "thetas", t)
        object.__setattr__(self, "weights", w)

    def to_csv(self, path):
        write_csv(path, ("theta_deg", "symmetric_weight"), np.degrees(self.thetas), self.weights)


def weight_and_emission_profile(model, thetas, phi=0.0, n_nodes=DEFAULT_NODES):
    """(W, P) along thetas; P is the unnormalized emission probability."""
    qs = delta_k_components(model.species.wavenumber, thetas, phi)
    weight = np.ones(np.shape(thetas))
    power = np.ones(np.shape(thetas))
    for q, (length, w) in zip(qs, axis_factors(model)):
        p, m = _axis_integrals(q, model.radius, w, length, n_nodes, with_mean=True)
        weight = weight * (m.real**2 + m.imag**2) / (length * p)
        power = power * p
    if np.any(weight > 1.0 + _CAUCHY_SCHWARZ_SLACK):
        raise ArithmeticError(f"symmetric weight {weight.max()!r} exceeds 1")
    return np.minimum(weight, 1.0), power


def symmetric_weight(model, direction, n_nodes=DEFAULT_NODES):
    w, _ = weight_and_emission_profile(model, np.array([direction.theta]), direction.phi, n_nodes)
    return float(w[0])


def weight_scan(model, phi=0.0, theta_max=DEFAULT_THETA_MAX, n_points=DEFAULT_POINTS,
                n_nodes=DEFAULT_NODES):
    """Symmetric weight on a uniform theta grid, with the emission FWHM marked.

    The marker comes from the emission distribution on the same grid and is
    None when that distribution has no half crossing within theta_max.
    """
    if not 0.0 < theta_max <= math.pi or n_points < 3:
        raise ValueError("invalid scan range")
    thetas = np.linspace(0.0, theta_max, n_points)
    weights, power = weight_and_emission_profile(model, thetas, phi, n_nodes)
    try:
        marker = fwhm(AngularDistribution(phi, thetas, power / power.max()))
    except (NoHalfCrossing, ValueError):
        marker = None
    return WeightProfile(thetas, weights, marker)
