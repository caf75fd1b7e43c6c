import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stokes_thermo.collective import (
    WeightProfile,
    symmetric_weight,
    weight_and_emission_profile,
    weight_scan,
)
from stokes_thermo.emission import angular_scan, fwhm
from stokes_thermo.model import ExperimentModel, StokesDirection

THETAS = np.linspace(0.0, math.radians(20.0), 2001)


@pytest.fixture(scope="module")
def base():
    return ExperimentModel.build(1e-3, tau=10e-6)


def frozen_forward_weight(model):
    # A -> 0, theta = 0: S(r) = u(r), so W = prod (int u)^2 / (L int u^2)
    w = model.pump.waist_r0
    out = 1.0
    for length in (model.cell.lx, model.cell.ly):
        h = 0.5 * length
        s1 = w * math.sqrt(math.pi) * math.erf(h / w)
        s2 = w * math.sqrt(math.pi / 2) * math.erf(math.sqrt(2) * h / w)
        out *= s1 * s1 / (length * s2)
    return out


def test_frozen_forward_weight(base):
    m = base.with_tau(10e-9).with_temperature(1e-9)
    assert m.radius < 1e-11
    # wall layers of width A shift W by O(A/L) ~ 1e-9
    assert symmetric_weight(m, StokesDirection(0.0)) == pytest.approx(frozen_forward_weight(m), rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(-8, 1), st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True))
def test_weight_in_unit_interval(log_a, theta, phi):
    m = ExperimentModel.build(1e-3, tau=10e-6).with_motion_radius(10.0**log_a)
    assert 0.0 <= symmetric_weight(m, StokesDirection(theta, phi)) <= 1.0


def test_hot_saturation_where_light_is_emitted(base):
    # the weight only dips where |F|^2, hence the emission, nearly vanishes
    m = base.with_motion_radius(10 * base.cell.lz)
    w, p = weight_and_emission_profile(m, THETAS)
    bright = p / p.max() >= 1e-4
    assert bright.sum() > 20
    assert 1.0 - w[bright].min() <= 1e-4


def test_warm_cloud_symmetric_within_cone(base):
    # A = 100 mm: every direction inside the emission FWHM heralds the symmetric state
    profile = weight_scan(base.with_motion_radius(0.1))
    inside = profile.thetas <= profile.fwhm_marker
    assert inside.sum() > 2
    assert profile.weights[inside].min() >= 0.99


def test_cold_cloud_symmetric_only_near_axis(base):
    # A = 1 um: the weight collapses well inside the emission cone
    profile = weight_scan(base.with_motion_radius(1e-6))
    half = 0.5 * profile.fwhm_marker
    assert profile.weights[0] > 0.98
    assert profile.weights[profile.thetas <= half].min() < 1e-3


def test_marker_is_emission_fwhm_on_same_grid(base):
    m = base.with_motion_radius(1e-3)
    profile = weight_scan(m, n_points=801)
    assert profile.fwhm_marker == fwhm(angular_scan(m, n_points=801))


def test_marker_absent_for_flat_emission():
    m = ExperimentModel.build(100e-6, tau=10e-9)
    assert weight_scan(m, theta_max=math.radians(5), n_points=51).fwhm_marker is None


def test_weight_symmetry_in_phi(base):
    m = base.with_motion_radius(1e-4)
    a = symmetric_weight(m, StokesDirection(0.002, 0.4))
    b = symmetric_weight(m, StokesDirection(0.002, math.pi / 2 - 0.4))
    assert a == pytest.approx(b, rel=1e-12)


def test_profile_validation_and_csv(tmp_path):
    with pytest.raises(ValueError):
        WeightProfile(np.array([0.0, 0.1]), np.array([1.0, 1.5]))
    p = WeightProfile(np.array([0.0, 0.1]), np.array([0.5, 0.25]))
    p.to_csv(tmp_path / "w.csv")
    assert (tmp_path / "w.csv").read_text().splitlines()[0] == "theta_deg,symmetric_weight"
