import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stokes_thermo.emission import measure_fwhm
from stokes_thermo.errors import (
    BracketInvalid,
    FingerprintMismatch,
    FlatRegime,
    FormatError,
    NonMonotoneCurve,
    OutOfCalibrationRange,
)
from stokes_thermo.model import ExperimentModel
from stokes_thermo.thermometry import (
    CalibrationCurve,
    FlatRegimeWarning,
    bracket_for,
    calibrate,
    deg_text_to_rad,
    invert_temperature,
    load_curve,
    rad_to_deg_text,
    refine_temperature,
    save_curve,
)

from .conftest import FAST

TEMPS = tuple(np.geomspace(1e-3, 300, 10))
WIDTHS = tuple(0.05 / (1 + np.sqrt(np.array(TEMPS))))  # any strictly decreasing sequence


def synthetic():
    return CalibrationCurve(10e-6, "ab" * 32, TEMPS, WIDTHS)


@pytest.fixture(scope="module")
def model():
    return ExperimentModel.build(1.0, tau=10e-6)


@pytest.fixture(scope="module")
def small_curve(model):
    return calibrate(model, t_grid=np.geomspace(1e-2, 300, 8), **FAST)


def test_curve_needs_eight_points():
    with pytest.raises(ValueError):
        CalibrationCurve(1e-5, "x", TEMPS[:7], WIDTHS[:7])


def test_curve_rejects_non_monotone_widths():
    w = list(WIDTHS)
    w[4], w[5] = w[5], w[4]
    with pytest.raises(NonMonotoneCurve) as info:
        CalibrationCurve(1e-5, "x", TEMPS, w)
    assert info.value.indices == [5]


def test_curve_rejects_unsorted_temperatures():
    t = list(TEMPS)
    t[2] = t[1]
    with pytest.raises(NonMonotoneCurve):
        CalibrationCurve(1e-5, "x", t, WIDTHS)


def test_invert_at_knots_is_exact():
    c = synthetic()
    for t, f in c.points:
        assert invert_temperature(c, f) == t


def test_invert_out_of_range():
    c = synthetic()
    with pytest.raises(OutOfCalibrationRange):
        invert_temperature(c, WIDTHS[0] * 1.001)
    with pytest.raises(OutOfCalibrationRange) as info:
        invert_temperature(c, WIDTHS[-1] * 0.999)
    assert (info.value.lo, info.value.hi) == (WIDTHS[-1], WIDTHS[0])


@given(st.floats(0, 1), st.floats(0, 1))
def test_invert_is_monotone_and_in_span(u, v):
    c = synthetic()
    lo, hi = c.fwhm_range
    f1, f2 = sorted((lo + u * (hi - lo), lo + v * (hi - lo)))
    t1, t2 = invert_temperature(c, f1), invert_temperature(c, f2)
    assert TEMPS[0] <= t2 <= t1 <= TEMPS[-1]


def test_invert_with_hot_asymptote():
    c = synthetic()
    f = 0.5 * (WIDTHS[3] + WIDTHS[4])
    t = invert_temperature(c, f, hot_fwhm=0.5 * WIDTHS[-1])
    assert TEMPS[3] < t < TEMPS[4]
    with pytest.raises(ValueError):
        invert_temperature(c, f, hot_fwhm=WIDTHS[-1])


def test_bracket_for():
    c = synthetic()
    assert bracket_for(c, 0.5 * (WIDTHS[2] + WIDTHS[3])) == (TEMPS[2], TEMPS[3])
    assert bracket_for(c, WIDTHS[5]) == (TEMPS[4], TEMPS[6])


@given(st.floats(1e-300, 1e300))
def test_degree_text_roundtrip(x):
    assert deg_text_to_rad(rad_to_deg_text(x)) == x


def test_save_load_roundtrip(tmp_path):
    c = synthetic()
    save_curve(c, tmp_path / "c.csv")
    assert load_curve(tmp_path / "c.csv") == c
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[2] == "# schema=stokes-thermo-cal-v1"
    assert lines[3] == "temperature_K,fwhm_deg"


def _write_and_edit(tmp_path, edit):
    save_curve(synthetic(), tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    (tmp_path / "c.csv").write_text("\n".join(edit(lines)) + "\n")
    return tmp_path / "c.csv"


def test_tampered_rows_fail_validation(tmp_path):
    def swap(lines):
        lines[6], lines[7] = lines[7], lines[6]
        return lines

    with pytest.raises(NonMonotoneCurve):
        load_curve(_write_and_edit(tmp_path, swap))


@pytest.mark.parametrize(
    "edit",
    [
        lambda ls: ls[:3] + ls[4:],  # column header gone
        lambda ls: ls[1:],  # fingerprint gone
        lambda ls: [l.replace("cal-v1", "cal-v2") for l in ls],
        lambda ls: ls[:5] + ["0.5,abc"] + ls[6:],
        lambda ls: ls[:5] + ["0.5,1,2"] + ls[6:],
        lambda ls: ls + ["# trailing"],
    ],
)
def test_malformed_files(tmp_path, edit):
    with pytest.raises(FormatError):
        load_curve(_write_and_edit(tmp_path, edit))


def test_fingerprint_cross_check(tmp_path, model, small_curve):
    save_curve(small_curve, tmp_path / "c.csv")
    assert load_curve(tmp_path / "c.csv", model.with_temperature(42.0)) == small_curve
    with pytest.raises(FingerprintMismatch):
        load_curve(tmp_path / "c.csv", model.with_tau(30e-6))


def test_calibration_is_monotone_and_deterministic(model, small_curve):
    assert len(small_curve.points) == 8
    assert small_curve.model_fingerprint == model.fingerprint()
    again = calibrate(model, t_grid=np.geomspace(1e-2, 300, 8), **FAST)
    assert again == small_curve


def test_explicit_grid_in_flat_regime(model):
    grid = [1e-4, 1e-3, 1e-2, 1e-1, 1, 10, 100, 300]
    with pytest.raises(FlatRegime) as info:
        calibrate(model, 10e-9, grid, **FAST)
    assert info.value.temperature == 1e-4


def test_trimming_warns(model):
    grid = np.geomspace(0.1, 3e4, 12)
    with pytest.warns(FlatRegimeWarning):
        curve = calibrate(model, 10e-9, grid, trim_flat=True, **FAST)
    assert curve.temperatures[0] > 0.1
    assert len(curve.points) >= 8


def test_longer_pulse_reads_colder(model):
    grid = np.geomspace(1e-3, 300, 8)
    c10 = calibrate(model, 10e-6, grid, **FAST)
    c100 = calibrate(model, 100e-6, grid, **FAST)
    lo = max(c10.fwhm_range[0], c100.fwhm_range[0])
    hi = min(c10.fwhm_range[1], c100.fwhm_range[1])
    for f in np.geomspace(lo, hi, 6)[1:-1]:
        assert invert_temperature(c100, f) < invert_temperature(c10, f)


@pytest.mark.parametrize("T", [1e-2, 3.0])
def test_tau_scaling_collapse(model, T):
    a = measure_fwhm(model.with_tau(10e-6).with_temperature(T))
    b = measure_fwhm(model.with_tau(30e-6).with_temperature(T * (10 / 30) ** 2))
    assert a == pytest.approx(b, rel=1e-6)


def test_refine_recovers_forward_temperature(model):
    target = measure_fwhm(model.with_temperature(1.0), **FAST)
    t = refine_temperature(model, 10e-6, target, (0.3, 4.0), **FAST)
    assert abs(t - 1.0) <= 1e-3


def test_refine_nested_tolerance(model):
    target = measure_fwhm(model.with_temperature(0.2), **FAST)
    coarse = refine_temperature(model, 10e-6, target, (0.05, 1.0), 1e-3, **FAST)
    fine = refine_temperature(model, 10e-6, target, (0.05, 1.0), 1e-6, **FAST)
    assert coarse == pytest.approx(fine, rel=1e-3)
    assert fine == pytest.approx(0.2, rel=1e-6)


@pytest.mark.parametrize("bracket", [(1.0, 1.0), (2.0, 1.0), (0.0, 1.0), (2.0, 5.0)])
def test_refine_invalid_bracket(model, bracket):
    target = measure_fwhm(model.with_temperature(1.0), **FAST)
    with pytest.raises(BracketInvalid):
        refine_temperature(model, 10e-6, target, bracket, **FAST)


def test_refine_counts_flat_regime_as_widest(model):
    # at 10 ns the cold end of this bracket has no finite cone
    target = measure_fwhm(model.with_tau(10e-9).with_temperature(100.0), **FAST)
    t = refine_temperature(model, 10e-9, target, (1e-4, 1e3), 1e-3, **FAST)
    assert t == pytest.approx(100.0, rel=1e-3)
