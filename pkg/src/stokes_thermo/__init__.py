"""Angular distribution of Stokes photons from a thermal atomic ensemble,
and thermometry from the width of the emission cone."""

from .cerf import erf_complex, faddeeva, pair_erf_diff
from .collective import WeightProfile, symmetric_weight, weight_scan
from .config import RunConfig, parse_config
from .emission import (
    AngularDistribution,
    angular_scan,
    cold_limit_distribution,
    emission_probability,
    fwhm,
    hot_limit_distribution,
    measure_fwhm,
)
from .errors import *  # noqa: F401,F403
from .model import (
    RB87,
    AtomSpecies,
    CloudGeometry,
    ExperimentModel,
    PumpPulse,
    StokesDirection,
    ThermalMotion,
    amplitude,
    delta_k,
    motion_radius,
    windowed_gaussian_fourier,
)
from .thermometry import (
    CalibrationCurve,
    calibrate,
    invert_temperature,
    load_curve,
    refine_temperature,
    save_curve,
)

__version__ = "0.1.0"
