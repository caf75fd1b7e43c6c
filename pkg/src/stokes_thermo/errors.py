"""Exception hierarchy shared across the package."""


class StokesThermoError(Exception):
    """Base class for all package errors."""


class OverflowUnrepresentable(StokesThermoError, ArithmeticError):
    """A result magnitude exceeds the double-precision range."""


class QuadratureNonConvergence(StokesThermoError, ArithmeticError):
    """Adaptive quadrature hit its refinement limit."""


class NegativeTemperature(StokesThermoError, ValueError):
    pass


class NoHalfCrossing(StokesThermoError):
    """The scanned distribution never drops to half its peak."""

    def __init__(self, theta_max, min_value):
        self.theta_max = theta_max
        self.min_value = min_value
        super().__init__(
            f"no half-maximum crossing up to theta={theta_max:.6g} rad "
            f"(min normalized value {min_value:.6g})"
        )


class FlatRegime(StokesThermoError):
    """A calibration temperature is too cold to produce a finite emission cone."""

    def __init__(self, temperature, tau):
        self.temperature = temperature
        self.tau = tau
        super().__init__(
            f"flat emission (no finite FWHM) at T={temperature!r} K, tau={tau!r} s; "
            "use a longer pulse or a warmer grid"
        )


class NonMonotoneCurve(StokesThermoError, ValueError):
    def __init__(self, indices, message="calibration FWHM is not strictly decreasing"):
        self.indices = list(indices)
        super().__init__(f"{message} at indices {self.indices}")


class OutOfCalibrationRange(StokesThermoError, ValueError):
    def __init__(self, value, lo, hi):
        self.value, self.lo, self.hi = value, lo, hi
        super().__init__(f"FWHM {value!r} rad outside calibrated range [{lo!r}, {hi!r}] rad")


class BracketInvalid(StokesThermoError, ValueError):
    pass


class FormatError(StokesThermoError, ValueError):
    pass


class FingerprintMismatch(StokesThermoError, ValueError):
    pass


class ConfigParseError(StokesThermoError, ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class ConfigValidationError(StokesThermoError, ValueError):
    pass
