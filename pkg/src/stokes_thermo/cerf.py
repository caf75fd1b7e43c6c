"""Complex error function kernels.

All functions accept scalars or numpy arrays (broadcast together) and return
a Python ``complex`` for scalar input, an ndarray otherwise.

The Faddeeva function w(z) = exp(-z**2) erfc(-iz) is evaluated with
``scipy.special.wofz``.  Everything else is built so that the only
exponentials ever formed are those of quantities whose magnitude is the
magnitude of the final answer, which keeps the Gaussian-times-erf products
of the emission amplitude finite in both the cold and the hot limit.
"""

import math

import numpy as np
from scipy.special import wofz

from .errors import OverflowUnrepresentable

# |z| below this goes through the Maclaurin series
_SERIES_RADIUS = 1.0
_N_SERIES = 26
# erf(z) = 2/sqrt(pi) * sum_n (-1)^n z^(2n+1) / (n! (2n+1))
_SERIES_COEFFS = np.array(
    [(-1) ** n * 2.0 / math.sqrt(math.pi) / (math.factorial(n) * (2 * n + 1))
     for n in range(_N_SERIES)]
)
# exp() of arguments above this real part overflows a double
_EXP_LIMIT = 709.0


def _as_complex(z):
    return np.asarray(z, dtype=np.complex128)


def _finish(out, scalar, what):
    if not np.all(np.isfinite(out)):
        raise OverflowUnrepresentable(f"{what} is not representable in double precision")
    return complex(out) if scalar else out


def _erf_series(z):
    z2 = z * z
    acc = np.full_like(z, _SERIES_COEFFS[-1])
    for c in _SERIES_COEFFS[-2::-1]:
        acc = acc * z2 + c
    return z * acc


def _exp_times(log_factor, w):
    """exp(log_factor) * w without overflowing in the exponential alone."""
    big = log_factor.real > _EXP_LIMIT
    if not np.any(big):
        return np.exp(log_factor) * w
    safe = np.where(big, 0.0, log_factor)
    out = np.exp(safe) * w
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        wl = np.log(np.where(w == 0, 1.0, w))
        alt = np.where(w == 0, 0.0, np.exp(log_factor + wl))
    return np.where(big, alt, out)


def faddeeva(z):
    """Faddeeva function w(z) = exp(-z**2) * erfc(-i z).

    The lower half-plane is obtained by scipy through the reflection
    w(z) = 2 exp(-z**2) - w(-z).  Values that overflow (deep in the lower
    half-plane) raise :class:`OverflowUnrepresentable`.
    """
    zz = _as_complex(z)
    return _finish(wofz(zz), zz.ndim == 0, "faddeeva(z)")


def erf_complex(z):
    """Error function of complex argument.

    Uses the Maclaurin series for |z| < 1 and erf(z) = 1 - exp(-z**2) w(iz)
    otherwise, always on the right half-plane so that w stays bounded;
    the left half-plane follows from odd symmetry.
    """
    zz = _as_complex(z)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    sign = np.where(zz.real < 0, -1.0, 1.0)
    zr = sign * zz
    out = np.empty_like(zr)

    small = np.abs(zr) < _SERIES_RADIUS
    if np.any(small):
        out[small] = _erf_series(zr[small])
    large = ~small
    with np.errstate(over="ignore", invalid="ignore"):
        if np.any(large):
            zl = zr[large]
            out[large] = 1.0 - _exp_times(-zl * zl, wofz(1j * zl))
        out = sign * out
    # real input stays exactly real
    out.imag[zz.imag == 0] = 0.0
    if scalar:
        out = out[0]
    return _finish(out, scalar, "erf(z)")


def _scaled_erf(z, log_prefactor, log_edge):
    """exp(log_prefactor) * erf(z) with ``log_edge = log_prefactor - z**2``."""
    out = np.empty(z.shape, dtype=np.complex128)
    small = np.abs(z) < _SERIES_RADIUS
    if np.any(small):
        out[small] = _exp_times(log_prefactor[small], _erf_series(z[small]))
    large = ~small
    if np.any(large):
        zl = z[large]
        s = np.where(zl.real < 0, -1.0, 1.0)
        # erf(z) = s - s * exp(-z^2) w(i s z) ; the constant s is handled by the caller
        out[large] = -s * _exp_times(log_edge[large], wofz(1j * s * zl))
    return out, small


def pair_erf_diff(a, b, log_prefactor=0.0, *, log_a=None, log_b=None):
    """Evaluate exp(log_prefactor) * (erf(a) - erf(b)) without intermediate overflow.

    ``log_a`` and ``log_b`` are ``log_prefactor - a**2`` and
    ``log_prefactor - b**2``.  Callers that know these in closed form should
    pass them: for large |a| the naive difference of two huge numbers loses
    all significant digits of the Gaussian edge factor.
    """
    arrays = [_as_complex(a), _as_complex(b), _as_complex(log_prefactor)]
    if log_a is not None:
        arrays.append(_as_complex(log_a))
    if log_b is not None:
        arrays.append(_as_complex(log_b))
    shape = np.broadcast_shapes(*(x.shape for x in arrays))
    scalar = len(shape) == 0
    a, b, lp = (np.broadcast_to(x, shape).ravel() for x in arrays[:3])
    la = lp - a * a if log_a is None else np.broadcast_to(_as_complex(log_a), shape).ravel()
    lb = lp - b * b if log_b is None else np.broadcast_to(_as_complex(log_b), shape).ravel()

    with np.errstate(over="ignore", invalid="ignore"):
        ta, small_a = _scaled_erf(a, lp, la)
        tb, small_b = _scaled_erf(b, lp, lb)
        # saturation constants of the w-route: exp(lp) * (s_a - s_b)
        sa = np.where(small_a, 0.0, np.where(a.real < 0, -1.0, 1.0))
        sb = np.where(small_b, 0.0, np.where(b.real < 0, -1.0, 1.0))
        ds = sa - sb
        const = np.zeros_like(ta)
        nz = ds != 0
        if np.any(nz):
            const[nz] = _exp_times(lp[nz], ds[nz].astype(np.complex128))
        out = const + ta - tb
    # identical endpoints are exactly zero whatever the prefactor
    out[a == b] = 0.0
    out = out.reshape(shape)
    if scalar:
        out = out[()]
    return _finish(out, scalar, "exp(p) * (erf(a) - erf(b))")
