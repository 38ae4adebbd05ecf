"""Complex Gamma-family functions and Chebyshev polynomials of all four kinds.

Everything here is vectorized over numpy arrays and returns arrays (or numpy
scalars for scalar input).  Gamma uses the Lanczos approximation with g = 7 and
nine coefficients; the left half-plane is reached by reflection.
"""

import math

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "sinpi",
    "cospi",
    "complex_gamma",
    "reciprocal_gamma",
    "reciprocal_gamma_derivative",
    "complex_digamma",
    "chebyshev",
    "chebyshev_angle",
]

_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)

# B_2k / (2k) for k = 1..8
_DIGAMMA_ASYMPTOTIC = np.array([
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
])
_DIGAMMA_SHIFT = 12.0

_CHEB_CLAMP = 1e-12
_CHEB_SERIES = 1e-6


def _real_sinpi_cospi(x):
    x = np.asarray(x, dtype=float)
    n = np.round(2.0 * x)
    f = x - 0.5 * n
    q = np.mod(n, 4.0)
    s, c = np.sin(np.pi * f), np.cos(np.pi * f)
    sin_out = np.select([q == 0, q == 1, q == 2], [s, c, -s], default=-c)
    cos_out = np.select([q == 0, q == 1, q == 2], [c, -s, -c], default=s)
    return sin_out, cos_out


def sinpi(z):
    """sin(pi z), exact zero at integers (real part reduced before scaling)."""
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        return _real_sinpi_cospi(z)[0]
    s, c = _real_sinpi_cospi(z.real)
    y = np.pi * z.imag
    return s * np.cosh(y) + 1j * c * np.sinh(y)


def cospi(z):
    """cos(pi z), exact zero at half-integers."""
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        return _real_sinpi_cospi(z)[1]
    s, c = _real_sinpi_cospi(z.real)
    y = np.pi * z.imag
    return c * np.cosh(y) - 1j * s * np.sinh(y)


def _lanczos_log_gamma(z):
    # valid for re(z) >= 0.5
    zm = z - 1.0
    x = np.full_like(zm, _LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        x = x + _LANCZOS_COEF[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(x)


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _is_pole(z):
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def complex_gamma(z):
    """Gamma function for complex arguments.

    Raises
    ------
    PoleError
        If any element of `z` is a non-positive integer.
    """
    z = _as_complex(z)
    if np.any(_is_pole(z)):
        raise PoleError("Gamma has a pole at non-positive integers")
    left = z.real < 0.5
    out = np.empty_like(z)
    right = ~left
    out[right] = np.exp(_lanczos_log_gamma(z[right]))
    if np.any(left):
        zl = z[left]
        out[left] = np.pi / (sinpi(zl) * np.exp(_lanczos_log_gamma(1.0 - zl)))
    return out[()]


def reciprocal_gamma(z):
    """1/Gamma(z); entire, exactly zero at the non-positive integers."""
    z = _as_complex(z)
    left = z.real < 0.5
    out = np.empty_like(z)
    right = ~left
    out[right] = np.exp(-_lanczos_log_gamma(z[right]))
    if np.any(left):
        zl = z[left]
        out[left] = sinpi(zl) * np.exp(_lanczos_log_gamma(1.0 - zl)) / np.pi
    return out[()]


def reciprocal_gamma_derivative(z):
    """d/dz of 1/Gamma(z).

    Equals -psi(z)/Gamma(z) away from poles and (-1)^k k! at z = -k.
    """
    z = _as_complex(z)
    pole = _is_pole(z)
    out = np.empty_like(z)
    if np.any(pole):
        k = -z.real[pole]
        fact = np.array([math.factorial(int(kk)) for kk in k], dtype=float)
        out[pole] = np.where(np.mod(k, 2) == 0, 1.0, -1.0) * fact
    reg = ~pole
    if np.any(reg):
        zr = z[reg]
        out[reg] = -complex_digamma(zr) * reciprocal_gamma(zr)
    return out[()]


def complex_digamma(z):
    """Digamma psi(z) = Gamma'(z)/Gamma(z) for complex arguments.

    Reflection below re(z) = 0.5, upward recurrence to re(z) >= 12, then the
    Stirling-type asymptotic series.
    """
    z_in = _as_complex(z)
    if np.any(_is_pole(z_in)):
        raise PoleError("digamma has a pole at non-positive integers")
    z = np.atleast_1d(z_in)
    left = z.real < 0.5
    w = np.where(left, 1.0 - z, z)
    acc = np.zeros_like(w)
    shift = np.maximum(np.ceil(_DIGAMMA_SHIFT - w.real), 0.0)
    for k in range(int(shift.max()) if shift.size else 0):
        active = shift > k
        acc = acc - np.where(active, 1.0 / (w + k), 0.0)
    w = w + shift
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    for c in _DIGAMMA_ASYMPTOTIC[::-1]:
        series = (series + c) * inv2
    psi = np.log(w) - 0.5 / w - series + acc
    if np.any(left):
        zl = z[left]
        psi[left] = psi[left] - np.pi * cospi(zl) / sinpi(zl)
    return psi.reshape(z_in.shape)[()]


def _sin_ratio(m, x):
    # sin(m x)/sin(x) with the removable singularity at x = 0 handled by series
    small = np.abs(x) < _CHEB_SERIES
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.sin(m * x) / np.sin(x)
    series = m * (1.0 - (m * m - 1.0) * x * x / 6.0)
    return np.where(small, series, direct)


def chebyshev_angle(kind, n, theta):
    """Chebyshev polynomial of the given kind evaluated at x = cos(theta).

    Parameters
    ----------
    kind : {"first", "second", "third", "fourth"}
        T, U, V or W.
    n : int
        Degree, n >= 0.
    theta : array_like
        Angle in [0, pi].
    """
    n = int(n)
    if n < 0:
        raise DomainError("Chebyshev degree must be non-negative")
    theta = np.asarray(theta, dtype=float)
    # distance to pi, for the singular points at theta = pi
    eps = np.pi - theta
    sign = -1.0 if n % 2 else 1.0
    if kind == "first":
        return np.cos(n * theta)
    if kind == "second":
        near_pi = theta > 0.5 * np.pi
        return np.where(near_pi, sign * _sin_ratio(n + 1, eps), _sin_ratio(n + 1, theta))
    if kind == "third":
        # V_n(cos t) = cos((n+1/2) t)/cos(t/2) = (-1)^n sin((2n+1) e/2)/sin(e/2), e = pi - t
        near_pi = theta > 0.5 * np.pi
        with np.errstate(invalid="ignore", divide="ignore"):
            direct = np.cos((n + 0.5) * theta) / np.cos(0.5 * theta)
        return np.where(near_pi, sign * _sin_ratio(2 * n + 1, 0.5 * eps), direct)
    if kind == "fourth":
        near_zero = theta < 0.5 * np.pi
        with np.errstate(invalid="ignore", divide="ignore"):
            # W_n(cos t) = (-1)^n cos((2n+1) e/2)/cos(e/2)
            far = sign * np.cos((n + 0.5) * eps) / np.cos(0.5 * eps)
        return np.where(near_zero, _sin_ratio(2 * n + 1, 0.5 * theta), far)
    raise ValueError(f"unknown Chebyshev kind {kind!r}")


def chebyshev(kind, n, x):
    """Chebyshev polynomial T_n, U_n, V_n or W_n at real x in [-1, 1].

    Evaluated trigonometrically through theta = arccos(x).  Arguments within
    1e-12 outside [-1, 1] are clamped; anything further out raises DomainError.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _CHEB_CLAMP):
        raise DomainError("Chebyshev argument outside [-1, 1]")
    theta = np.arccos(np.clip(x, -1.0, 1.0))
    return chebyshev_angle(kind, n, theta)
