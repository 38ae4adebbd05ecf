"""Exact single-pulse propagator for the hyperbolic-secant (Rosen-Zener) drive.

The pulse envelope is Omega(t) = Omega0 * sech(t / tau) at constant detuning
Delta = omega - omega0.  The interaction-frame propagator over the whole pulse
is an SU(2) matrix

    U = [[a, -conj(b)],
         [b,  conj(a)]]

whose Cayley-Klein parameters (a, b) have closed forms in Gamma functions of
lambda = tau*Omega0/2 and nu = (1 - i*tau*Delta)/2.  All classes accept numpy
arrays in their numeric fields and broadcast them.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import NumericalError
from .special import (
    complex_digamma,
    complex_gamma,
    reciprocal_gamma,
    reciprocal_gamma_derivative,
    sinpi,
)

__all__ = [
    "PulseParams",
    "Su2Propagator",
    "RosenZenerParams",
    "rosen_zener_params",
    "cayley_klein",
    "transition_probabilities",
    "propagator_detuning_derivative",
    "finite_difference_detuning_derivative",
]

UNITARITY_TOL = 1e-8


@dataclass(frozen=True)
class PulseParams:
    """Physical parameters of one sech pulse.

    Attributes
    ----------
    amplitude : float or ndarray
        Peak Rabi frequency Omega0 (rad / time), >= 0.
    width : float or ndarray
        Characteristic time tau, > 0.
    drive : float or ndarray
        Drive angular frequency omega.
    resonance : float or ndarray
        Atomic resonance omega0.
    carrier_phase : float or ndarray
        Drive-phase offset phi; enters as conjugation by exp(i phi sigma_z / 2).
    """

    amplitude: object = 1.0
    width: object = 1.0
    drive: object = 0.0
    resonance: object = 0.0
    carrier_phase: object = 0.0

    def __post_init__(self):
        if np.any(np.asarray(self.width) <= 0):
            raise ValueError("pulse width must be positive")
        if np.any(np.asarray(self.amplitude) < 0):
            raise ValueError("pulse amplitude must be non-negative")

    @property
    def detuning(self):
        return np.subtract(self.drive, self.resonance)

    @property
    def area(self):
        """Dimensionless tau*Omega0; 1 is a pi-pulse."""
        return np.multiply(self.width, self.amplitude)

    @classmethod
    def from_dimensionless(cls, area, tau_detuning, width=1.0, resonance=0.0, carrier_phase=0.0):
        """Build from tau*Omega0 and tau*Delta."""
        width = np.asarray(width, dtype=float)
        return cls(
            amplitude=np.divide(area, width),
            width=width[()],
            drive=np.add(resonance, np.divide(tau_detuning, width)),
            resonance=resonance,
            carrier_phase=carrier_phase,
        )

    def with_detuning(self, detuning):
        return replace(self, drive=np.add(self.resonance, detuning))


@dataclass(frozen=True)
class Su2Propagator:
    """Unitary 2x2 propagator stored as its first column (a, b)."""

    a: object
    b: object

    def matrix(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        a, b = np.broadcast_arrays(a, b)
        m = np.empty(a.shape + (2, 2), dtype=complex)
        m[..., 0, 0] = a
        m[..., 0, 1] = -np.conj(b)
        m[..., 1, 0] = b
        m[..., 1, 1] = np.conj(a)
        return m

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m)
        return cls(m[..., 0, 0][()], m[..., 1, 0][()])

    def unitarity_defect(self):
        return np.abs(np.abs(self.a) ** 2 + np.abs(self.b) ** 2 - 1.0)

    def __matmul__(self, other):
        # (self @ other) in Cayley-Klein form
        a = self.a * other.a - np.conj(self.b) * other.b
        b = self.b * other.a + np.conj(self.a) * other.b
        return Su2Propagator(a, b)

    def conjugate_phase(self, phi):
        """exp(i phi sz/2) U exp(-i phi sz/2)."""
        return Su2Propagator(self.a, self.b * np.exp(-1j * np.asarray(phi)))

    @property
    def probabilities(self):
        """(P0, P1) = (|a|^2, |b|^2) for a ground-state input."""
        return np.abs(self.a) ** 2, np.abs(self.b) ** 2


@dataclass(frozen=True)
class RosenZenerParams:
    lam: object
    mu: object
    nu: object


def rosen_zener_params(p):
    """lambda = tau*Omega0/2, mu = -lambda, nu = (1 - i*tau*Delta)/2."""
    lam = np.asarray(p.area, dtype=float) / 2.0
    nu = 0.5 - 0.5j * np.asarray(np.multiply(p.width, p.detuning), dtype=float)
    return RosenZenerParams(lam=lam, mu=-lam, nu=nu)


def _gamma_factors(rz):
    lam, mu, nu = np.broadcast_arrays(rz.lam, rz.mu, rz.nu)
    nu = nu.astype(complex)
    lam = lam.astype(float)
    mu = mu.astype(float)
    return lam, mu, nu


def cayley_klein(p, check=True):
    """Exact propagator of a single sech pulse.

    The Gamma functions in denominators enter as reciprocal Gamma, so that
    resonance with odd pulse area (a Gamma pole) gives a = 0 exactly.

    Parameters
    ----------
    p : PulseParams
    check : bool
        Raise NumericalError when |a|^2 + |b|^2 deviates from 1 by more than 1e-8.
    """
    lam, mu, nu = _gamma_factors(rosen_zener_params(p))
    g_nu = complex_gamma(nu)
    g_sum = complex_gamma(nu - lam - mu)
    a = g_nu * g_sum * reciprocal_gamma(nu - lam) * reciprocal_gamma(nu - mu)
    # sqrt(-lambda mu) = lambda; the (1 - nu) denominator keeps b real for phi = 0
    prefactor = np.sqrt(-lam * mu) / (1.0 - nu)
    b = (prefactor * complex_gamma(2.0 - nu) * g_sum
         * reciprocal_gamma(1.0 - lam) * reciprocal_gamma(1.0 - mu))
    u = Su2Propagator(a[()], b[()])
    if np.any(np.asarray(p.carrier_phase) != 0):
        u = u.conjugate_phase(p.carrier_phase)
    if check:
        defect = np.max(u.unitarity_defect(), initial=0.0)
        if not defect <= UNITARITY_TOL:
            raise NumericalError(f"unitarity defect {defect:.3g} in closed-form propagator")
    return u


def transition_probabilities(p):
    """Ground and excited populations after one pulse, from the sech^2 sin^2 closed form.

    Returns
    -------
    (P0, P1) : tuple of ndarray
    """
    x = 0.5 * np.pi * np.asarray(np.multiply(p.width, p.detuning), dtype=float)
    with np.errstate(over="ignore"):
        sech2 = 1.0 / np.cosh(x) ** 2
    p1 = sech2 * sinpi(0.5 * np.asarray(p.area, dtype=float)) ** 2
    return 1.0 - p1, p1


def propagator_detuning_derivative(p, check=True):
    """Analytic d/dDelta of the Cayley-Klein parameters.

    Derivatives of the Gamma ratios bring down digamma terms through
    d nu / d Delta = -i tau / 2.  Denominator factors are differentiated as
    reciprocal Gamma, which keeps the resonance poles regular.

    Parameters
    ----------
    p : PulseParams
    check : bool
        Cross-check against the Richardson finite-difference path and raise
        NumericalError on disagreement above 1e-5 relative.

    Returns
    -------
    (da, db) : tuple of complex ndarray
    """
    lam, mu, nu = _gamma_factors(rosen_zener_params(p))
    tau = np.broadcast_to(np.asarray(p.width, dtype=float), nu.shape)
    dnu = -0.5j * tau

    g_nu = complex_gamma(nu)
    g_sum = complex_gamma(nu - lam - mu)
    psi_nu = complex_digamma(nu)
    psi_sum = complex_digamma(nu - lam - mu)
    r1, r2 = reciprocal_gamma(nu - lam), reciprocal_gamma(nu - mu)
    dr1, dr2 = reciprocal_gamma_derivative(nu - lam), reciprocal_gamma_derivative(nu - mu)
    num = g_nu * g_sum
    da_dnu = num * ((psi_nu + psi_sum) * r1 * r2 + dr1 * r2 + r1 * dr2)

    one_minus = 1.0 - nu
    root = np.sqrt(-lam * mu)
    g_two = complex_gamma(2.0 - nu)
    rr = reciprocal_gamma(1.0 - lam) * reciprocal_gamma(1.0 - mu)
    b = root / one_minus * g_two * g_sum * rr
    # d/dnu [1/(1-nu)] = 1/(1-nu)^2 ; d/dnu Gamma(2-nu) = -psi(2-nu) Gamma(2-nu)
    db_dnu = b * (1.0 / one_minus - complex_digamma(2.0 - nu) + psi_sum)

    da = (da_dnu * dnu)[()]
    db = (db_dnu * dnu)[()]
    if np.any(np.asarray(p.carrier_phase) != 0):
        db = db * np.exp(-1j * np.asarray(p.carrier_phase))
    if check:
        fa, fb = finite_difference_detuning_derivative(p)
        for name, an, fd in (("a", da, fa), ("b", db, fb)):
            err = np.abs(an - fd)
            # the floor covers finite-difference roundoff where the derivative vanishes
            bound = 1e-5 * np.abs(an) + 1e-7 * tau
            if np.any(err > bound):
                raise NumericalError(
                    f"analytic and finite-difference d{name}/dDelta disagree "
                    f"(max error {np.max(err):.3g})"
                )
    return da, db


def finite_difference_detuning_derivative(p, step=None):
    """Central-difference d/dDelta of (a, b) with two-level Richardson extrapolation.

    The default step is h = 1e-5 / tau.
    """
    tau = np.asarray(p.width, dtype=float)
    h = 1e-5 / tau if step is None else np.asarray(step, dtype=float)

    def central(hh):
        up = cayley_klein(p.with_detuning(p.detuning + hh), check=False)
        dn = cayley_klein(p.with_detuning(p.detuning - hh), check=False)
        return (up.a - dn.a) / (2 * hh), (up.b - dn.b) / (2 * hh)

    d1, d2, d4 = central(h), central(h / 2), central(h / 4)
    out = []
    for k in range(2):
        r1 = (4 * d2[k] - d1[k]) / 3
        r2 = (4 * d4[k] - d2[k]) / 3
        out.append(((16 * r2 - r1) / 15)[()])
    return tuple(out)
