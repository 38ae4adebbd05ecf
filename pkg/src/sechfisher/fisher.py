"""Fisher information, Cramer-Rao bounds and line-shape diagnostics.

Fisher information is reported with respect to the resonance omega0.  Since
Delta = omega - omega0, d/domega0 = -d/dDelta and the sign drops out of every
squared quantity, so all derivatives here are taken in Delta.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .composite import (
    SequenceSpec,
    phase_kind,
    sequence_derivative,
    sequence_propagator,
)
from .errors import (
    DomainError,
    NoCrossingError,
    NoMinimumError,
    NormalizationError,
    UnsupportedPhaseError,
)
from .special import cospi, sinpi

__all__ = [
    "FisherReport",
    "ProbabilityProfile",
    "classical_fisher_binary",
    "classical_fisher_single_closed",
    "quantum_fisher_pure",
    "fisher_on_resonance_composite",
    "sequence_fisher",
    "probability_profile",
    "fwhm",
    "curvature_on_resonance",
    "crb_variance",
    "ode_fisher",
    "fisher_report_at",
]

# amplitudes below these are treated as zeros of the population; the CFI is
# continuous there, so switching to its limit costs O(Delta^2) relative
_ZERO_AMPLITUDE = 1e-10
_ZERO_AMPLITUDE_ODE = 1e-6


@dataclass(frozen=True)
class FisherReport:
    """Classical and quantum Fisher information at one or more detunings."""

    detuning: object
    cfi: object
    qfi: object
    method_tag: str = "analytic_derivative"

    def crb_variance(self, repetitions=1):
        """Cramer-Rao variance bound 1/(M F) for M repetitions."""
        return crb_variance(self.cfi, repetitions)


@dataclass(frozen=True)
class ProbabilityProfile:
    """Ground-state population sampled on a drive-frequency grid."""

    omega: np.ndarray
    p0: np.ndarray
    generator: SequenceSpec

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        p0 = np.asarray(self.p0, dtype=float)
        if omega.ndim != 1 or omega.size < 3:
            raise ValueError("profile needs a 1-D grid of at least 3 points")
        if np.any(np.diff(omega) <= 0):
            raise ValueError("profile grid must be strictly increasing")
        if p0.shape != omega.shape:
            raise ValueError("p0 must match the grid")
        if np.any((p0 < -1e-12) | (p0 > 1 + 1e-12)):
            raise ValueError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "p0", p0)

    def model(self, omega):
        """Continuous P0 at drive frequency `omega`."""
        u = sequence_propagator(self.generator.at_drive(omega), "analytic")
        return np.abs(u.a) ** 2


def probability_profile(seq, omega, backend="analytic"):
    """Sample P0 over the drive grid `omega` for the train `seq`."""
    omega = np.asarray(omega, dtype=float)
    u = sequence_propagator(seq.at_drive(omega), backend)
    return ProbabilityProfile(omega, np.abs(u.a) ** 2, seq)


def classical_fisher_binary(p1, dp1, curvature=None):
    """Fisher information of a two-outcome measurement, (dP1)^2 / (P1 (1 - P1)).

    At P1 in {0, 1} with dP1 = 0 the ratio is 0/0; its limit along the
    parameter is 2 |c| with c the second derivative of P1 there, which must be
    supplied as `curvature`.

    Raises
    ------
    DomainError
        P1 outside [0, 1], an endpoint with nonzero slope, or an endpoint
        without curvature.
    """
    p1 = np.asarray(p1, dtype=float)
    dp1 = np.asarray(dp1, dtype=float)
    if np.any((p1 < 0) | (p1 > 1)):
        raise DomainError("probability outside [0, 1]")
    edge = (p1 == 0) | (p1 == 1)
    if np.any(edge & (dp1 != 0)):
        raise DomainError("nonzero slope at a probability endpoint: Fisher information diverges")
    if np.any(edge) and curvature is None:
        raise DomainError("endpoint probability needs the curvature to resolve the 0/0 limit")
    with np.errstate(divide="ignore", invalid="ignore"):
        inner = dp1**2 / (p1 * (1.0 - p1))
    if curvature is not None:
        inner = np.where(edge, 2.0 * np.abs(np.asarray(curvature, dtype=float)), inner)
    return inner[()]


def classical_fisher_single_closed(p):
    """Closed-form single-pulse Fisher information for omega0.

    F = pi^2 tau^2 sin^2(y) tanh^2(x) / (cos^2(y) + sinh^2(x)), with
    x = pi tau Delta / 2 and y = pi tau Omega0 / 2.  For odd pulse area
    (cos y = 0) this is pi^2 tau^2 sin^2(y) sech^2(x), which fixes the
    resonance limit pi^2 tau^2.
    """
    tau = np.asarray(p.width, dtype=float)
    half_area = 0.5 * np.asarray(p.area, dtype=float)
    x = 0.5 * np.pi * np.asarray(np.multiply(p.width, p.detuning), dtype=float)
    s2 = sinpi(half_area) ** 2
    c2 = cospi(half_area) ** 2
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        sech2 = 1.0 / np.cosh(x) ** 2
        generic = np.pi**2 * tau**2 * s2 * np.tanh(x) ** 2 / (c2 + np.sinh(x) ** 2)
    odd = c2 == 0
    out = np.where(odd, np.pi**2 * tau**2 * s2 * sech2, generic)
    out = np.where((~odd) & (x == 0), 0.0, out)
    return out[()]


def quantum_fisher_pure(state, dstate):
    """Pure-state quantum Fisher information 4(<dpsi|dpsi> - |<dpsi|psi>|^2).

    Parameters
    ----------
    state : (a, b)
        Normalized amplitudes.
    dstate : (da, db)
        Their parameter derivatives.
    """
    a, b = (np.asarray(v, dtype=complex) for v in state)
    da, db = (np.asarray(v, dtype=complex) for v in dstate)
    norm = np.abs(a) ** 2 + np.abs(b) ** 2
    if np.any(np.abs(norm - 1.0) > 1e-8):
        raise NormalizationError("state is not normalized")
    overlap = np.conj(a) * da + np.conj(b) * db
    q = 4.0 * (np.abs(da) ** 2 + np.abs(db) ** 2 - np.abs(overlap) ** 2)
    return np.maximum(q, 0.0)[()]


def _cfi_from_amplitudes(a, b, da, db, zero_tol=_ZERO_AMPLITUDE):
    # dP from the smaller amplitude keeps full relative precision near P = 0 or 1
    a, b, da, db = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, da, db)))
    p0, p1 = np.abs(a) ** 2, np.abs(b) ** 2
    use_a = np.abs(a) <= np.abs(b)
    small = np.where(use_a, a, b)
    dsmall = np.where(use_a, da, db)
    dp = 2.0 * np.real(np.conj(small) * dsmall)
    with np.errstate(divide="ignore", invalid="ignore"):
        generic = dp**2 / (p0 * p1)
    # at an exact zero of |small| the limit is 4 |d small|^2
    limit = 4.0 * np.abs(dsmall) ** 2
    return np.where(np.abs(small) < zero_tol, limit, generic)


def sequence_fisher(seq, method="analytic_derivative"):
    """CFI and QFI of the ground-state measurement after the train `seq`.

    `seq.base` may hold an array of drive frequencies; the report is then
    vectorized over detuning.

    Parameters
    ----------
    method : {"analytic_derivative", "finite_difference", "closed_form"}
        "closed_form" is available only for a single pulse (N = 0); its QFI
        still comes from the analytic derivative.
    """
    detuning = seq.base.detuning
    if method == "closed_form":
        if seq.n_half != 0:
            raise ValueError("closed-form Fisher information exists only for a single pulse")
        cfi = classical_fisher_single_closed(seq.base)
        u, da, db = sequence_derivative(seq, "analytic")
        qfi = quantum_fisher_pure((u.a, u.b), (da, db))
        return FisherReport(detuning, cfi, qfi, "closed_form")
    deriv = {"analytic_derivative": "analytic", "finite_difference": "finite_difference"}
    if method not in deriv:
        raise ValueError(f"unknown method {method!r}")
    u, da, db = sequence_derivative(seq, deriv[method])
    cfi = _cfi_from_amplitudes(u.a, u.b, da, db)
    qfi = quantum_fisher_pure((u.a, u.b), (da, db))
    return FisherReport(detuning, cfi[()], qfi, method)


def fisher_on_resonance_composite(n_half, phase, tau):
    """Resonance Fisher information: pi^2 tau^2 for phi = pi, pi^2 tau^2/(2N+1)^2 for phi = 0."""
    kind = phase_kind(phase)
    if kind is None:
        raise UnsupportedPhaseError("resonance constants are known only for phases 0 and pi")
    base = np.pi**2 * np.asarray(tau, dtype=float) ** 2
    if kind == 1:
        return base[()]
    return (base / (2 * int(n_half) + 1) ** 2)[()]


def crb_variance(cfi, repetitions=1):
    """Cramer-Rao lower bound 1/(M F) on the variance of an unbiased estimator."""
    cfi = np.asarray(cfi, dtype=float)
    if np.any(cfi <= 0):
        raise DomainError("Cramer-Rao bound undefined for zero Fisher information")
    if repetitions < 1:
        raise DomainError("need at least one repetition")
    return (1.0 / (repetitions * cfi))[()]


def _refine_minimum(profile, i):
    lo, hi = profile.omega[i - 1], profile.omega[i + 1]
    res = minimize_scalar(lambda w: float(profile.model(w)), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-13 * max(1.0, abs(hi - lo))})
    grid_val = float(profile.model(profile.omega[i]))
    if res.fun < grid_val:
        return res.x, res.fun
    return profile.omega[i], grid_val


def fwhm(profile):
    """Full width at half depth of the P0 dip around its minimum.

    The half-depth level is (1 + P0_min) / 2.  The grid only brackets the two
    crossings, which are then located on the continuous model by Brent's method.

    Raises
    ------
    NoMinimumError
        If the smallest sample sits on the grid edge.
    NoCrossingError
        If the profile does not rise to the half-depth level on either side.
    """
    i = int(np.argmin(profile.p0))
    if i == 0 or i == profile.omega.size - 1:
        raise NoMinimumError("minimum of the profile lies on the grid boundary")
    w_min, p_min = _refine_minimum(profile, i)
    level = 0.5 * (1.0 + p_min)

    def f(w):
        return float(profile.model(w)) - level

    vals = profile.p0 - level
    right = np.nonzero(vals[i + 1:] >= 0)[0]
    left = np.nonzero(vals[:i] >= 0)[0]
    if right.size == 0 or left.size == 0:
        raise NoCrossingError("scan range too narrow to reach the half-depth level")
    j = i + 1 + right[0]
    k = left[-1]
    xtol = 1e-15 * max(1.0, np.max(np.abs(profile.omega)))
    w_hi = brentq(f, max(profile.omega[j - 1], w_min), profile.omega[j], xtol=xtol, rtol=1e-15)
    w_lo = brentq(f, profile.omega[k], min(profile.omega[k + 1], w_min), xtol=xtol, rtol=1e-15)
    return w_hi - w_lo


def curvature_on_resonance(seq, step=None):
    """Second derivative of the ground-state population at Delta = 0.

    Five-point central difference with h = 1e-3 / tau.  The value is positive
    for a dip in P0 (equivalently it is -d^2 P1 / dDelta^2).
    """
    tau = float(np.asarray(seq.base.width))
    h = 1e-3 / tau if step is None else float(step)
    offsets = np.array([-2, -1, 0, 1, 2]) * h
    u = sequence_propagator(seq.at_detuning(offsets), "analytic")
    f = np.abs(u.a) ** 2
    return float((-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h))


def fisher_report_at(seq, detuning, method="analytic_derivative"):
    """Convenience wrapper: `sequence_fisher` at explicit detuning values."""
    return sequence_fisher(replace(seq, base=seq.base.with_detuning(detuning)), method)


def ode_fisher(seq, cfg=None, step=None):
    """CFI and QFI from finite differences of ODE-integrated train propagators.

    Five-point central differences in Delta with h = 1e-2 / tau, applied to
    the oracle amplitudes.  Default tolerances are tighter than the oracle's
    usual ones because the differences amplify integration noise.
    """
    from .ode import IntegrationConfig, integrate_sequence

    cfg = IntegrationConfig(rel_tol=1e-12, abs_tol=1e-14) if cfg is None else cfg
    tau = float(np.asarray(seq.base.width))
    h = 1e-2 / tau if step is None else float(step)
    delta = np.asarray(seq.base.detuning, dtype=float)
    offsets = np.array([-2, -1, 0, 1, 2]) * h
    stencil = delta[..., None] + offsets
    u = integrate_sequence(seq.at_detuning(stencil), cfg)
    weights = np.array([1, -8, 0, 8, -1]) / (12 * h)
    da = np.sum(u.a * weights, axis=-1)
    db = np.sum(u.b * weights, axis=-1)
    a, b = u.a[..., 2], u.b[..., 2]
    cfi = _cfi_from_amplitudes(a, b, da, db, zero_tol=_ZERO_AMPLITUDE_ODE)
    qfi = quantum_fisher_pure((a, b), (da, db))
    return FisherReport(delta[()], cfi[()], qfi, "finite_difference")
