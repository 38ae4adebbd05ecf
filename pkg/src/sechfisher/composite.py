"""Phased trains of 2N+1 sech pulses with fixed total duration.

The train is U (R U R^dag U)^N with R = exp(i phi sz / 2): pulses alternate
between carrier phase 0 and phi.  Each pulse is rescaled to width tau/(2N+1)
and amplitude (2N+1) * Omega0 so the total interaction time stays tau.

Two routes are provided.  `sequence_propagator_direct` multiplies the 2x2
matrices literally and works for any phi.  `sequence_propagator_chebyshev`
uses the closed forms in Chebyshev polynomials of the third and fourth kind,
which exist for phi = 0 and phi = pi.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import UnsupportedPhaseError
from .propagator import PulseParams, Su2Propagator, cayley_klein, propagator_detuning_derivative
from .special import chebyshev_angle

__all__ = [
    "SequenceSpec",
    "rescale_pulse",
    "same_phase_power",
    "sequence_propagator_direct",
    "sequence_propagator_chebyshev",
    "sequence_propagator",
    "sequence_derivative",
    "sequence_probabilities",
    "phase_kind",
]

_PHASE_TOL = 1e-12


def phase_kind(phi):
    """Return 0 or pi (as ints 0 / 1) for the two closed-form phases, else None."""
    r = np.mod(float(phi), 2 * np.pi)
    if min(r, 2 * np.pi - r) < _PHASE_TOL:
        return 0
    if abs(r - np.pi) < _PHASE_TOL:
        return 1
    return None


@dataclass(frozen=True)
class SequenceSpec:
    """A 2N+1 pulse train.

    Attributes
    ----------
    n_half : int
        N; the train holds 2N+1 pulses.
    phase : float
        Carrier-phase step phi between consecutive pulses (radians).
    base : PulseParams
        Single pulse spanning the full duration tau; its amplitude is the
        single-pulse Rabi frequency (1/tau for a pi-pulse).
    """

    n_half: int = 0
    phase: float = np.pi
    base: PulseParams = PulseParams()

    def __post_init__(self):
        if int(self.n_half) != self.n_half or self.n_half < 0:
            raise ValueError("n_half must be a non-negative integer")
        object.__setattr__(self, "n_half", int(self.n_half))
        object.__setattr__(self, "phase", float(self.phase))

    @property
    def pulse_count(self):
        return 2 * self.n_half + 1

    @property
    def pulse(self):
        """The rescaled pulse used for every element of the train."""
        return rescale_pulse(self.base, self.n_half)

    @property
    def total_duration(self):
        return np.multiply(self.pulse.width, self.pulse_count)

    def at_detuning(self, detuning):
        return replace(self, base=self.base.with_detuning(detuning))

    def at_drive(self, drive, resonance=None):
        base = self.base if resonance is None else replace(self.base, resonance=resonance)
        return replace(self, base=replace(base, drive=drive))


def rescale_pulse(base, n_half):
    """Width divided by 2N+1, amplitude multiplied by 2N+1; detuning unchanged."""
    if n_half < 0:
        raise ValueError("n_half must be non-negative")
    n = 2 * int(n_half) + 1
    if n == 1:
        return base
    return replace(base, width=np.divide(base.width, n), amplitude=np.multiply(base.amplitude, n))


def same_phase_power(u, n):
    """n-th power of an SU(2) propagator via Chebyshev polynomials of a_R.

    U^n has diagonal T_n(a_R) + i a_I U_{n-1}(a_R) and lower off-diagonal
    b U_{n-1}(a_R).
    """
    n = int(n)
    if n < 1:
        raise ValueError("power must be >= 1")
    a = np.asarray(u.a, dtype=complex)
    theta = np.arccos(np.clip(a.real, -1.0, 1.0))
    t = chebyshev_angle("first", n, theta)
    s = chebyshev_angle("second", n - 1, theta)
    return Su2Propagator((t + 1j * a.imag * s)[()], (np.asarray(u.b) * s)[()])


def _pulse_train(seq):
    pulse = seq.pulse
    u0 = cayley_klein(pulse)
    return u0, u0.conjugate_phase(seq.phase)


def sequence_propagator_direct(seq):
    """Literal product of the 2N+1 pulse matrices, any phase."""
    u0, uphi = _pulse_train(seq)
    m0, mphi = u0.matrix(), uphi.matrix()
    total = m0
    for _ in range(seq.n_half):
        total = m0 @ (mphi @ total)
    return Su2Propagator.from_matrix(total)


def _chebyshev_amplitudes(a, b, n_half, kind):
    a = np.asarray(a, dtype=complex)
    a_r, a_i = a.real, a.imag
    if kind == 1:
        # cos(theta_pi) = 1 - 2 a_I^2
        theta = 2.0 * np.arcsin(np.minimum(np.abs(a_i), 1.0))
    else:
        # cos(theta_0) = 2 a_R^2 - 1
        theta = 2.0 * np.arccos(np.minimum(np.abs(a_r), 1.0))
    v = chebyshev_angle("third", n_half, theta)
    w = chebyshev_angle("fourth", n_half, theta)
    big_a = a_r * v + 1j * a_i * w
    big_b = np.asarray(b) * (v if kind == 1 else w)
    return big_a, big_b


def sequence_propagator_chebyshev(seq):
    """Closed-form train propagator for phi in {0, pi}.

    Raises
    ------
    UnsupportedPhaseError
        For any other phase.
    """
    kind = phase_kind(seq.phase)
    if kind is None:
        raise UnsupportedPhaseError(f"no closed form for phase {seq.phase!r}; use the direct product")
    pulse = seq.pulse
    # build at zero carrier phase, rotate the whole train afterwards
    u = cayley_klein(replace(pulse, carrier_phase=0.0))
    big_a, big_b = _chebyshev_amplitudes(u.a, u.b, seq.n_half, kind)
    out = Su2Propagator(big_a[()], big_b[()])
    if np.any(np.asarray(pulse.carrier_phase) != 0):
        out = out.conjugate_phase(pulse.carrier_phase)
    return out


def sequence_propagator(seq, backend="analytic"):
    """Dispatch on backend: 'analytic' (closed form when available), 'direct' or 'ode'."""
    if backend == "analytic":
        if phase_kind(seq.phase) is None:
            return sequence_propagator_direct(seq)
        return sequence_propagator_chebyshev(seq)
    if backend == "direct":
        return sequence_propagator_direct(seq)
    if backend == "ode":
        from .ode import integrate_sequence

        return integrate_sequence(seq)
    raise ValueError(f"unknown backend {backend!r}")


def sequence_derivative(seq, method="analytic", step=None):
    """Train propagator and its detuning derivative.

    Parameters
    ----------
    method : {"analytic", "finite_difference"}
        "analytic" applies the product rule to per-pulse digamma derivatives;
        "finite_difference" differentiates the direct product numerically
        (central difference, Richardson-extrapolated, h = 1e-5 / tau).

    Returns
    -------
    (Su2Propagator, dA, dB)
    """
    if method == "finite_difference":
        tau = np.asarray(seq.base.width, dtype=float)
        h = 1e-5 / tau if step is None else step
        delta = seq.base.detuning

        def central(hh):
            up = sequence_propagator_direct(seq.at_detuning(delta + hh))
            dn = sequence_propagator_direct(seq.at_detuning(delta - hh))
            return (up.a - dn.a) / (2 * hh), (up.b - dn.b) / (2 * hh)

        d1, d2, d4 = central(h), central(h / 2), central(h / 4)
        outs = []
        for k in range(2):
            r1 = (4 * d2[k] - d1[k]) / 3
            r2 = (4 * d4[k] - d2[k]) / 3
            outs.append(((16 * r2 - r1) / 15)[()])
        return sequence_propagator_direct(seq), outs[0], outs[1]
    if method != "analytic":
        raise ValueError(f"unknown derivative method {method!r}")

    pulse = seq.pulse
    u0 = cayley_klein(pulse)
    da0, db0 = propagator_detuning_derivative(pulse, check=False)
    m0 = u0.matrix()
    dm0 = Su2Propagator(da0, db0).matrix()
    phi = seq.phase
    uphi = u0.conjugate_phase(phi)
    mphi = uphi.matrix()
    dmphi = Su2Propagator(da0, db0 * np.exp(-1j * phi)).matrix()
    total, dtotal = m0, dm0
    for _ in range(seq.n_half):
        total, dtotal = mphi @ total, dmphi @ total + mphi @ dtotal
        total, dtotal = m0 @ total, dm0 @ total + m0 @ dtotal
    return Su2Propagator.from_matrix(total), dtotal[..., 0, 0][()], dtotal[..., 1, 0][()]


def sequence_probabilities(seq, method="closed_form"):
    """Ground/excited populations after the train, (P0, P1) with P0 + P1 = 1.

    For phi = pi, P1 = |b|^2 V_N(cos th)^2 with cos th = 1 - 2 a_I^2; for
    phi = 0, P1 = |b|^2 W_N(cos th)^2 with cos th = 2 a_R^2 - 1.  Other phases,
    or ``method="direct"``, use the matrix product.
    """
    kind = phase_kind(seq.phase)
    if method == "direct" or kind is None:
        u = sequence_propagator_direct(seq)
        p1 = np.abs(u.b) ** 2
        return 1.0 - p1, p1
    if method != "closed_form":
        raise ValueError(f"unknown method {method!r}")
    u = cayley_klein(replace(seq.pulse, carrier_phase=0.0))
    _, big_b = _chebyshev_amplitudes(u.a, u.b, seq.n_half, kind)
    p1 = np.abs(big_b) ** 2
    return 1.0 - p1, p1


def ground_amplitude_probability(seq):
    """|A|^2 from the closed form (or direct product); accurate near P0 = 0."""
    u = sequence_propagator(seq, "analytic")
    return np.abs(u.a) ** 2
