"""Direct numerical integration of the driven two-level Schrodinger equation.

This is the independent check on every closed-form propagator.  Time is
measured in units of the pulse width, s = t / tau, and the equation is solved
in the interaction frame of the detuning term,

    H(s)/hbar = (tau/2) [Delta sz + Omega(s) (cos(phi) sy + sin(phi) sx)],

so that the propagator converges as the window grows.  Both columns of the
propagator are carried through an adaptive Dormand-Prince 5(4) integrator;
many pulses (array-valued parameters) are integrated together as one batch.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, TruncationError
from .propagator import Su2Propagator

__all__ = ["IntegrationConfig", "integrate_pulse", "integrate_pulse_matrix", "integrate_sequence"]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

TAIL_LIMIT = 1e-9


@dataclass(frozen=True)
class IntegrationConfig:
    """Window and tolerance settings for the ODE oracle.

    window_half_width is in units of tau; the envelope tail sech(window) must
    stay below 1e-9, which `integrate_pulse` enforces.
    """

    window_half_width: float = 25.0
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 200_000

    def __post_init__(self):
        if not self.window_half_width > 0:
            raise ValueError("window_half_width must be positive")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


def _rhs(s, y, area, tdet, phase):
    # y: (batch, 2, 2); only off-diagonal couplings in the interaction frame
    c = 0.5 * area / np.cosh(s)
    e = np.exp(1j * (phase + tdet * s))
    out = np.empty_like(y)
    out[:, 0, :] = (-c * e)[:, None] * y[:, 1, :]
    out[:, 1, :] = (c * np.conj(e))[:, None] * y[:, 0, :]
    return out


def _dopri(area, tdet, phase, cfg):
    w = float(cfg.window_half_width)
    batch = area.shape[0]
    y = np.broadcast_to(np.eye(2, dtype=complex), (batch, 2, 2)).copy()
    s = -w
    h = 1e-2
    steps = 0
    k = [None] * 7
    k[0] = _rhs(s, y, area, tdet, phase)
    while s < w:
        if steps >= cfg.max_steps:
            raise ConvergenceError(f"step budget of {cfg.max_steps} exhausted at s = {s:.3f}")
        steps += 1
        h = min(h, w - s)
        for i in range(1, 7):
            yi = y + h * sum(_A[i][j] * k[j] for j in range(i) if _A[i][j] != 0.0)
            k[i] = _rhs(s + _C[i] * h, yi, area, tdet, phase)
        y_new = y + h * sum(_B5[j] * k[j] for j in range(6) if _B5[j] != 0.0)
        err = h * sum(_E[j] * k[j] for j in range(7) if _E[j] != 0.0)
        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        ratio = float(np.max(np.abs(err) / scale))
        if ratio <= 1.0:
            s += h
            y = y_new
            k[0] = k[6]  # first-same-as-last
            factor = 5.0 if ratio == 0.0 else min(5.0, 0.9 * ratio ** -0.2)
        else:
            factor = max(0.2, 0.9 * ratio ** -0.2)
        h *= factor
    return y


def _unitarize(m):
    c0 = m[..., :, 0]
    c0 = c0 / np.linalg.norm(c0, axis=-1, keepdims=True)
    c1 = m[..., :, 1]
    c1 = c1 - np.sum(np.conj(c0) * c1, axis=-1, keepdims=True) * c0
    c1 = c1 / np.linalg.norm(c1, axis=-1, keepdims=True)
    return np.stack([c0, c1], axis=-1)


def _check_window(cfg):
    tail = 1.0 / np.cosh(cfg.window_half_width)
    if tail > TAIL_LIMIT:
        raise TruncationError(
            f"sech({cfg.window_half_width}) = {tail:.3g} exceeds {TAIL_LIMIT:g}; widen the window"
        )


def integrate_pulse_matrix(p, cfg=None, unitarize=True):
    """Full 2x2 propagator(s) of the pulse(s) `p` from the ODE, shape (..., 2, 2).

    With ``unitarize=False`` the raw integrator output is returned, which is
    what unitarity-drift diagnostics need.
    """
    cfg = IntegrationConfig() if cfg is None else cfg
    _check_window(cfg)
    area = np.asarray(p.area, dtype=float)
    tdet = np.asarray(np.multiply(p.width, p.detuning), dtype=float)
    phase = np.asarray(p.carrier_phase, dtype=float)
    area, tdet, phase = np.broadcast_arrays(area, tdet, phase)
    shape = area.shape
    m = _dopri(area.ravel(), tdet.ravel(), phase.ravel(), cfg).reshape(shape + (2, 2))
    return _unitarize(m) if unitarize else m


def integrate_pulse(p, cfg=None):
    """Propagator of one sech pulse by adaptive Runge-Kutta integration.

    Parameters
    ----------
    p : PulseParams
        May carry array-valued fields; all elements are integrated in one batch.
    cfg : IntegrationConfig, optional

    Returns
    -------
    Su2Propagator

    Raises
    ------
    TruncationError
        If sech(window_half_width) > 1e-9.
    ConvergenceError
        If the step budget is exhausted.
    """
    return Su2Propagator.from_matrix(integrate_pulse_matrix(p, cfg))


def integrate_sequence(seq, cfg=None):
    """Propagator of a phased 2N+1 pulse train, each pulse integrated separately.

    Pulse k (k = 0 .. 2N) carries carrier phase ``k % 2 * phi`` and the matrices
    are multiplied in time order.
    """
    from .composite import rescale_pulse

    pulse = rescale_pulse(seq.base, seq.n_half)
    n = 2 * seq.n_half + 1
    offsets = np.array([seq.phase if k % 2 else 0.0 for k in range(n)])
    base_phase = np.asarray(pulse.carrier_phase, dtype=float)
    area = np.asarray(pulse.area, dtype=float)
    tdet = np.asarray(np.multiply(pulse.width, pulse.detuning), dtype=float)
    area, tdet, base_phase = np.broadcast_arrays(area, tdet, base_phase)
    shape = area.shape
    # leading axis runs over pulses in the train
    phases = base_phase[None, ...] + offsets.reshape((n,) + (1,) * len(shape))
    stacked = type(pulse)(
        amplitude=np.broadcast_to(area, (n,) + shape),
        width=1.0,
        drive=np.broadcast_to(tdet, (n,) + shape),
        resonance=0.0,
        carrier_phase=phases,
    )
    mats = integrate_pulse_matrix(stacked, cfg)
    total = mats[0]
    for k in range(1, n):
        total = mats[k] @ total
    return Su2Propagator.from_matrix(total)
