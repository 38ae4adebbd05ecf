import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from sechfisher.composite import SequenceSpec, sequence_derivative
from sechfisher.errors import DomainError, NoCrossingError, NoMinimumError, NormalizationError
from sechfisher.fisher import (
    FisherReport,
    ProbabilityProfile,
    classical_fisher_binary,
    classical_fisher_single_closed,
    crb_variance,
    curvature_on_resonance,
    fisher_on_resonance_composite,
    fwhm,
    ode_fisher,
    probability_profile,
    quantum_fisher_pure,
    sequence_fisher,
)
from sechfisher.propagator import PulseParams, cayley_klein, propagator_detuning_derivative

finite = dict(allow_nan=False, allow_infinity=False)
PI2 = np.pi**2


def train(n, phase, td, area=1.0, tau=1.0):
    return SequenceSpec(n, phase, PulseParams.from_dimensionless(area, td, width=tau))


def test_binary_examples():
    assert classical_fisher_binary(0.5, 0.1) == pytest.approx(0.04)
    assert classical_fisher_binary(1.0, 0.0, curvature=-PI2 / 2) == pytest.approx(PI2)
    with pytest.raises(DomainError):
        classical_fisher_binary(1.0, 0.0)
    with pytest.raises(DomainError):
        classical_fisher_binary(1.0, 0.3, curvature=1.0)
    with pytest.raises(DomainError):
        classical_fisher_binary(1.2, 0.1)


def test_binary_resonance_limit_from_series():
    # P1 = 1 - c d^2/2 near resonance: the ratio tends to 2|c|, matching the single-pulse CFI
    c = curvature_on_resonance(train(0, np.pi, 0.0))
    for d in (1e-4, 1e-5):
        p1, dp1 = 1 - c * d**2 / 2, -c * d
        assert classical_fisher_binary(p1, dp1) == pytest.approx(2 * c, rel=1e-6)
    # c itself carries the 1e-4 finite-difference tolerance
    assert classical_fisher_binary(1.0, 0.0, curvature=-c) == pytest.approx(PI2, rel=1e-4)


def test_closed_form_examples():
    p = PulseParams.from_dimensionless(1.0, np.array([0.0, 1.0]))
    f = classical_fisher_single_closed(p)
    assert f[0] == pytest.approx(PI2, rel=1e-12)
    assert f[1] == pytest.approx(PI2 / np.cosh(np.pi / 2) ** 2, rel=1e-12)
    assert f[1] == pytest.approx(1.5676, abs=1e-4)
    assert classical_fisher_single_closed(PulseParams.from_dimensionless(0.0, 0.7)) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 3.9, **finite), st.floats(-6, 6, **finite), st.floats(0.3, 3, **finite))
def test_closed_form_matches_binary_from_probability_derivatives(area, td, tau):
    if abs(td) < 1e-3:
        return
    p = PulseParams.from_dimensionless(area, td, width=tau)
    x, y = np.pi * td / 2, np.pi * area / 2
    p1 = np.sin(y) ** 2 / np.cosh(x) ** 2
    dp1 = -np.pi * tau * np.sin(y) ** 2 * np.tanh(x) / np.cosh(x) ** 2
    if p1 >= 1 or classical_fisher_single_closed(p) < 1e-300:
        return
    assert classical_fisher_single_closed(p) == pytest.approx(classical_fisher_binary(p1, dp1), rel=1e-10)


def test_qfi_examples():
    u = cayley_klein(PulseParams.from_dimensionless(1.3, 0.4))
    c = 0.37
    assert quantum_fisher_pure((u.a, u.b), (1j * c * u.a, 1j * c * u.b)) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(NormalizationError):
        quantum_fisher_pure((1.0, 0.5), (0.0, 0.0))
    r = sequence_fisher(train(0, 0.0, np.array([0.0, 1.0])))
    assert r.qfi[0] == pytest.approx(PI2, rel=1e-10) and r.cfi[0] == pytest.approx(PI2, rel=1e-10)
    assert r.qfi[1] > r.cfi[1] * 1.01


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 4, **finite), st.floats(-6, 6, **finite), st.floats(0, 2 * np.pi, **finite))
def test_qfi_global_phase_invariance(area, td, chi):
    p = PulseParams.from_dimensionless(area, td)
    u = cayley_klein(p)
    da, db = propagator_detuning_derivative(p)
    e = np.exp(1j * chi)
    q1 = quantum_fisher_pure((u.a, u.b), (da, db))
    q2 = quantum_fisher_pure((e * u.a, e * u.b), (e * da, e * db))
    assert abs(q1 - q2) <= 1e-12 * max(1, q1)


def test_qfi_matches_high_precision_oracle():
    for n, phase, td in [(0, 0.0, 0.8), (1, np.pi, 0.7), (2, 0.0, -1.3), (1, 0.9, 2.0)]:
        cfi, qfi = oracles.train_fisher(1.0, td, n, phase)
        r = sequence_fisher(train(n, phase, td))
        assert r.cfi == pytest.approx(cfi, rel=1e-7) and r.qfi == pytest.approx(qfi, rel=1e-7)


@pytest.mark.parametrize("phase", [0.0, np.pi])
def test_cfi_never_exceeds_qfi(phase):
    td = np.linspace(-6, 6, 241)
    for n in range(6):
        r = sequence_fisher(train(n, phase, td))
        assert np.all(r.cfi >= 0) and np.all(r.qfi >= 0)
        assert np.all(r.cfi <= r.qfi * (1 + 1e-8) + 1e-12)


def test_three_cfi_routes_agree():
    td = np.linspace(-6, 6, 49)
    seq = train(0, 0.0, td)
    c = sequence_fisher(seq, "closed_form").cfi
    a = sequence_fisher(seq).cfi
    o = ode_fisher(seq).cfi
    m = c > 1e-3
    assert np.max(np.abs(a[m] / c[m] - 1)) <= 1e-6
    assert np.max(np.abs(o[m] / c[m] - 1)) <= 1e-6


def test_finite_difference_method_agrees():
    seq = train(2, np.pi, np.linspace(-3, 3, 31))
    a, f = sequence_fisher(seq), sequence_fisher(seq, "finite_difference")
    assert np.max(np.abs(a.qfi - f.qfi) / a.qfi) < 1e-7
    assert f.method_tag == "finite_difference"
    with pytest.raises(ValueError):
        sequence_fisher(seq, "closed_form")


def test_resonance_constants_table():
    assert fisher_on_resonance_composite(1, np.pi, 1.0) == pytest.approx(9.8696044, rel=1e-8)
    assert fisher_on_resonance_composite(1, 0.0, 1.0) == pytest.approx(PI2 / 9)
    assert fisher_on_resonance_composite(0, 0.0, 2.0) == pytest.approx(4 * PI2)


@pytest.mark.parametrize("n", range(6))
def test_numerical_resonance_cfi(n):
    assert sequence_fisher(train(n, np.pi, 0.0)).cfi == pytest.approx(PI2, rel=1e-6)
    assert sequence_fisher(train(n, 0.0, 0.0)).cfi == pytest.approx(PI2 / (2 * n + 1) ** 2, rel=1e-6)


def test_curvature_examples():
    assert curvature_on_resonance(train(1, np.pi, 0.0)) == pytest.approx(PI2 / 2, rel=1e-4)
    assert curvature_on_resonance(train(1, 0.0, 0.0)) == pytest.approx(PI2 / 18, rel=1e-4)
    for phase in (0.0, np.pi):
        assert curvature_on_resonance(train(0, phase, 0.0)) == pytest.approx(PI2 / 2, rel=1e-4)
    assert curvature_on_resonance(train(0, 0.0, 0.0, tau=2.0)) == pytest.approx(4 * PI2 / 2, rel=1e-4)


def test_crb_examples():
    assert crb_variance(PI2) == pytest.approx(0.10132, rel=1e-4)
    assert crb_variance(PI2, 100) == pytest.approx(1.0132e-3, rel=1e-4)
    f = sequence_fisher(train(0, 0.0, 1.0))
    assert f.crb_variance() == pytest.approx(np.cosh(np.pi / 2) ** 2 / PI2, rel=1e-10)
    assert f.crb_variance() == pytest.approx(0.6380, abs=1e-4)
    with pytest.raises(DomainError):
        crb_variance(0.0)
    with pytest.raises(DomainError):
        crb_variance(1.0, 0)
    assert isinstance(f, FisherReport)


def test_single_pulse_fwhm():
    prof = probability_profile(train(0, np.pi, 0.0), np.linspace(-4, 4, 81))
    assert fwhm(prof) == pytest.approx(4 * np.arcsinh(1) / np.pi, rel=1e-8)


def test_fwhm_scales_with_tau():
    prof = probability_profile(train(0, np.pi, 0.0, tau=2.0), np.linspace(-2, 2, 81))
    assert fwhm(prof) == pytest.approx(2 * np.arcsinh(1) / np.pi, rel=1e-8)


def test_fwhm_errors():
    seq = train(0, np.pi, 0.0)
    with pytest.raises(NoMinimumError):
        fwhm(probability_profile(seq, np.linspace(0, 4, 41)))
    with pytest.raises(NoCrossingError):
        fwhm(probability_profile(seq, np.linspace(-0.2, 0.2, 11)))


def test_profile_validation():
    with pytest.raises(ValueError):
        ProbabilityProfile(np.array([0.0, 1.0]), np.array([0.5, 0.5]), train(0, 0.0, 0.0))
    with pytest.raises(ValueError):
        ProbabilityProfile(np.array([0.0, 2.0, 1.0]), np.array([0.5, 0.5, 0.5]), train(0, 0.0, 0.0))
    with pytest.raises(ValueError):
        ProbabilityProfile(np.array([0.0, 1.0, 2.0]), np.array([0.5, 1.5, 0.5]), train(0, 0.0, 0.0))


def test_derivative_routes_on_composite():
    seq = train(3, np.pi, np.linspace(-3, 3, 13))
    _, da, db = sequence_derivative(seq, "analytic")
    _, fa, fb = sequence_derivative(seq, "finite_difference")
    assert np.max(np.abs(da - fa)) < 1e-7 and np.max(np.abs(db - fb)) < 1e-7
