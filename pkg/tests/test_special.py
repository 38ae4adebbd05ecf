import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from sechfisher.errors import DomainError, PoleError
from sechfisher.special import (
    chebyshev,
    chebyshev_angle,
    complex_digamma,
    complex_gamma,
    cospi,
    reciprocal_gamma,
    reciprocal_gamma_derivative,
    sinpi,
)

finite = dict(allow_nan=False, allow_infinity=False)


def test_gamma_known_values():
    assert complex_gamma(0.5) == pytest.approx(np.sqrt(np.pi), rel=1e-14)
    assert complex_gamma(5.0) == pytest.approx(24.0, rel=1e-14)
    assert complex_gamma(1 + 0j) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("z", [0.3 + 2j, -2.7 + 0.4j, 7.5 - 11j, 0.5 + 30j, -0.5, 1e-3 + 1e-3j, 20 + 20j])
def test_gamma_against_mpmath(z):
    assert abs(complex_gamma(z) / oracles.gamma(z) - 1) < 1e-12


def test_gamma_reference_point():
    z = 0.5 + 0.5j
    assert abs(complex_gamma(z) / oracles.gamma(z) - 1) < 1e-12


def test_gamma_recurrence_random_batch():
    rng = np.random.default_rng(7)
    z = rng.uniform(0.5, 20, 1000) + 1j * rng.uniform(-20, 20, 1000)
    rel = np.abs(complex_gamma(z + 1) / (z * complex_gamma(z)) - 1)
    assert rel.max() < 1e-11


def test_gamma_half_line_grid():
    y = np.arange(-50, 51) * 0.1
    g = complex_gamma(0.5 + 1j * y)
    assert np.max(np.abs(np.abs(g) ** 2 * np.cosh(np.pi * y) / np.pi - 1)) < 1e-10


def test_gamma_disc_of_radius_50():
    rng = np.random.default_rng(3)
    r, t = 50 * np.sqrt(rng.uniform(0, 1, 40)), rng.uniform(0, 2 * np.pi, 40)
    zs = r * np.exp(1j * t)
    # keep clear of the overflow region of the left half-plane
    zs = zs[np.abs(complex_gamma(zs)) < 1e300]
    for z in zs:
        ref = oracles.gamma(z)
        if ref != 0:
            assert abs(complex_gamma(z) / ref - 1) < 1e-12, z


@pytest.mark.parametrize("k", [0, 1, 2, 7])
def test_gamma_poles(k):
    with pytest.raises(PoleError):
        complex_gamma(-float(k))
    assert reciprocal_gamma(-float(k)) == 0
    assert reciprocal_gamma_derivative(-float(k)) == (-1) ** k * math.factorial(k)


@settings(max_examples=60, deadline=None)
@given(st.floats(-8, 8, **finite), st.floats(-20, 20, **finite))
def test_gamma_recurrence(x, y):
    z = complex(x, y)
    if abs(z) < 1e-3 or (abs(y) < 1e-6 and abs(x - round(x)) < 1e-6 and x < 0.5):
        return
    lhs = complex_gamma(z + 1)
    rhs = z * complex_gamma(z)
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), 1e-300) + 1e-300


@settings(max_examples=60, deadline=None)
@given(st.floats(-40, 40, **finite))
def test_gamma_half_line_modulus(y):
    # |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
    g = complex_gamma(0.5 + 1j * y)
    assert abs(abs(g) ** 2 * np.cosh(np.pi * y) / np.pi - 1) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.floats(-6, 6, **finite), st.floats(-6, 6, **finite))
def test_reciprocal_gamma_is_inverse(x, y):
    z = complex(x, y)
    if abs(y) < 1e-3 and x < 0.5 and abs(x - round(x)) < 1e-3:
        return
    assert abs(reciprocal_gamma(z) * complex_gamma(z) - 1) < 1e-12


@pytest.mark.parametrize("z", [0.5 + 0.5j, -3.3 + 0.2j, 12.5 - 3j, 0.01 + 5j, 0.5 - 40j])
def test_digamma_against_mpmath(z):
    assert abs(complex_digamma(z) - oracles.digamma(z)) < 1e-12 * max(1, abs(oracles.digamma(z)))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 6, **finite), st.floats(-10, 10, **finite))
def test_digamma_finite_difference(x, y):
    z = complex(x, y)
    h = 1e-4
    fd = oracles.richardson_derivative(lambda t: np.log(complex_gamma(z + t)), 0.0, h)
    # log branch jumps are constant on the tiny stencil, so the derivative is unaffected
    assert abs(fd - complex_digamma(z)) < 1e-7 * max(1, abs(complex_digamma(z)))


def test_digamma_reference_point():
    z = 0.5 + 1.0j
    fd = oracles.richardson_derivative(lambda t: complex_gamma(z + t), 0.0, 1e-3) / complex_gamma(z)
    assert abs(complex_digamma(z) - fd) < 1e-8


def test_digamma_disc_of_radius_50():
    rng = np.random.default_rng(5)
    zs = rng.uniform(-35, 35, 60) + 1j * rng.uniform(-35, 35, 60)
    for z in zs:
        ref = oracles.digamma(z)
        assert abs(complex_digamma(z) / ref - 1) < 1e-10, z


def test_digamma_pole():
    with pytest.raises(PoleError):
        complex_digamma(-3.0)


def test_reciprocal_gamma_derivative_regular():
    z = 0.7 - 1.3j
    fd = oracles.richardson_derivative(reciprocal_gamma, z, 1e-4)
    assert abs(reciprocal_gamma_derivative(z) - fd) < 1e-9


def test_sinpi_cospi_exact():
    assert sinpi(3.0) == 0.0
    assert cospi(0.5) == 0.0
    assert sinpi(0.5) == 1.0
    z = 0.3 + 0.2j
    assert abs(sinpi(z) - np.sin(np.pi * z)) < 1e-15


@pytest.mark.parametrize("kind", ["first", "second", "third", "fourth"])
@pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 25, 50])
def test_chebyshev_trig_vs_recurrence(kind, n):
    x = np.linspace(-1, 1, 401)
    ref = np.array([oracles.chebyshev_recurrence(kind, n, xx) for xx in x])
    assert np.max(np.abs(chebyshev(kind, n, x) - ref)) < 1e-12 * max(1, np.max(np.abs(ref)))


def test_chebyshev_third_kind_reference():
    assert abs(chebyshev("third", 3, 0.1) - oracles.chebyshev_recurrence("third", 3, 0.1)) < 1e-12


@pytest.mark.parametrize("n", [0, 1, 4, 13, 30])
def test_chebyshev_pell_identity(n):
    x = np.linspace(-1, 1, 301)
    lhs = chebyshev("third", n, x) * chebyshev("fourth", n, x)
    assert np.max(np.abs(lhs - chebyshev("second", 2 * n, x))) < 1e-10


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["first", "second", "third", "fourth"]), st.integers(0, 30), st.floats(-1, 1, **finite))
def test_chebyshev_property(kind, n, x):
    ref = oracles.chebyshev_recurrence(kind, n, x)
    assert abs(chebyshev(kind, n, x) - ref) < 1e-9 * max(1.0, (2 * n + 1) ** 2)


def test_chebyshev_endpoint_values():
    # removable singularities: V_n(1) = 1, V_n(-1) = (-1)^n (2n+1), W_n(1) = 2n+1, W_n(-1) = (-1)^n
    for n in range(6):
        assert chebyshev("third", n, 1.0) == pytest.approx(1.0)
        assert chebyshev("third", n, -1.0) == pytest.approx((-1) ** n * (2 * n + 1))
        assert chebyshev("fourth", n, 1.0) == pytest.approx(2 * n + 1)
        assert chebyshev("fourth", n, -1.0) == pytest.approx((-1) ** n)


def test_chebyshev_domain():
    assert chebyshev("first", 3, 1 + 1e-13) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        chebyshev("first", 3, 1.1)
    with pytest.raises(DomainError):
        chebyshev_angle("third", -1, 0.3)
    with pytest.raises(ValueError):
        chebyshev_angle("fifth", 1, 0.3)
