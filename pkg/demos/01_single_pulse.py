"""Single sech pulse: exact propagator, ODE check and the excitation line.

A pi-pulse (tau * Omega0 = 1) fully inverts the two-level system on resonance.
Off resonance the excited population falls as sech^2(pi tau Delta / 2), and
the exact Gamma-function propagator agrees with brute-force integration of
the Schrodinger equation.
"""

import numpy as np

from sechfisher import PulseParams, cayley_klein, integrate_pulse, transition_probabilities
from sechfisher.fisher import fwhm, probability_profile
from sechfisher.composite import SequenceSpec

tau = 1.0
pulse = PulseParams(amplitude=1.0 / tau, width=tau)

# on resonance
u = cayley_klein(pulse)
print("resonance: a =", np.round(u.a, 12), " b =", np.round(u.b, 12))

# a detuning sweep, closed form against the ODE oracle
detuning = np.linspace(-6, 6, 13) / tau
sweep = pulse.with_detuning(detuning)
exact = cayley_klein(sweep)
ode = integrate_pulse(sweep)
p0, p1 = transition_probabilities(sweep)
print("\n tau*Delta      P1 exact     |a_exact - a_ode|")
for d, pp, e, o in zip(detuning * tau, p1, exact.a, ode.a):
    print(f"{d:9.2f}   {pp:12.8f}   {abs(e - o):10.2e}")

# the line width from root finding on the continuous model
prof = probability_profile(SequenceSpec(0, np.pi, pulse), np.linspace(-4, 4, 81) / tau)
print(f"\nFWHM = {fwhm(prof):.10f}, 4 asinh(1)/(pi tau) = {4 * np.arcsinh(1) / (np.pi * tau):.10f}")
