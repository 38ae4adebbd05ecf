"""Phased composite trains: Chebyshev closed forms versus matrix products.

2N+1 pulses share the duration tau, alternating carrier phase 0 and phi.
For phi = pi (rotary echo) and phi = 0 the train propagator is a Chebyshev
polynomial expression in the single-pulse Cayley-Klein parameters.
"""

import numpy as np

from sechfisher import (
    PulseParams,
    SequenceSpec,
    integrate_sequence,
    sequence_probabilities,
    sequence_propagator_chebyshev,
    sequence_propagator_direct,
)

td = np.linspace(-6, 6, 241)
base = PulseParams(amplitude=1.0, width=1.0, drive=td)

for phase, label in ((np.pi, "phi = pi"), (0.0, "phi = 0")):
    worst = 0.0
    for n in range(11):
        seq = SequenceSpec(n, phase, base)
        c, d = sequence_propagator_chebyshev(seq), sequence_propagator_direct(seq)
        worst = max(worst, np.max(np.abs(c.a - d.a)), np.max(np.abs(c.b - d.b)))
    print(f"{label}: closed form vs direct product, N <= 10: {worst:.1e}")

# any other phase goes through the direct product; the ODE agrees
seq = SequenceSpec(2, np.pi / 2, PulseParams(1.0, 1.0, np.array([-1.0, 0.3, 2.0])))
o, d = integrate_sequence(seq), sequence_propagator_direct(seq)
print(f"phi = pi/2, N = 2: direct vs ODE {np.max(np.abs(o.a - d.a)):.1e}")

# excitation lines for 1 pulse and 3 pulses at both phases
print("\n tau*Delta    P0 single   P0 N=1 phi=0   P0 N=1 phi=pi")
cols = [sequence_probabilities(SequenceSpec(n, ph, base))[0] for n, ph in ((0, 0.0), (1, 0.0), (1, np.pi))]
for i in range(0, td.size, 20):
    print(f"{td[i]:9.2f}   {cols[0][i]:10.6f}   {cols[1][i]:12.6f}   {cols[2][i]:13.6f}")
