"""Classical and quantum Fisher information for omega0.

For the ground-state measurement the classical Fisher information (CFI) is
bounded by the quantum Fisher information (QFI).  Both equal pi^2 tau^2 on
resonance for a single pi-pulse and for the rotary echo of any length; with
phi = 0 the resonance value drops by (2N+1)^2.  Off resonance the rotary
echo tracks the QFI closely near the line centre but not globally: the CFI
vanishes at the side extrema of the line while the QFI does not.
"""

import numpy as np

from sechfisher import PulseParams, SequenceSpec, curvature_on_resonance, ode_fisher, sequence_fisher

td = np.linspace(-3, 3, 13)
for n, phase, label in ((0, np.pi, "single pulse"), (1, np.pi, "N=1, phi=pi"), (1, 0.0, "N=1, phi=0")):
    seq = SequenceSpec(n, phase, PulseParams(1.0, 1.0, td))
    r = sequence_fisher(seq)
    print(f"\n{label}: curvature of the dip {curvature_on_resonance(SequenceSpec(n, phase)):.6f}")
    print(" tau*Delta        CFI          QFI     CFI/QFI")
    for d, c, q in zip(td, r.cfi, r.qfi):
        print(f"{d:9.2f}   {c:10.6f}   {q:10.6f}   {c / q:8.5f}")

# the same numbers from finite differences of ODE-integrated propagators
seq = SequenceSpec(1, np.pi, PulseParams(1.0, 1.0, td))
a, o = sequence_fisher(seq), ode_fisher(seq)
print(f"\nN=1 phi=pi, analytic vs ODE CFI: max rel {np.max(np.abs(o.cfi / a.cfi - 1)):.1e}")
