"""Exact sech-pulse dynamics and Fisher information for resonance estimation.

Submodules
----------
special      complex Gamma, digamma and Chebyshev polynomials
propagator   closed-form single-pulse propagator and its detuning derivative
ode          adaptive Runge-Kutta oracle for the same dynamics
composite    phased 2N+1 pulse trains
fisher       classical / quantum Fisher information, FWHM, curvature
estimation   Monte Carlo frequency-scan experiments against the Cramer-Rao bound
cli          command-line front end
"""

__version__ = "0.1.0"

from .composite import (
    SequenceSpec,
    sequence_derivative,
    sequence_probabilities,
    sequence_propagator,
    sequence_propagator_chebyshev,
    sequence_propagator_direct,
)
from . import errors
from .estimation import ScanProtocol, mle_estimator, argmin_estimator, run_experiment
from .fisher import (
    FisherReport,
    ProbabilityProfile,
    classical_fisher_single_closed,
    curvature_on_resonance,
    fwhm,
    ode_fisher,
    probability_profile,
    quantum_fisher_pure,
    sequence_fisher,
)
from .ode import IntegrationConfig, integrate_pulse, integrate_sequence
from .propagator import (
    PulseParams,
    Su2Propagator,
    cayley_klein,
    propagator_detuning_derivative,
    transition_probabilities,
)

__all__ = [
    "IntegrationConfig",
    "integrate_pulse",
    "integrate_sequence",
    "errors",
    "SequenceSpec",
    "sequence_derivative",
    "sequence_probabilities",
    "sequence_propagator",
    "sequence_propagator_chebyshev",
    "sequence_propagator_direct",
    "FisherReport",
    "ProbabilityProfile",
    "classical_fisher_single_closed",
    "curvature_on_resonance",
    "fwhm",
    "ode_fisher",
    "probability_profile",
    "quantum_fisher_pure",
    "sequence_fisher",
    "PulseParams",
    "Su2Propagator",
    "cayley_klein",
    "propagator_detuning_derivative",
    "transition_probabilities",
    "ScanProtocol",
    "mle_estimator",
    "argmin_estimator",
    "run_experiment",
]
