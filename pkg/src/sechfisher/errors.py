"""Exception hierarchy shared by every module of the package."""


class SechFisherError(Exception):
    """Base class for all package errors."""


class PoleError(SechFisherError, ValueError):
    """Argument sits on a pole (non-positive integer) of Gamma or digamma."""


class DomainError(SechFisherError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericalError(SechFisherError, ArithmeticError):
    """An internal consistency check (unitarity, derivative agreement) failed."""


class ConvergenceError(SechFisherError, RuntimeError):
    """Adaptive integrator exceeded its step budget."""


class TruncationError(SechFisherError, ValueError):
    """Integration window too short for the sech envelope tail."""


class UnsupportedPhaseError(SechFisherError, ValueError):
    """Closed-form composite propagators exist only for phases 0 and pi."""


class NormalizationError(SechFisherError, ValueError):
    """State vector is not normalized."""


class NoMinimumError(SechFisherError, ValueError):
    """Profile has no interior minimum."""


class NoCrossingError(SechFisherError, ValueError):
    """Profile never reaches the half-depth level inside the scan range."""


class DegenerateDataError(SechFisherError, ValueError):
    """Outcome counts carry no information about the resonance."""
