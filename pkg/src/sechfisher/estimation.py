"""Monte Carlo simulation of the frequency-scan resonance measurement.

A probe is driven at each of M grid frequencies, `shots` times per frequency,
and the number of ground-state outcomes is recorded.  Two estimators recover
omega0 from the counts: the grid argmin of the counts, and the binomial
maximum-likelihood estimate over a continuous omega0.  Their empirical
variances are compared with the Cramer-Rao bound built from the total Fisher
information of the scan.

Every trial draws from its own stream, seeded by (seed, trial), so results do
not depend on how trials are distributed over workers.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .composite import SequenceSpec, sequence_probabilities
from .errors import DegenerateDataError
from .fisher import sequence_fisher

__all__ = [
    "ScanProtocol",
    "EstimationReport",
    "trial_rng",
    "scan_probabilities",
    "simulate_scan",
    "argmin_estimator",
    "mle_estimator",
    "scan_fisher_information",
    "variance_report",
    "run_experiment",
]

LIKELIHOOD_CLAMP = 1e-12


@dataclass(frozen=True)
class ScanProtocol:
    """Frequency-scan measurement.

    Attributes
    ----------
    omega0 : float
        True resonance frequency; must lie strictly inside the grid.
    grid : ndarray
        Sorted drive frequencies, at least 3.
    shots : int
        Repetitions per grid frequency.
    sequence : SequenceSpec
        Pulse train; only its pulse shape (amplitude, width, N, phase) is used.
    seed : int
        Root seed for the per-trial random streams.
    """

    omega0: float
    grid: np.ndarray
    shots: int = 1
    sequence: SequenceSpec = field(default_factory=SequenceSpec)
    seed: int = 0

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or grid.size < 3:
            raise ValueError("scan grid needs at least 3 frequencies")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("scan grid must be strictly increasing")
        if not grid[0] < self.omega0 < grid[-1]:
            raise ValueError("omega0 must lie strictly inside the scan grid")
        if int(self.shots) < 1:
            raise ValueError("shots must be at least 1")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "shots", int(self.shots))

    @property
    def total_shots(self):
        return self.shots * self.grid.size


@dataclass(frozen=True)
class EstimationReport:
    estimator: str
    trials: int
    variance: float
    crb: float
    ratio: float
    bias: float
    ci_low: float
    ci_high: float
    sub_crb: bool = False

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def trial_rng(seed, trial):
    """Independent generator for one trial, keyed by (seed, trial)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))))


def scan_probabilities(sequence, grid, omega0):
    """Ground-state probability at each grid frequency for resonance `omega0`.

    `omega0` may be an array; the result then has shape omega0.shape + grid.shape.
    """
    grid = np.asarray(grid, dtype=float)
    omega0 = np.asarray(omega0, dtype=float)
    detuning = grid - omega0[..., None] if omega0.ndim else grid - omega0
    p0, _ = sequence_probabilities(sequence.at_detuning(detuning))
    return np.clip(p0, 0.0, 1.0)


def simulate_scan(protocol, rng):
    """Ground-state counts per grid frequency for one run of the scan.

    Parameters
    ----------
    rng : numpy.random.Generator or int
        A generator, or a trial index combined with ``protocol.seed``.
    """
    if not isinstance(rng, np.random.Generator):
        rng = trial_rng(protocol.seed, rng)
    p0 = scan_probabilities(protocol.sequence, protocol.grid, protocol.omega0)
    return rng.binomial(protocol.shots, p0)


def argmin_estimator(counts, grid):
    """Grid frequency with the fewest ground-state outcomes.

    Ties go to the tied frequency closest to the grid median (lower one if two
    are equally close).
    """
    counts = np.asarray(counts)
    grid = np.asarray(grid, dtype=float)
    tied = np.flatnonzero(counts == counts.min())
    dist = np.abs(grid[tied] - np.median(grid))
    return float(grid[tied[np.argmin(dist)]])


def _neg_loglik(counts, shots, grid, sequence, omega0):
    # counts (..., M) against omega0 of matching leading shape
    p0 = np.clip(scan_probabilities(sequence, grid, omega0), LIKELIHOOD_CLAMP, 1.0 - LIKELIHOOD_CLAMP)
    return -np.sum(counts * np.log(p0) + (shots - counts) * np.log1p(-p0), axis=-1)


def mle_estimator(counts, shots, grid, model, oversample=8, xtol=1e-9):
    """Maximum-likelihood omega0 from binomial counts.

    A pre-scan over `oversample` points per grid interval picks the starting
    bracket, which golden-section search then refines to an absolute
    tolerance of ``xtol * max(1, grid span)``.

    Parameters
    ----------
    counts : array_like, shape (M,) or (T, M)
        Ground-state counts; a 2-D array estimates T scans at once.

    Raises
    ------
    DegenerateDataError
        All counts zero, all saturated, or a flat likelihood.
    """
    counts = np.asarray(counts, dtype=float)
    single = counts.ndim == 1
    counts = np.atleast_2d(counts)
    grid = np.asarray(grid, dtype=float)
    if np.any(np.all(counts == 0, axis=1) | np.all(counts == shots, axis=1)):
        raise DegenerateDataError("all outcomes identical; the likelihood carries no resonance information")

    cand = np.linspace(grid[0], grid[-1], oversample * (grid.size - 1) + 1)
    p0 = np.clip(scan_probabilities(model, grid, cand), LIKELIHOOD_CLAMP, 1.0 - LIKELIHOOD_CLAMP)
    logp, logq = np.log(p0), np.log1p(-p0)
    nll = -np.stack([np.sum(c * logp + (shots - c) * logq, axis=-1) for c in counts])
    if np.any(np.ptp(nll, axis=1) < 1e-12):
        raise DegenerateDataError("flat likelihood")
    i = np.argmin(nll, axis=1)
    lo = cand[np.maximum(i - 1, 0)]
    hi = cand[np.minimum(i + 1, cand.size - 1)]

    def f(w):
        return _neg_loglik(counts, shots, grid, model, w)

    # the iteration count depends only on the pre-scan spacing, so a trial's
    # estimate does not depend on which other trials share its batch
    est = _golden_section(f, lo, hi, xtol * max(1.0, np.ptp(grid)), width=2 * (cand[1] - cand[0]))
    return float(est[0]) if single else est


_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_section(f, lo, hi, xtol, width=None):
    # minimizes unimodal f elementwise on [lo, hi] to absolute tolerance xtol;
    # brackets no wider than `width` get a fixed number of iterations
    lo, hi = np.array(lo, dtype=float), np.array(hi, dtype=float)
    width = np.max(hi - lo) if width is None else width
    n_iter = max(0, int(np.ceil(np.log(xtol / width) / np.log(_INV_PHI))))
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(n_iter):
        left = f1 <= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        keep = np.where(left, x1, x2)
        keep_f = np.where(left, f1, f2)
        new = np.where(left, hi - _INV_PHI * (hi - lo), lo + _INV_PHI * (hi - lo))
        fn = f(new)
        x1, x2 = np.where(left, new, keep), np.where(left, keep, new)
        f1, f2 = np.where(left, fn, keep_f), np.where(left, keep_f, fn)
    return 0.5 * (lo + hi)


def scan_fisher_information(protocol):
    """Total Fisher information of one scan: shots * sum over grid of F(omega - omega0)."""
    seq = protocol.sequence.at_detuning(protocol.grid - protocol.omega0)
    rep = sequence_fisher(seq)
    return float(protocol.shots * np.sum(rep.cfi))


def variance_report(estimates, crb, true_value, estimator="mle", n_boot=1000, seed=0):
    """Empirical variance, bias and variance/CRB ratio with a bootstrap 95% interval.

    A ratio below the bootstrap slack (upper interval end under 1) sets `sub_crb`,
    which signals bias or a degenerate estimator rather than a broken bound.
    """
    est = np.asarray(estimates, dtype=float)
    if est.size < 100:
        raise ValueError("need at least 100 trials for a variance report")
    # shifting by one sample keeps constant input at exactly zero variance
    centred = est - est[0]
    var = float(np.var(centred, ddof=1))
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, est.size, size=(n_boot, est.size))
    boot = np.var(centred[idx], axis=1, ddof=1) / crb
    lo, hi = np.percentile(boot, [2.5, 97.5])
    ratio = var / crb
    return EstimationReport(
        estimator=estimator,
        trials=int(est.size),
        variance=var,
        crb=float(crb),
        ratio=float(ratio),
        bias=float(np.mean(est) - true_value),
        ci_low=float(lo),
        ci_high=float(hi),
        sub_crb=bool(hi < 1.0),
    )


def _run_trials(protocol, trials, estimators):
    counts = np.stack([simulate_scan(protocol, int(t)) for t in trials]) if len(trials) else np.empty((0, 0))
    out = {name: [] for name in estimators}
    if "argmin" in out:
        out["argmin"] = [argmin_estimator(c, protocol.grid) for c in counts]
    if "mle" in out and len(trials):
        out["mle"] = list(mle_estimator(counts, protocol.shots, protocol.grid, protocol.sequence))
    return out


def run_experiment(protocol, trials, estimators=("argmin", "mle"), workers=1):
    """Run `trials` independent scans and report each estimator against the CRB.

    Returns
    -------
    dict
        estimator name -> EstimationReport, plus "fisher_information".
    """
    estimators = tuple(estimators)
    chunks = np.array_split(np.arange(trials), max(1, workers))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_trials, [protocol] * len(chunks), chunks, [estimators] * len(chunks)))
    else:
        parts = [_run_trials(protocol, chunks[0], estimators)]
    fisher = scan_fisher_information(protocol)
    crb = 1.0 / fisher
    reports = {}
    for name in estimators:
        est = np.concatenate([p[name] for p in parts])
        reports[name] = variance_report(est, crb, protocol.omega0, estimator=name, seed=protocol.seed)
    reports["fisher_information"] = fisher
    return reports
