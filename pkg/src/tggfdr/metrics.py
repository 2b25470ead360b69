"""Per-trial FDP/FNP and Monte-Carlo estimates of FDR, FNR and combined risk."""

from dataclasses import dataclass
import math

import numpy as np
from joblib import Parallel, delayed

from . import instance
from ._validation import DomainError, check_int, trial_rng
from .procedures import run_procedure


@dataclass(frozen=True)
class TrialMetrics:
    fdp: float
    fnp: float


@dataclass(frozen=True)
class RiskEstimate:
    """Monte-Carlo means of FDP and FNP with their standard errors."""

    fdr: float
    fnr: float
    risk: float
    fdr_se: float
    fnr_se: float
    trials: int


def trial_metrics(outcome, m):
    """FDP ``V / max(R, 1)`` and FNP ``missed / m`` for one outcome."""
    m = check_int(m, "m", 1)
    c = outcome.counts
    if c.true_discoveries + c.missed_signals != m:
        raise DomainError(f"counts cover {c.true_discoveries + c.missed_signals} signals, expected m={m}")
    rejected = c.false_discoveries + c.true_discoveries
    return TrialMetrics(fdp=c.false_discoveries / max(rejected, 1), fnp=c.missed_signals / m)


def _run_chunk(config, spec, procedure, level, seed, indices, placement):
    out = np.empty((len(indices), 3))
    for row, k in enumerate(indices):
        data = instance.generate(config, spec, trial_rng(seed, k), placement=placement)
        outcome = run_procedure(data, procedure, level, spec)
        tm = trial_metrics(outcome, config.m)
        out[row] = (tm.fdp, tm.fnp, outcome.threshold)
    return out


def simulate_trials(config, spec, procedure, level, trials, master_seed, n_jobs=1,
                    placement="prefix"):
    """Run ``trials`` independent trials.

    Returns an array of shape ``(trials, 3)`` whose columns are FDP, FNP and
    the realised threshold, in trial-index order. Trial ``k`` draws from a
    stream derived from ``(master_seed, k)`` alone, so the result does not
    depend on ``n_jobs``.
    """
    trials = check_int(trials, "trials", 1)
    n_jobs = check_int(n_jobs, "n_jobs", 1)
    if n_jobs == 1:
        return _run_chunk(config, spec, procedure, level, master_seed, range(trials), placement)
    chunks = np.array_split(np.arange(trials), min(trials, 4 * n_jobs))
    parts = Parallel(n_jobs=n_jobs)(
        delayed(_run_chunk)(config, spec, procedure, level, master_seed, chunk.tolist(), placement)
        for chunk in chunks
    )
    return np.concatenate(parts)


def _mean_se(values):
    # fsum is exactly rounded, so the result is independent of trial order
    k = len(values)
    mean = math.fsum(values) / k
    var = math.fsum((v - mean) ** 2 for v in values) / (k - 1)
    return mean, math.sqrt(var / k)


def summarize(fdp, fnp):
    """Aggregate per-trial proportions into a :class:`RiskEstimate`."""
    fdp = [float(v) for v in fdp]
    fnp = [float(v) for v in fnp]
    if len(fdp) < 2 or len(fdp) != len(fnp):
        raise DomainError("need at least two paired trials to estimate a standard error")
    fdr, fdr_se = _mean_se(fdp)
    fnr, fnr_se = _mean_se(fnp)
    return RiskEstimate(fdr=fdr, fnr=fnr, risk=fdr + fnr, fdr_se=fdr_se, fnr_se=fnr_se,
                        trials=len(fdp))


def estimate_risk(config, spec, procedure, q_or_t, trials, master_seed, n_jobs=1,
                  placement="prefix"):
    """Monte-Carlo estimate of FDR, FNR and their sum.

    Parameters
    ----------
    config : instance.ProblemConfig
    spec : tgg.DistributionSpec
    procedure : {"fixed", "bh", "bc"}
    q_or_t : float
        Threshold for ``"fixed"``; target FDR for ``"bh"`` and ``"bc"``.
    trials : int
        At least 2.
    master_seed : int
    n_jobs : int, default=1
        Worker processes. Results are bit-identical for any value.

    Returns
    -------
    RiskEstimate
    """
    trials = check_int(trials, "trials", 2)
    res = simulate_trials(config, spec, procedure, q_or_t, trials, master_seed,
                          n_jobs=n_jobs, placement=placement)
    return summarize(res[:, 0], res[:, 1])
