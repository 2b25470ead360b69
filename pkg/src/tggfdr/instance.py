"""Sparse sequence model instances: configuration and simulated draws."""

from dataclasses import dataclass, field
import csv
import math

import numpy as np

from . import tgg
from ._validation import DomainError, check_gamma, check_int, check_positive


@dataclass(frozen=True)
class ProblemConfig:
    """Parameters of one model instance.

    ``m`` signals sit among ``n`` hypotheses, each shifted by ``mu``.
    Build instances with :func:`make_config` or :func:`from_pi1` so the
    derived fields stay consistent.
    """

    n: int
    beta: float
    r: float
    gamma: float
    m: int
    mu: float
    pi1: float


def _signal_count(n, beta):
    # round-half-to-even, clamped to [1, n]
    return min(max(round(n ** (1.0 - beta)), 1), n)


def _mean_shift(n, r, gamma):
    return (gamma * r * math.log(n)) ** (1.0 / gamma)


def make_config(n, beta, r, gamma):
    """Configuration with ``m = round(n**(1 - beta))`` and ``mu = (gamma r log n)**(1/gamma)``."""
    n = check_int(n, "n", 2)
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta!r}")
    r = check_positive(r, "r")
    gamma = check_gamma(gamma)
    m = _signal_count(n, beta)
    return ProblemConfig(n=n, beta=beta, r=r, gamma=gamma, m=m,
                         mu=_mean_shift(n, r, gamma), pi1=m / n)


def from_pi1(n, pi1, r, gamma):
    """Linear-sparsity configuration: ``beta = log(1/pi1) / log n``, ``m = round(pi1 n)``."""
    n = check_int(n, "n", 2)
    pi1 = float(pi1)
    if not 0.0 < pi1 <= 0.5:
        raise DomainError(f"pi1 must lie in (0, 1/2], got {pi1!r}")
    r = check_positive(r, "r")
    gamma = check_gamma(gamma)
    beta = math.log(1.0 / pi1) / math.log(n)
    if beta >= 1.0:
        raise DomainError(f"pi1={pi1} is below 1/n for n={n}")
    m = min(max(round(pi1 * n), 1), n)
    return ProblemConfig(n=n, beta=beta, r=r, gamma=gamma, m=m,
                         mu=_mean_shift(n, r, gamma), pi1=m / n)


@dataclass(frozen=True, eq=False)
class Dataset:
    """One simulated draw: observations ``x`` and ground-truth labels ``is_signal``."""

    x: np.ndarray
    is_signal: np.ndarray
    config: ProblemConfig = field(repr=False)

    def __post_init__(self):
        if self.x.shape != self.is_signal.shape or self.x.ndim != 1:
            raise DomainError("x and is_signal must be 1-D vectors of equal length")


def generate(config, spec, rng, placement="prefix"):
    """Draw a :class:`Dataset` from the sequence model.

    Parameters
    ----------
    config : ProblemConfig
    spec : tgg.DistributionSpec
        Must share ``gamma`` with ``config``.
    rng : numpy.random.Generator or int
    placement : {"prefix", "random"}
        ``"prefix"`` puts the signals at indices ``0..m-1``; ``"random"`` draws
        a uniformly random index subset of size ``m``.
    """
    if spec.gamma != config.gamma:
        raise DomainError(f"spec.gamma={spec.gamma} does not match config.gamma={config.gamma}")
    rng = np.random.default_rng(rng)
    x = tgg.sample(spec, rng, config.n)
    is_signal = np.zeros(config.n, dtype=bool)
    if placement == "prefix":
        is_signal[: config.m] = True
    elif placement == "random":
        is_signal[rng.choice(config.n, size=config.m, replace=False)] = True
    else:
        raise DomainError(f"unknown placement {placement!r}")
    x[is_signal] += config.mu
    return Dataset(x=x, is_signal=is_signal, config=config)


def write_dataset(dataset, path):
    """Dump a dataset as tab-separated ``index, x, is_signal`` rows (debugging aid)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["index", "x", "is_signal"])
        for i, (xi, si) in enumerate(zip(dataset.x, dataset.is_signal)):
            writer.writerow([i, format(float(xi), ".17g"), int(si)])


def read_dataset(path, config):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t"))
    x = np.array([float(row["x"]) for row in rows])
    is_signal = np.array([row["is_signal"] == "1" for row in rows])
    return Dataset(x=x, is_signal=is_signal, config=config)
