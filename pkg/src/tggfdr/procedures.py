"""Threshold-based testing procedures: fixed threshold, Benjamini-Hochberg, Barber-Candes.

Every procedure rejects ``{i : x_i >= threshold}``. An empty rejection set is
encoded as ``threshold = +inf``.

The functional API works on :class:`~tggfdr.instance.Dataset` objects and
returns a :class:`ProcedureOutcome` with ground-truth counts. The estimator
classes at the bottom expose the same rules with the scikit-learn
``fit``/``predict`` protocol on bare statistic vectors.
"""

from dataclasses import dataclass
import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import tgg
from ._validation import DomainError, check_not_nan, check_open_unit, check_statistics


@dataclass(frozen=True)
class TrialCounts:
    false_discoveries: int
    true_discoveries: int
    missed_signals: int
    n_plus: int
    n_minus: int


@dataclass(frozen=True, eq=False)
class ProcedureOutcome:
    """Realised threshold, rejected indices (sorted) and ground-truth counts."""

    threshold: float
    rejected: np.ndarray
    counts: TrialCounts


# -- array-level cores ------------------------------------------------------

def bh_threshold_value(x, q, gamma):
    """Benjamini-Hochberg threshold on statistics ``x``.

    Sort descending, ``p_(i) = Psi(x_(i))``, take the largest ``i`` with
    ``p_(i) <= q i / n``. Returns ``x_(i_BH)``, or ``+inf`` if no ``i`` passes.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n == 0:
        return math.inf
    xs = -np.sort(-x)
    p = tgg.survival_unchecked(gamma, xs)
    passing = np.flatnonzero(p <= q * np.arange(1, n + 1) / n)
    if passing.size == 0:
        return math.inf
    return float(xs[passing[-1]])


def bc_threshold_value(x, q):
    """Barber-Candes threshold: smallest positive observation ``t`` with
    ``(N_-(t) + 1) / max(N_+(t), 1) <= q``, or ``+inf`` if none passes."""
    x = np.asarray(x, dtype=float)
    xs = np.sort(x)
    cand = xs[xs > 0]
    if cand.size == 0:
        return math.inf
    n_plus = xs.size - np.searchsorted(xs, cand, side="left")
    n_minus = np.searchsorted(xs, -cand, side="right")
    passing = np.flatnonzero((n_minus + 1) / np.maximum(n_plus, 1) <= q)
    if passing.size == 0:
        return math.inf
    return float(cand[passing[0]])


# -- dataset API ------------------------------------------------------------

def _outcome(dataset, threshold):
    x = dataset.x
    mask = x >= threshold
    rejected = np.flatnonzero(mask)
    if rejected.size == 0:
        threshold = math.inf
    true_disc = int(np.count_nonzero(mask & dataset.is_signal))
    counts = TrialCounts(
        false_discoveries=int(rejected.size) - true_disc,
        true_discoveries=true_disc,
        missed_signals=int(np.count_nonzero(dataset.is_signal)) - true_disc,
        n_plus=int(rejected.size),
        n_minus=int(np.count_nonzero(x <= -threshold)),
    )
    return ProcedureOutcome(threshold=float(threshold), rejected=rejected, counts=counts)


def fixed_threshold(dataset, t):
    """Reject every observation ``>= t``."""
    return _outcome(dataset, check_not_nan(t, "t"))


def bh_fdp_hat(dataset, spec, t):
    """BH false-discovery-proportion estimate ``n Psi(t) / N_+(t)``."""
    t = check_not_nan(t, "t")
    n_plus = int(np.count_nonzero(dataset.x >= t))
    if n_plus == 0:
        raise DomainError(f"no observation is >= t={t}; the BH estimate is undefined")
    return dataset.x.size * float(tgg.survival_unchecked(spec.gamma, t)) / n_plus


def bh_threshold(dataset, spec, q):
    """Run Benjamini-Hochberg at level ``q`` with the exact null survival of ``spec``."""
    q = check_open_unit(q, "q")
    return _outcome(dataset, bh_threshold_value(dataset.x, q, spec.gamma))


def bc_fdp_hat(dataset, t):
    """BC estimate ``(N_-(t) + 1) / max(N_+(t), 1)`` for ``t >= 0``."""
    t = check_not_nan(t, "t")
    if t < 0:
        raise DomainError(f"the BC estimate needs t >= 0, got {t}")
    n_plus = int(np.count_nonzero(dataset.x >= t))
    n_minus = int(np.count_nonzero(dataset.x <= -t))
    return (n_minus + 1) / max(n_plus, 1)


def bc_threshold(dataset, q):
    """Run the Barber-Candes procedure at level ``q``."""
    q = check_open_unit(q, "q")
    return _outcome(dataset, bc_threshold_value(dataset.x, q))


def run_procedure(dataset, procedure, level, spec=None):
    """Dispatch on ``procedure`` in ``{"fixed", "bh", "bc"}``.

    ``level`` is the threshold for ``"fixed"`` and the target FDR otherwise.
    """
    if procedure == "fixed":
        return fixed_threshold(dataset, level)
    if procedure == "bh":
        if spec is None:
            raise DomainError("BH needs the null distribution spec")
        return bh_threshold(dataset, spec, level)
    if procedure == "bc":
        return bc_threshold(dataset, level)
    raise DomainError(f"unknown procedure {procedure!r}")


# -- estimators -------------------------------------------------------------

class _ThresholdRule(BaseEstimator):
    """Shared ``fit``/``predict`` plumbing for threshold rules."""

    def _fit_threshold(self, x):
        raise NotImplementedError

    def fit(self, X, y=None):
        """Compute the threshold from the statistics ``X``.

        Parameters
        ----------
        X : array-like of shape (n_hypotheses,) or (n_hypotheses, 1)
            One test statistic per hypothesis; larger means more evidence.
        y : None
            Ignored.

        Returns
        -------
        self
        """
        x = check_statistics(X)
        self.threshold_ = float(self._fit_threshold(x))
        self.n_hypotheses_ = x.size
        self.rejected_ = x >= self.threshold_
        self.n_rejected_ = int(np.count_nonzero(self.rejected_))
        return self

    def predict(self, X):
        """Boolean rejection mask ``X >= threshold_``."""
        check_is_fitted(self, "threshold_")
        return check_statistics(X) >= self.threshold_

    def fit_predict(self, X, y=None):
        return self.fit(X).rejected_


class FixedThreshold(_ThresholdRule):
    """Reject every statistic at or above a pre-specified ``threshold``."""

    def __init__(self, threshold=0.0):
        self.threshold = threshold

    def _fit_threshold(self, x):
        t = check_not_nan(self.threshold, "threshold")
        return t if np.any(x >= t) else math.inf


class BenjaminiHochberg(_ThresholdRule):
    """Benjamini-Hochberg step-up rule with the exact tGG null survival.

    Parameters
    ----------
    q : float, default=0.1
        Target false discovery rate in (0, 1).
    gamma : float, default=2.0
        Tail degree of the null law.
    """

    def __init__(self, q=0.1, gamma=2.0):
        self.q = q
        self.gamma = gamma

    def _fit_threshold(self, x):
        q = check_open_unit(self.q, "q")
        return bh_threshold_value(x, q, tgg.DistributionSpec(gamma=self.gamma).gamma)


class BarberCandes(_ThresholdRule):
    """Distribution-free rule that estimates the null tail by the reflected
    lower tail, ``(N_-(t) + 1) / max(N_+(t), 1)``."""

    def __init__(self, q=0.1):
        self.q = q

    def _fit_threshold(self, x):
        return bc_threshold_value(x, check_open_unit(self.q, "q"))
