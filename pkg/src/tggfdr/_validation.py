"""Input validation helpers and error types shared across the package."""

import math
import numbers

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InfeasibleError(DomainError):
    """The signal exponent does not exceed the sparsity exponent (r <= beta)."""


def check_finite(value, name):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def check_not_nan(value, name):
    value = float(value)
    if math.isnan(value):
        raise DomainError(f"{name} must not be NaN")
    return value


def check_open_unit(value, name):
    value = float(value)
    if not 0.0 < value < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {value!r}")
    return value


def check_positive(value, name):
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_gamma(gamma):
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma < 1.0:
        raise DomainError(f"gamma must be >= 1, got {gamma!r}")
    return gamma


def check_int(value, name, minimum):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_statistics(x):
    """Return ``x`` as a 1-D float array with no NaNs."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 2 and 1 in x.shape:
        x = x.ravel()
    if x.ndim != 1:
        raise DomainError(f"expected a 1-D vector of statistics, got shape {x.shape}")
    if np.isnan(x).any():
        raise DomainError("statistics contain NaN")
    return x


def derive_seed(master_seed, *keys):
    """Deterministic 63-bit seed from a master seed and an index path."""
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def trial_rng(seed, trial_index):
    """Generator for one Monte-Carlo trial; a pure function of ``(seed, trial_index)``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial_index),)))
